#include "dsirp/prize_model.hpp"

#include <algorithm>
#include <cmath>

#include "dsirp/errors.hpp"
#include "json_util.hpp"
#include "model_json.hpp"

namespace dsirp {

namespace {

double relu(double x) { return x > 0.0 ? x : 0.0; }

// Linear plus pairwise feature term shared by every customer and level.
double feature_term(const FeatureVector& f, const ModelParams& w) {
  const int F = w.n_features();
  double s = 0.0;
  for (int a = 0; a < F; ++a) s += w.w1[a] * f[a];
  double quad = 0.0;
  std::size_t k = 0;
  for (int a = 0; a < F; ++a)
    for (int b = a + 1; b < F; ++b, ++k) quad += w.w2_upper[k] * f[a] * f[b];
  return s + 2.0 * quad;
}

void check_shapes(const PrizeInput& in, const ModelParams& w) {
  const int H = static_cast<int>(w.w3.size());
  if (H < 1 || w.w4.size() != w.w3.size()) throw InvalidInput("w3 and w4 must have the same number of rows >= 1");
  const std::size_t P = w.w3.front().size();
  for (int h = 0; h < H; ++h)
    if (w.w3[h].size() != P || w.w4[h].size() != P) throw InvalidInput("w3 and w4 rows must have |P| entries");
  for (const auto& q : in.quantiles)
    if (q.size() != P) throw InvalidInput("quantile rows do not match |P| of the parameters");
  const std::size_t F = w.w1.size();
  if (w.w2_upper.size() != F * (F - (F > 0 ? 1 : 0)) / 2) throw InvalidInput("w2 triangle has the wrong length");
  if (in.features.empty()) {
    if (F != 0) throw InvalidInput("contextual parameters need features for every look-ahead period");
  } else {
    if (static_cast<int>(in.features.size()) < H) throw InvalidInput("missing context for a look-ahead period");
    for (const auto& f : in.features)
      if (f.size() != F) throw InvalidInput("feature vector dimension does not match w1");
  }
}

// cum[p][h] = sum_{t <= h} phi1(Q_p, features_t) for one customer, plus the
// pre-activation values needed by the backward pass.
struct Cumulative {
  Matrix pre;  // [p][t]
  Matrix cum;  // [p][h]
};

Cumulative cumulative(const Vector& q, const Vector& feat_term, int H) {
  const std::size_t P = q.size();
  Cumulative c{Matrix(P, Vector(H)), Matrix(P, Vector(H))};
  for (std::size_t p = 0; p < P; ++p) {
    double acc = 0.0;
    for (int t = 0; t < H; ++t) {
      c.pre[p][t] = q[p] + feat_term[t];
      acc += relu(c.pre[p][t]);
      c.cum[p][t] = acc;
    }
  }
  return c;
}

Vector feature_terms(const PrizeInput& in, const ModelParams& w, int H) {
  Vector ft(H, 0.0);
  if (!in.features.empty())
    for (int t = 0; t < H; ++t) ft[t] = feature_term(in.features[t], w);
  return ft;
}

}  // namespace

void QuantileConfig::validate() const {
  if (levels.empty()) throw InvalidInput("quantile levels must not be empty");
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] > 0.0 && levels[k] < 1.0)) throw InvalidInput("quantile levels must lie in (0, 1)");
    if (k > 0 && !(levels[k] > levels[k - 1])) throw InvalidInput("quantile levels must be strictly increasing");
  }
  if (horizon < 1) throw InvalidInput("look-ahead horizon must be at least 1");
}

std::size_t pair_index(int a, int b, int n_features) {
  if (a > b) std::swap(a, b);
  if (a == b || a < 0 || b >= n_features) throw InvalidInput("pair index out of range");
  // Rows before a contribute (F-1) + (F-2) + ... + (F-a) entries.
  return static_cast<std::size_t>(a) * (2 * n_features - a - 1) / 2 + (b - a - 1);
}

double ModelParams::w2(int a, int b) const {
  if (a == b) return 0.0;
  return w2_upper[pair_index(a, b, n_features())];
}

Matrix ModelParams::w2_full() const {
  const int F = n_features();
  Matrix m(F, Vector(F, 0.0));
  for (int a = 0; a < F; ++a)
    for (int b = a + 1; b < F; ++b) m[a][b] = m[b][a] = w2(a, b);
  return m;
}

std::size_t ModelParams::size() const {
  std::size_t s = w1.size() + w2_upper.size();
  for (const auto& r : w3) s += r.size();
  for (const auto& r : w4) s += r.size();
  return s;
}

Vector ModelParams::flatten() const {
  Vector v;
  v.reserve(size());
  v.insert(v.end(), w1.begin(), w1.end());
  v.insert(v.end(), w2_upper.begin(), w2_upper.end());
  for (const auto& r : w3) v.insert(v.end(), r.begin(), r.end());
  for (const auto& r : w4) v.insert(v.end(), r.begin(), r.end());
  return v;
}

void ModelParams::assign(std::span<const double> flat) {
  if (flat.size() != size()) throw InvalidInput("flat parameter vector has the wrong length");
  auto it = flat.begin();
  auto take = [&it](Vector& dst) {
    std::copy(it, it + static_cast<std::ptrdiff_t>(dst.size()), dst.begin());
    it += static_cast<std::ptrdiff_t>(dst.size());
  };
  take(w1);
  take(w2_upper);
  for (auto& r : w3) take(r);
  for (auto& r : w4) take(r);
}

bool ModelParams::same_shape(const ModelParams& o) const {
  if (w1.size() != o.w1.size() || w2_upper.size() != o.w2_upper.size() || w3.size() != o.w3.size() ||
      w4.size() != o.w4.size())
    return false;
  for (std::size_t h = 0; h < w3.size(); ++h)
    if (w3[h].size() != o.w3[h].size() || w4[h].size() != o.w4[h].size()) return false;
  return true;
}

bool ModelParams::all_finite() const {
  const Vector v = flatten();
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

ModelParams init_params(const QuantileConfig& config, int n_features) {
  config.validate();
  if (n_features < 0) throw InvalidInput("feature count must be non-negative");
  const double c = 1.0 / (config.P() * config.horizon);
  ModelParams w;
  w.w1.assign(n_features, 0.0);
  w.w2_upper.assign(static_cast<std::size_t>(n_features) * (n_features > 0 ? n_features - 1 : 0) / 2, 0.0);
  w.w3.assign(config.horizon, Vector(config.P(), -c));
  w.w4.assign(config.horizon, Vector(config.P(), c));
  return w;
}

int model_features(const Instance& inst) { return inst.contextual() ? inst.context->n_features : 0; }

double empirical_quantile(std::span<const double> history, double p) {
  if (history.empty()) throw InvalidInput("empirical quantile of an empty history");
  if (!(p > 0.0 && p < 1.0)) throw InvalidInput("quantile level must lie in (0, 1)");
  Vector sorted(history.begin(), history.end());
  std::sort(sorted.begin(), sorted.end());
  const double N = static_cast<double>(sorted.size());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    // F(sorted[k]) counts every entry <= sorted[k], ties included.
    std::size_t last = k;
    while (last + 1 < sorted.size() && sorted[last + 1] == sorted[k]) ++last;
    if (static_cast<double>(last + 1) / N >= p) return sorted[k];
    k = last;
  }
  return sorted.back();
}

double phi1(double q, const FeatureVector* features, const ModelParams& params) {
  if (!features) {
    if (params.n_features() != 0) throw InvalidInput("contextual model requires features");
    return relu(q);
  }
  if (static_cast<int>(features->size()) != params.n_features())
    throw InvalidInput("feature vector dimension does not match w1");
  return relu(q + feature_term(*features, params));
}

PrizeInput make_prize_input(const State& state, const Instance& inst, const QuantileConfig& config) {
  config.validate();
  if (static_cast<int>(state.history.size()) != inst.n || static_cast<int>(state.inventory.size()) != inst.n)
    throw InvalidInput("state does not match the instance");
  PrizeInput in;
  in.quantiles.assign(inst.n, Vector(config.P()));
  for (int i = 0; i < inst.n; ++i)
    for (int p = 0; p < config.P(); ++p) in.quantiles[i][p] = empirical_quantile(state.history[i], config.levels[p]);
  if (inst.contextual()) {
    if (static_cast<int>(state.context_window.size()) < config.horizon)
      throw InvalidInput("missing context for a look-ahead period");
    in.features.assign(state.context_window.begin(), state.context_window.begin() + config.horizon);
  }
  in.inventory = state.inventory;
  in.holding_cost = inst.holding_cost;
  in.rho = inst.rho;
  return in;
}

Vector prize_forward(const PrizeInput& in, const ModelParams& w) {
  check_shapes(in, w);
  const int H = static_cast<int>(w.w3.size());
  const std::size_t P = w.w3.front().size();
  const Vector ft = feature_terms(in, w, H);
  Vector theta(in.quantiles.size(), 0.0);
  for (std::size_t i = 0; i < in.quantiles.size(); ++i) {
    const Cumulative c = cumulative(in.quantiles[i], ft, H);
    const double kappa = in.holding_cost[i];
    const double inv = in.inventory[i];
    double hold = 0.0;
    double stock = 0.0;
    for (int h = 0; h < H; ++h)
      for (std::size_t p = 0; p < P; ++p) {
        hold += w.w3[h][p] * relu(inv - c.cum[p][h]) * kappa;
        stock += w.w4[h][p] * relu(c.cum[p][h] - inv) * kappa * in.rho;
      }
    theta[i] = hold + stock;
  }
  return theta;
}

Vector prize_forward(const State& state, const Instance& inst, const ModelParams& params,
                     const QuantileConfig& config) {
  return prize_forward(make_prize_input(state, inst, config), params);
}

ModelParams prize_backward(const PrizeInput& in, const ModelParams& w, std::span<const double> dtheta) {
  check_shapes(in, w);
  if (dtheta.size() != in.quantiles.size()) throw InvalidInput("dtheta must have one entry per customer");
  const int H = static_cast<int>(w.w3.size());
  const std::size_t P = w.w3.front().size();
  const int F = w.n_features();
  const Vector ft = feature_terms(in, w, H);

  ModelParams g = w;
  std::fill(g.w1.begin(), g.w1.end(), 0.0);
  std::fill(g.w2_upper.begin(), g.w2_upper.end(), 0.0);
  for (auto& r : g.w3) std::fill(r.begin(), r.end(), 0.0);
  for (auto& r : g.w4) std::fill(r.begin(), r.end(), 0.0);

  Vector dft(H, 0.0);  // adjoint of each period's feature term
  for (std::size_t i = 0; i < in.quantiles.size(); ++i) {
    const double dt = dtheta[i];
    if (dt == 0.0) continue;
    const Cumulative c = cumulative(in.quantiles[i], ft, H);
    const double kappa = in.holding_cost[i];
    const double inv = in.inventory[i];
    for (std::size_t p = 0; p < P; ++p) {
      Vector dcum(H, 0.0);
      for (int h = 0; h < H; ++h) {
        const double over = inv - c.cum[p][h];
        g.w3[h][p] += dt * relu(over) * kappa;
        g.w4[h][p] += dt * relu(-over) * kappa * in.rho;
        if (over > 0.0) dcum[h] -= dt * w.w3[h][p] * kappa;
        if (over < 0.0) dcum[h] += dt * w.w4[h][p] * kappa * in.rho;
      }
      // cum[h] sums phi1 over t <= h, so phi1 at t collects dcum[t..H-1].
      double tail = 0.0;
      for (int t = H - 1; t >= 0; --t) {
        tail += dcum[t];
        if (c.pre[p][t] > 0.0) dft[t] += tail;
      }
    }
  }
  if (F > 0) {
    for (int t = 0; t < H; ++t) {
      if (dft[t] == 0.0) continue;
      const auto& f = in.features[t];
      for (int a = 0; a < F; ++a) g.w1[a] += dft[t] * f[a];
      std::size_t k = 0;
      for (int a = 0; a < F; ++a)
        for (int b = a + 1; b < F; ++b, ++k) g.w2_upper[k] += dft[t] * 2.0 * f[a] * f[b];
    }
  }
  return g;
}

ModelParams prize_backward(const State& state, const Instance& inst, const ModelParams& params,
                           const QuantileConfig& config, std::span<const double> dtheta) {
  return prize_backward(make_prize_input(state, inst, config), params, dtheta);
}

// ---------------------------------------------------------------------------
// Checkpoints

namespace detail {

json params_to_json(const ModelParams& w) {
  json j;
  j["w1"] = w.w1;
  j["w2_upper_triangle"] = w.w2_upper;
  j["w3"] = w.w3;
  j["w4"] = w.w4;
  return j;
}

ModelParams params_from_json(const json& j, const std::string& path, int P, int H) {
  ModelParams w;
  w.w1 = as_vector(j.at("w1"), join_path(path, "w1"));
  const std::size_t F = w.w1.size();
  w.w2_upper = as_vector(j.at("w2_upper_triangle"), join_path(path, "w2_upper_triangle"),
                         static_cast<long>(F * (F > 0 ? F - 1 : 0) / 2));
  w.w3 = as_matrix(j.at("w3"), join_path(path, "w3"), H, P);
  w.w4 = as_matrix(j.at("w4"), join_path(path, "w4"), H, P);
  return w;
}

}  // namespace detail

std::string checkpoint_to_json(const ModelParams& params, const QuantileConfig& config) {
  detail::json j = detail::params_to_json(params);
  j["P"] = config.levels;
  j["H"] = config.horizon;
  j["schema_version"] = kCheckpointSchemaVersion;
  return j.dump(1) + "\n";
}

Checkpoint checkpoint_from_json(const std::string& text) {
  using namespace detail;
  const json j = parse_document(text);
  expect_object(j, "", {"w1", "w2_upper_triangle", "w3", "w4", "P", "H", "schema_version"});
  if (as_int(j["schema_version"], "schema_version") != kCheckpointSchemaVersion)
    throw SchemaError("schema_version", "unsupported checkpoint version");
  Checkpoint c;
  c.config.levels = as_vector(j["P"], "P");
  c.config.horizon = static_cast<int>(as_int(j["H"], "H"));
  try {
    c.config.validate();
  } catch (const InvalidInput& e) {
    throw SchemaError("P", e.what());
  }
  c.params = params_from_json(j, "", c.config.P(), c.config.horizon);
  if (!c.params.all_finite()) throw SchemaError("$", "non-finite parameter");
  return c;
}

void save_checkpoint(const ModelParams& params, const QuantileConfig& config, const std::filesystem::path& path) {
  detail::write_text_file(path, checkpoint_to_json(params, config));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return checkpoint_from_json(detail::read_text_file(path));
}

}  // namespace dsirp
