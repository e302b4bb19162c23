#include "dsirp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "dsirp/errors.hpp"
#include "json_util.hpp"

namespace dsirp {

namespace {

constexpr int kGridMax = 500;

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double standard_normal_quantile(double p) {
  static const boost::math::normal_distribution<double> unit(0.0, 1.0);
  p = std::clamp(p, std::numeric_limits<double>::min(), 1.0 - std::numeric_limits<double>::epsilon());
  return boost::math::quantile(unit, p);
}

// Inverse-CDF sampling of N(mu, sigma^2) restricted to [lo, hi]. Bounds
// that sit in the upper tail are reflected so the CDF is evaluated where
// it is accurate.
double truncated_normal(double mu, double sigma, double lo, double hi, Rng& rng) {
  if (hi <= lo) return lo;
  double a = (lo - mu) / sigma;
  double b = (hi - mu) / sigma;
  const bool reflect = a > 0.0;
  if (reflect) {
    const double na = -b;
    b = -a;
    a = na;
  }
  const double fa = standard_normal_cdf(a);
  const double fb = standard_normal_cdf(b);
  const double u = rng.uniform();
  double x;
  if (fb - fa <= 0.0) {
    x = a;  // the interval carries no representable mass; fall back to its nearest end
  } else {
    x = standard_normal_quantile(fa + u * (fb - fa));
    x = std::clamp(x, a, b);
  }
  if (reflect) x = -x;
  return std::clamp(mu + sigma * x, lo, hi);
}

double raw_feature(FeatureDist dist, Rng& rng) {
  switch (dist) {
    case FeatureDist::arcsin:
      return -std::cos(M_PI * rng.uniform());
    case FeatureDist::uniform:
      return rng.uniform(-1.0, 1.0);
    case FeatureDist::truncated_normal:
      return truncated_normal(0.0, 0.5, -1.0, 1.0, rng);
  }
  return 0.0;
}

ContextSpec generate_context_spec(const GeneratorOptions& options, Rng& rng) {
  ContextSpec ctx;
  ctx.n_features = kNumFeatures;
  const int k = static_cast<int>(rng.uniform_int(2, 6));
  std::vector<int> order(kNumFeatures);
  std::iota(order.begin(), order.end(), 0);
  for (int i = kNumFeatures - 1; i > 0; --i) std::swap(order[i], order[rng.uniform_int(0, i)]);
  ctx.informative.assign(kNumFeatures, false);
  for (int i = 0; i < k; ++i) ctx.informative[order[i]] = true;

  for (int f = 0; f < kNumFeatures; ++f) {
    ctx.dist.push_back(static_cast<FeatureDist>(rng.uniform_int(0, 2)));
    ctx.scale.push_back(std::sqrt(static_cast<double>(rng.uniform_int(options.scale_k_min, options.scale_k_max))));
    const double alpha = rng.uniform(-1.0, 1.0);
    ctx.alpha_lin.push_back(ctx.informative[f] ? alpha : 0.0);
  }
  ctx.alpha_pair.assign(kNumFeatures, Vector(kNumFeatures, 0.0));
  for (int a = 0; a < kNumFeatures; ++a) {
    for (int b = a + 1; b < kNumFeatures; ++b) {
      const bool informative = rng.bernoulli(0.5);
      const double alpha = rng.uniform(-1.0, 1.0);
      ctx.alpha_pair[a][b] = ctx.alpha_pair[b][a] = informative ? alpha : 0.0;
    }
  }
  return ctx;
}

double require_cap(const DemandSpec&, double cap) {
  if (!(cap >= 0.0) || !std::isfinite(cap)) throw InvalidInput("demand capacity must be finite and non-negative");
  return cap;
}

}  // namespace

DemandPattern parse_pattern(std::string_view name) {
  if (name == "normal") return DemandPattern::normal;
  if (name == "uniform") return DemandPattern::uniform;
  if (name == "bimodal") return DemandPattern::bimodal;
  if (name == "contextual") return DemandPattern::contextual;
  throw InvalidInput("unknown demand pattern '" + std::string(name) + "'");
}

std::string to_string(DemandPattern p) {
  switch (p) {
    case DemandPattern::normal: return "normal";
    case DemandPattern::uniform: return "uniform";
    case DemandPattern::bimodal: return "bimodal";
    case DemandPattern::contextual: return "contextual";
  }
  return "?";
}

Penalty parse_penalty(std::string_view name) {
  if (name == "low") return Penalty::low;
  if (name == "high") return Penalty::high;
  throw InvalidInput("unknown penalty level '" + std::string(name) + "'");
}

std::string to_string(Penalty p) { return p == Penalty::low ? "low" : "high"; }

double penalty_multiplier(Penalty p) { return p == Penalty::low ? 200.0 : 400.0; }

std::string to_string(FeatureDist d) {
  switch (d) {
    case FeatureDist::arcsin: return "arcsin";
    case FeatureDist::uniform: return "uniform";
    case FeatureDist::truncated_normal: return "truncated-normal";
  }
  return "?";
}

FeatureDist parse_feature_dist(std::string_view name) {
  if (name == "arcsin") return FeatureDist::arcsin;
  if (name == "uniform") return FeatureDist::uniform;
  if (name == "truncated-normal") return FeatureDist::truncated_normal;
  throw InvalidInput("unknown feature distribution '" + std::string(name) + "'");
}

int ContextSpec::informative_count() const {
  return static_cast<int>(std::count(informative.begin(), informative.end(), true));
}

double demand_proxy_mean(const DemandSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NormalDemand>) return s.mu;
        if constexpr (std::is_same_v<T, UniformDemand>) return s.upper / 2.0;
        if constexpr (std::is_same_v<T, BimodalDemand>) return (s.mu1 + s.mu2) / 2.0;
        if constexpr (std::is_same_v<T, ContextualDemand>) return s.mu;
      },
      spec);
}

Vector Episode::demand_at(int t) const {
  Vector d(demand.size());
  for (std::size_t i = 0; i < demand.size(); ++i) d[i] = demand[i].at(t);
  return d;
}

Instance generate_instance(DemandPattern pattern, int n, Penalty penalty, std::uint64_t seed,
                           const GeneratorOptions& options) {
  if (n < 2) throw InvalidInput("instance needs at least 2 customers");
  Rng rng(seed);
  Instance inst;
  inst.id = to_string(pattern) + "_" + to_string(penalty) + "_n" + std::to_string(n) + "_s" + std::to_string(seed);
  inst.n = n;
  inst.rho = penalty_multiplier(penalty);

  for (int v = 0; v <= n; ++v) {
    const int x = static_cast<int>(rng.uniform_int(0, kGridMax));
    const int y = static_cast<int>(rng.uniform_int(0, kGridMax));
    inst.coords.push_back({x, y});
  }
  inst.gamma.assign(n + 1, Vector(n + 1, 0.0));
  for (int a = 0; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      const double dx = inst.coords[a][0] - inst.coords[b][0];
      const double dy = inst.coords[a][1] - inst.coords[b][1];
      inst.gamma[a][b] = inst.gamma[b][a] = std::sqrt(dx * dx + dy * dy);
    }
  }

  double proxy_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double proxy = 0.0;
    DemandSpec spec;
    switch (pattern) {
      case DemandPattern::normal:
      case DemandPattern::uniform:
      case DemandPattern::contextual: {
        proxy = static_cast<double>(rng.uniform_int(10, 100));
        const double sigma = static_cast<double>(rng.uniform_int(2, 10));
        if (pattern == DemandPattern::normal) spec = NormalDemand{proxy, sigma};
        else if (pattern == DemandPattern::contextual) spec = ContextualDemand{proxy, sigma};
        break;
      }
      case DemandPattern::bimodal: {
        const long delta = rng.uniform_int(4, 20);
        const long mu1 = rng.uniform_int(10, 50 - delta);
        long mu2 = rng.uniform_int(50 - delta, 100);
        while (mu2 == mu1) mu2 = rng.uniform_int(50 - delta, 100);
        const double s1 = static_cast<double>(rng.uniform_int(2, 10));
        const double s2 = static_cast<double>(rng.uniform_int(2, 10));
        spec = BimodalDemand{static_cast<double>(mu1), s1, static_cast<double>(mu2), s2, options.bimodal_mix};
        proxy = (static_cast<double>(mu1) + static_cast<double>(mu2)) / 2.0;
        break;
      }
    }
    const double multiple = static_cast<double>(rng.uniform_int(2, 4));
    const double cap = proxy * multiple;
    if (pattern == DemandPattern::uniform) spec = UniformDemand{cap / 2.0};
    inst.capacity.push_back(cap);
    inst.initial_inventory.push_back(cap - proxy);
    inst.holding_cost.push_back(rng.uniform(0.02, 0.10));
    inst.demand.push_back(spec);
    proxy_sum += proxy;
  }
  inst.vehicle_capacity = 1.5 * proxy_sum;
  if (pattern == DemandPattern::contextual) inst.context = generate_context_spec(options, rng);
  return inst;
}

FeatureVector sample_features(const ContextSpec& ctx, Rng& rng) {
  FeatureVector f(ctx.n_features);
  for (int k = 0; k < ctx.n_features; ++k) f[k] = ctx.scale[k] * raw_feature(ctx.dist[k], rng);
  return f;
}

double contextual_demand_value(const ContextualDemand& spec, double cap, const FeatureVector& features,
                               const ContextSpec& ctx, double noise) {
  if (static_cast<int>(features.size()) != ctx.n_features)
    throw InvalidInput("feature vector length does not match the context specification");
  double value = spec.mu;
  for (int a = 0; a < ctx.n_features; ++a) value += ctx.alpha_lin[a] * features[a];
  for (int a = 0; a < ctx.n_features; ++a)
    for (int b = a + 1; b < ctx.n_features; ++b) value += ctx.alpha_pair[a][b] * features[a] * features[b];
  value += noise;
  return std::min(std::max(value, 0.0), cap);
}

double sample_demand(const DemandSpec& spec, double cap, const FeatureVector* features, const ContextSpec* ctx,
                     Rng& rng) {
  require_cap(spec, cap);
  const bool contextual = std::holds_alternative<ContextualDemand>(spec);
  if (contextual && (features == nullptr || ctx == nullptr))
    throw InvalidInput("contextual demand requires feature values and a context specification");
  if (!contextual && features != nullptr)
    throw InvalidInput("feature values supplied for a non-contextual demand law");

  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NormalDemand>) {
          return truncated_normal(s.mu, s.sigma, 0.0, cap, rng);
        } else if constexpr (std::is_same_v<T, UniformDemand>) {
          return rng.uniform(0.0, std::min(s.upper, cap));
        } else if constexpr (std::is_same_v<T, BimodalDemand>) {
          const bool first = rng.bernoulli(s.mix);
          return first ? truncated_normal(s.mu1, s.sigma1, 0.0, cap, rng)
                       : truncated_normal(s.mu2, s.sigma2, 0.0, cap, rng);
        } else {
          const double noise = rng.normal(0.0, s.noise_sigma);
          return contextual_demand_value(s, cap, *features, *ctx, noise);
        }
      },
      spec);
}

namespace {

Episode sample_stream(const Instance& inst, int T, int context_extra, std::uint64_t seed) {
  Rng rng(seed);
  Episode ep;
  ep.T = T;
  ep.demand.assign(inst.n, Vector(T, 0.0));
  const ContextSpec* ctx = inst.context ? &*inst.context : nullptr;
  for (int t = 0; t < T; ++t) {
    FeatureVector features;
    if (ctx) {
      features = sample_features(*ctx, rng);
      ep.context.push_back(features);
    }
    for (int i = 0; i < inst.n; ++i)
      ep.demand[i][t] = sample_demand(inst.demand[i], inst.capacity[i], ctx ? &features : nullptr, ctx, rng);
  }
  if (ctx)
    for (int t = 0; t < context_extra; ++t) ep.context.push_back(sample_features(*ctx, rng));
  return ep;
}

}  // namespace

Episode sample_episode(const Instance& inst, int T, std::uint64_t seed, int context_extra) {
  if (T < 1) throw InvalidInput("episode length must be at least 1");
  if (context_extra < 0) throw InvalidInput("context_extra must be non-negative");
  return sample_stream(inst, T, context_extra, seed);
}

Episode sample_history(const Instance& inst, int len, std::uint64_t seed) {
  if (len < 1) throw InvalidInput("history length must be at least 1");
  return sample_stream(inst, len, 0, seed);
}

void validate_instance(const Instance& inst) {
  const int n = inst.n;
  auto fail = [](const std::string& what) { throw InvalidInput("invalid instance: " + what); };
  if (n < 1) fail("n must be positive");
  if (static_cast<int>(inst.coords.size()) != n + 1) fail("coords must have n+1 rows");
  if (static_cast<int>(inst.gamma.size()) != n + 1) fail("gamma must be (n+1)x(n+1)");
  for (int a = 0; a <= n; ++a) {
    if (static_cast<int>(inst.gamma[a].size()) != n + 1) fail("gamma must be (n+1)x(n+1)");
    if (inst.gamma[a][a] != 0.0) fail("gamma diagonal must be zero");
    for (int b = 0; b <= n; ++b) {
      if (inst.gamma[a][b] < 0.0) fail("gamma must be non-negative");
      if (inst.gamma[a][b] != inst.gamma[b][a]) fail("gamma must be symmetric");
    }
  }
  if (static_cast<int>(inst.capacity.size()) != n || static_cast<int>(inst.initial_inventory.size()) != n ||
      static_cast<int>(inst.holding_cost.size()) != n || static_cast<int>(inst.demand.size()) != n)
    fail("per-customer arrays must have n entries");
  for (int i = 0; i < n; ++i) {
    if (inst.initial_inventory[i] < 0.0 || inst.initial_inventory[i] > inst.capacity[i])
      fail("initial inventory must lie in [0, C_i]");
    if (inst.holding_cost[i] < 0.0) fail("holding cost must be non-negative");
    const bool contextual = std::holds_alternative<ContextualDemand>(inst.demand[i]);
    if (contextual != inst.contextual()) fail("contextual demand laws require a context specification");
    if (const auto* b = std::get_if<BimodalDemand>(&inst.demand[i])) {
      if (!(b->mu1 < b->mu2)) fail("bimodal demand requires mu1 < mu2");
      if (!(b->mix > 0.0 && b->mix < 1.0)) fail("bimodal mixture weight must lie in (0,1)");
    }
  }
  if (inst.vehicle_capacity < 0.0) fail("vehicle capacity must be non-negative");
  if (inst.context) {
    const auto& c = *inst.context;
    const auto f = static_cast<std::size_t>(c.n_features);
    if (c.informative.size() != f || c.dist.size() != f || c.scale.size() != f || c.alpha_lin.size() != f ||
        c.alpha_pair.size() != f)
      fail("context specification arrays must have n_features entries");
  }
}

// ---------------------------------------------------------------------------
// JSON persistence

namespace {

using detail::json;

json demand_to_json(const DemandSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        json j;
        if constexpr (std::is_same_v<T, NormalDemand>) {
          j["law"] = "normal";
          j["mu"] = s.mu;
          j["sigma"] = s.sigma;
        } else if constexpr (std::is_same_v<T, UniformDemand>) {
          j["law"] = "uniform";
          j["upper"] = s.upper;
        } else if constexpr (std::is_same_v<T, BimodalDemand>) {
          j["law"] = "bimodal";
          j["mu1"] = s.mu1;
          j["sigma1"] = s.sigma1;
          j["mu2"] = s.mu2;
          j["sigma2"] = s.sigma2;
          j["mix"] = s.mix;
        } else {
          j["law"] = "contextual";
          j["mu"] = s.mu;
          j["noise_sigma"] = s.noise_sigma;
        }
        return j;
      },
      spec);
}

DemandSpec demand_from_json(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("law")) throw SchemaError(detail::join_path(path, "law"), "missing required field");
  const std::string law = detail::as_string(j["law"], detail::join_path(path, "law"));
  auto num = [&](const char* key) { return detail::as_double(j[key], detail::join_path(path, key)); };
  if (law == "normal") {
    detail::expect_object(j, path, {"law", "mu", "sigma"});
    return NormalDemand{num("mu"), num("sigma")};
  }
  if (law == "uniform") {
    detail::expect_object(j, path, {"law", "upper"});
    return UniformDemand{num("upper")};
  }
  if (law == "bimodal") {
    detail::expect_object(j, path, {"law", "mu1", "sigma1", "mu2", "sigma2", "mix"});
    return BimodalDemand{num("mu1"), num("sigma1"), num("mu2"), num("sigma2"), num("mix")};
  }
  if (law == "contextual") {
    detail::expect_object(j, path, {"law", "mu", "noise_sigma"});
    return ContextualDemand{num("mu"), num("noise_sigma")};
  }
  throw SchemaError(detail::join_path(path, "law"), "unknown demand law '" + law + "'");
}

json context_to_json(const ContextSpec& c) {
  json j;
  j["n_features"] = c.n_features;
  json informative = json::array();
  for (bool b : c.informative) informative.push_back(b);
  j["informative"] = informative;
  json dist = json::array();
  for (auto d : c.dist) dist.push_back(to_string(d));
  j["feature_dist"] = dist;
  j["scale"] = c.scale;
  j["alpha_lin"] = c.alpha_lin;
  j["alpha_pair"] = c.alpha_pair;
  return j;
}

ContextSpec context_from_json(const json& j, const std::string& path) {
  detail::expect_object(j, path, {"n_features", "informative", "feature_dist", "scale", "alpha_lin", "alpha_pair"});
  ContextSpec c;
  c.n_features = static_cast<int>(detail::as_int(j["n_features"], detail::join_path(path, "n_features")));
  if (c.n_features < 1) throw SchemaError(detail::join_path(path, "n_features"), "must be positive");
  const long f = c.n_features;
  const auto& inf = detail::as_array(j["informative"], detail::join_path(path, "informative"), f);
  for (std::size_t k = 0; k < inf.size(); ++k)
    c.informative.push_back(detail::as_bool(inf[k], detail::index_path(detail::join_path(path, "informative"), k)));
  const auto& dist = detail::as_array(j["feature_dist"], detail::join_path(path, "feature_dist"), f);
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto p = detail::index_path(detail::join_path(path, "feature_dist"), k);
    try {
      c.dist.push_back(parse_feature_dist(detail::as_string(dist[k], p)));
    } catch (const InvalidInput& e) {
      throw SchemaError(p, e.what());
    }
  }
  c.scale = detail::as_vector(j["scale"], detail::join_path(path, "scale"), f);
  c.alpha_lin = detail::as_vector(j["alpha_lin"], detail::join_path(path, "alpha_lin"), f);
  c.alpha_pair = detail::as_matrix(j["alpha_pair"], detail::join_path(path, "alpha_pair"), f, f);
  return c;
}

}  // namespace

std::string instance_to_json(const Instance& inst) {
  json j;
  j["id"] = inst.id;
  j["n"] = inst.n;
  json coords = json::array();
  for (const auto& c : inst.coords) coords.push_back({c[0], c[1]});
  j["coords"] = coords;
  j["gamma"] = inst.gamma;
  j["C"] = inst.capacity;
  j["I0"] = inst.initial_inventory;
  j["kappa"] = inst.holding_cost;
  j["rho"] = inst.rho;
  j["B"] = inst.vehicle_capacity;
  json demand = json::array();
  for (const auto& d : inst.demand) demand.push_back(demand_to_json(d));
  j["demand_spec"] = demand;
  if (inst.context) j["context_spec"] = context_to_json(*inst.context);
  return j.dump(1) + "\n";
}

Instance instance_from_json(const std::string& text) {
  const json j = detail::parse_document(text);
  detail::expect_object(j, "", {"id", "n", "coords", "gamma", "C", "I0", "kappa", "rho", "B", "demand_spec"},
                        {"context_spec"});
  Instance inst;
  inst.id = detail::as_string(j["id"], "id");
  inst.n = static_cast<int>(detail::as_int(j["n"], "n"));
  if (inst.n < 1) throw SchemaError("n", "must be positive");
  const long n = inst.n;
  const auto& coords = detail::as_array(j["coords"], "coords", n + 1);
  for (std::size_t v = 0; v < coords.size(); ++v) {
    const auto p = detail::index_path("coords", v);
    const auto& xy = detail::as_array(coords[v], p, 2);
    inst.coords.push_back({static_cast<int>(detail::as_int(xy[0], detail::index_path(p, 0))),
                           static_cast<int>(detail::as_int(xy[1], detail::index_path(p, 1)))});
  }
  inst.gamma = detail::as_matrix(j["gamma"], "gamma", n + 1, n + 1);
  inst.capacity = detail::as_vector(j["C"], "C", n);
  inst.initial_inventory = detail::as_vector(j["I0"], "I0", n);
  inst.holding_cost = detail::as_vector(j["kappa"], "kappa", n);
  inst.rho = detail::as_double(j["rho"], "rho");
  inst.vehicle_capacity = detail::as_double(j["B"], "B");
  const auto& demand = detail::as_array(j["demand_spec"], "demand_spec", n);
  for (std::size_t i = 0; i < demand.size(); ++i)
    inst.demand.push_back(demand_from_json(demand[i], detail::index_path("demand_spec", i)));
  if (j.contains("context_spec")) inst.context = context_from_json(j["context_spec"], "context_spec");
  try {
    validate_instance(inst);
  } catch (const InvalidInput& e) {
    throw SchemaError("$", e.what());
  }
  return inst;
}

std::string episode_to_json(const Episode& ep) {
  json j;
  j["T"] = ep.T;
  j["demand"] = ep.demand;
  if (ep.contextual()) {
    // feature-major: one row per feature, one column per period
    const std::size_t f = ep.context.front().size();
    Matrix rows(f, Vector(ep.context.size()));
    for (std::size_t t = 0; t < ep.context.size(); ++t)
      for (std::size_t k = 0; k < f; ++k) rows[k][t] = ep.context[t][k];
    j["context"] = rows;
  }
  return j.dump(1) + "\n";
}

Episode episode_from_json(const std::string& text) {
  const json j = detail::parse_document(text);
  detail::expect_object(j, "", {"T", "demand"}, {"context"});
  Episode ep;
  ep.T = static_cast<int>(detail::as_int(j["T"], "T"));
  if (ep.T < 1) throw SchemaError("T", "must be at least 1");
  ep.demand = detail::as_matrix(j["demand"], "demand", -1, ep.T);
  if (j.contains("context")) {
    const Matrix rows = detail::as_matrix(j["context"], "context");
    if (rows.empty()) throw SchemaError("context", "expected at least one feature row");
    const std::size_t periods = rows.front().size();
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (rows[k].size() != periods) throw SchemaError(detail::index_path("context", k), "ragged feature rows");
    if (static_cast<int>(periods) < ep.T) throw SchemaError("context", "fewer context periods than T");
    ep.context.assign(periods, FeatureVector(rows.size()));
    for (std::size_t t = 0; t < periods; ++t)
      for (std::size_t k = 0; k < rows.size(); ++k) ep.context[t][k] = rows[k][t];
  }
  return ep;
}

namespace detail {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("$", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
  if (!out) throw InvalidInput("failed writing " + path.string());
}

}  // namespace detail

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  detail::write_text_file(path, instance_to_json(inst));
}

Instance load_instance(const std::filesystem::path& path) { return instance_from_json(detail::read_text_file(path)); }

void save_episode(const Episode& ep, const std::filesystem::path& path) {
  detail::write_text_file(path, episode_to_json(ep));
}

Episode load_episode(const std::filesystem::path& path) { return episode_from_json(detail::read_text_file(path)); }

}  // namespace dsirp
