#include "dsirp/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dsirp/errors.hpp"

namespace dsirp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sq_distance(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

// History columns sorted by feature distance to the current period, stable
// so that equal distances keep the smaller index first.
std::vector<int> nearest_columns(const State& state) {
  if (state.context_window.empty()) throw InvalidInput("contextual policy needs the current period's features");
  const auto& now = state.context_window.front();
  const int W = static_cast<int>(state.history_context.size());
  if (W != state.window()) throw InvalidInput("history features do not align with the demand history");
  std::vector<double> dist(W);
  for (int j = 0; j < W; ++j) dist[j] = sq_distance(state.history_context[j], now);
  std::vector<int> idx(W);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return dist[a] < dist[b]; });
  return idx;
}

Vector history_column(const State& state, int j) {
  Vector d(state.history.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = state.history[i][j];
  return d;
}

Matrix with_first_period(const Vector& first, const State& state, int H) {
  Matrix m = mean_demands(state, H);
  for (std::size_t i = 0; i < m.size(); ++i) m[i][0] = first[i];
  return m;
}

void require_history(const State& state, int minimum) {
  if (state.window() < minimum)
    throw InvalidInput("policy needs at least " + std::to_string(minimum) + " history observations");
}

}  // namespace

PolicyKind parse_policy(std::string_view name) {
  if (name == "mean") return PolicyKind::mean;
  if (name == "saa1") return PolicyKind::saa1;
  if (name == "saa3") return PolicyKind::saa3;
  if (name == "mlco") return PolicyKind::mlco;
  if (name == "anticipative") return PolicyKind::anticipative;
  throw InvalidInput("unknown policy '" + std::string(name) + "'");
}

std::string to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::mean: return "mean";
    case PolicyKind::saa1: return "saa1";
    case PolicyKind::saa3: return "saa3";
    case PolicyKind::mlco: return "mlco";
    case PolicyKind::anticipative: return "anticipative";
  }
  return "?";
}

int LookaheadOptions::effective(int t) const {
  if (lookahead < 1) throw InvalidInput("look-ahead must be at least 1");
  if (!horizon) return lookahead;
  return std::max(1, std::min(lookahead, *horizon - t));
}

Matrix mean_demands(const State& state, int H) {
  require_history(state, 1);
  Matrix m(state.history.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    double s = 0.0;
    for (double d : state.history[i]) s += d;
    m[i].assign(H, s / static_cast<double>(state.history[i].size()));
  }
  return m;
}

int saa1_observation(const Instance& inst, const State& state) {
  require_history(state, 1);
  if (!inst.contextual()) return state.window() - 1;
  return nearest_columns(state).front();
}

std::vector<int> saa3_observations(const Instance& inst, const State& state) {
  require_history(state, 3);
  if (!inst.contextual()) {
    const int W = state.window();
    return {W - 1, W - 2, W - 3};
  }
  auto idx = nearest_columns(state);
  idx.resize(3);
  return idx;
}

Tour mean_policy(const Instance& inst, const TourCostCache& cache, const State& state,
                 const LookaheadOptions& options) {
  const int H = options.effective(state.t);
  return anticipative_first_decision(inst, cache, state.inventory, mean_demands(state, H), options.search);
}

Tour saa1_policy(const Instance& inst, const TourCostCache& cache, const State& state,
                 const LookaheadOptions& options) {
  const int H = options.effective(state.t);
  const Vector obs = history_column(state, saa1_observation(inst, state));
  Matrix demands = with_first_period(obs, state, H);
  if (options.saa1_repeat)
    for (std::size_t i = 0; i < demands.size(); ++i) std::fill(demands[i].begin(), demands[i].end(), obs[i]);
  return anticipative_first_decision(inst, cache, state.inventory, demands, options.search);
}

Tour saa3_policy(const Instance& inst, const TourCostCache& cache, const State& state,
                 const LookaheadOptions& options) {
  std::vector<Vector> scenarios;
  for (int j : saa3_observations(inst, state)) scenarios.push_back(history_column(state, j));
  return saa_policy(inst, cache, state, scenarios, options);
}

Tour saa_policy(const Instance& inst, const TourCostCache& cache, const State& state,
                const std::vector<Vector>& first_period_scenarios, const LookaheadOptions& options) {
  if (first_period_scenarios.empty()) throw InvalidInput("SAA needs at least one scenario");
  const int H = options.effective(state.t);
  std::vector<Matrix> demands;
  for (const auto& s : first_period_scenarios) {
    if (static_cast<int>(s.size()) != inst.n) throw InvalidInput("scenario must have one demand per customer");
    demands.push_back(with_first_period(s, state, H));
  }
  const bool exact = within_exhaustive_guard(inst.n, H);

  // Summed cost over scenarios of the first-period set u followed by the
  // best continuation found for each scenario.
  auto value = [&](CustomerMask u) {
    double total = 0.0;
    for (const auto& d : demands) {
      VisitSchedule s;
      if (exact) {
        s = solve_exhaustive(inst, cache, state.inventory, d, u);
      } else {
        Vector d0(inst.n);
        for (int i = 0; i < inst.n; ++i) d0[i] = d[i][0];
        const Vector next = next_inventory(inst, state.inventory, u, d0);
        const VisitSchedule rest =
            H > 1 ? solve_local_search(inst, cache, next, demand_window(d, 1, H - 1), options.continuation_search)
                  : VisitSchedule{};
        std::vector<CustomerMask> visits{u};
        visits.insert(visits.end(), rest.visits.begin(), rest.visits.end());
        s = make_schedule(cache, std::move(visits));
      }
      total += schedule_cost(inst, cache, state.inventory, d, s);
    }
    return total;
  };

  CustomerMask best = 0;
  double best_value = kInf;
  if (inst.n <= 10) {
    const CustomerMask all = (CustomerMask{1} << inst.n) - 1;
    for (CustomerMask u = 0; u <= all; ++u) {
      if (!capacity_feasible(inst, state.inventory, u)) continue;
      const double v = value(u);
      if (v < best_value) {
        best_value = v;
        best = u;
      }
    }
  } else {
    // First-improvement flips over the first-period set, started from the
    // mean-demand decision.
    best = mask_of(mean_policy(inst, cache, state, options));
    best_value = value(best);
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < inst.n && !improved; ++i) {
        const CustomerMask u = best ^ (CustomerMask{1} << i);
        if (!capacity_feasible(inst, state.inventory, u)) continue;
        const double v = value(u);
        if (v < best_value) {
          best_value = v;
          best = u;
          improved = true;
        }
      }
    }
  }
  return cache.tour(best);
}

Tour mlco_policy(const Instance& inst, const TourCostCache& cache, const State& state, const ModelParams& params,
                 const QuantileConfig& config) {
  const Vector theta = prize_forward(state, inst, params, config);
  Vector q(inst.n);
  for (int i = 0; i < inst.n; ++i) q[i] = inst.capacity[i] - state.inventory[i];
  return solve_cpctsp(theta, q, inst.vehicle_capacity, cache).tour;
}

AnticipativeResult anticipative_baseline(const Instance& inst, const TourCostCache& cache, const Episode& episode,
                                         const State& x0, const LocalSearchOptions& options) {
  AnticipativeResult r;
  const VisitSchedule s = solve_deterministic(inst, cache, x0.inventory, demand_window(episode.demand, 0, episode.T),
                                              options);
  r.tours = s.tours;
  const Policy follow = [&r](const State& x) { return r.tours.at(x.t); };
  r.rollout = rollout(inst, follow, episode, x0);
  r.total = r.rollout.total.total;
  return r;
}

Policy make_policy(const PolicySpec& spec, const Instance& inst, const TourCostCache& cache,
                   const Episode* episode) {
  switch (spec.kind) {
    case PolicyKind::mean:
      return [&inst, &cache, opt = spec.lookahead](const State& x) { return mean_policy(inst, cache, x, opt); };
    case PolicyKind::saa1:
      return [&inst, &cache, opt = spec.lookahead](const State& x) { return saa1_policy(inst, cache, x, opt); };
    case PolicyKind::saa3:
      if (spec.scenario_count != 3) throw InvalidInput("SAA-3 uses exactly three scenarios");
      return [&inst, &cache, opt = spec.lookahead](const State& x) { return saa3_policy(inst, cache, x, opt); };
    case PolicyKind::mlco:
      return [&inst, &cache, w = spec.params, q = spec.quantiles](const State& x) {
        return mlco_policy(inst, cache, x, w, q);
      };
    case PolicyKind::anticipative: {
      if (!episode) throw InvalidInput("the anticipative policy needs the full episode");
      return [&inst, &cache, episode, opt = spec.lookahead.search](const State& x) {
        const Matrix rest = demand_window(episode->demand, x.t, episode->T - x.t);
        return solve_deterministic(inst, cache, x.inventory, rest, opt).tours.front();
      };
    }
  }
  throw InvalidInput("unknown policy kind");
}

}  // namespace dsirp
