#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsirp/cpctsp.hpp"
#include "dsirp/det_irp.hpp"
#include "dsirp/instance.hpp"
#include "dsirp/mdp.hpp"
#include "dsirp/prize_model.hpp"

namespace dsirp {

enum class PolicyKind { mean, saa1, saa3, mlco, anticipative };
PolicyKind parse_policy(std::string_view name);
std::string to_string(PolicyKind k);

// Shared settings of the look-ahead policies. With a known evaluation
// horizon the look-ahead at period t is truncated to horizon - t.
struct LookaheadOptions {
  int lookahead = 6;
  std::optional<int> horizon;
  LocalSearchOptions search{};
  // SAA-3 continuations outside the exhaustive guard use this lighter search.
  LocalSearchOptions continuation_search{0, 500, 1};
  // SAA-1 repeats its observation over the whole look-ahead instead of
  // switching to history means after the first period.
  bool saa1_repeat = false;

  int effective(int t) const;
};

// n x H: every period equal to the per-customer history mean.
Matrix mean_demands(const State& state, int H);
// Index of the history column used by SAA-1: the most recent one, or the
// nearest by Euclidean feature distance (ties: smallest index).
int saa1_observation(const Instance& inst, const State& state);
// Three distinct history columns for SAA-3: the most recent, or the three
// nearest by feature distance.
std::vector<int> saa3_observations(const Instance& inst, const State& state);

Tour mean_policy(const Instance& inst, const TourCostCache& cache, const State& state,
                 const LookaheadOptions& options = {});
Tour saa1_policy(const Instance& inst, const TourCostCache& cache, const State& state,
                 const LookaheadOptions& options = {});
Tour saa3_policy(const Instance& inst, const TourCostCache& cache, const State& state,
                 const LookaheadOptions& options = {});
// SAA-3 on explicitly given first-period scenarios (each an n-vector); later
// periods use history means.
Tour saa_policy(const Instance& inst, const TourCostCache& cache, const State& state,
                const std::vector<Vector>& first_period_scenarios, const LookaheadOptions& options = {});

Tour mlco_policy(const Instance& inst, const TourCostCache& cache, const State& state, const ModelParams& params,
                 const QuantileConfig& config);

struct AnticipativeResult {
  std::vector<Tour> tours;
  RolloutResult rollout;
  double total = 0.0;
};

// Deterministic IRP over the whole episode with the true demands, rolled out.
AnticipativeResult anticipative_baseline(const Instance& inst, const TourCostCache& cache, const Episode& episode,
                                         const State& x0, const LocalSearchOptions& options = {0, 50000, 10});

struct PolicySpec {
  PolicyKind kind = PolicyKind::mean;
  LookaheadOptions lookahead{};
  ModelParams params{};
  QuantileConfig quantiles{};
  int scenario_count = 3;
};

// Binds a spec to an instance. Anticipative policies need the episode.
Policy make_policy(const PolicySpec& spec, const Instance& inst, const TourCostCache& cache,
                   const Episode* episode = nullptr);

}  // namespace dsirp
