#include <gtest/gtest.h>

#include "dsirp/errors.hpp"
#include "dsirp/policies.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dsirp;

namespace {

// Minimum over every continuation of the plan cost with a fixed first set.
double best_with_first(const Instance& inst, const Vector& I, CustomerMask first, const Matrix& d) {
  const int H = static_cast<int>(d.front().size());
  const std::uint32_t subsets = 1U << inst.n;
  std::uint64_t combos = 1;
  for (int h = 1; h < H; ++h) combos *= subsets;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t c = 0; c < combos; ++c) {
    std::vector<std::uint32_t> masks{first};
    std::uint64_t rest = c;
    for (int h = 1; h < H; ++h) {
      masks.push_back(static_cast<std::uint32_t>(rest % subsets));
      rest /= subsets;
    }
    best = std::min(best, oracle::literal_plan_cost(inst, I, masks, d));
  }
  return best;
}

Matrix first_then_mean(const Vector& first, const State& s, int H) {
  Matrix m(s.history.size(), Vector(H));
  for (std::size_t i = 0; i < m.size(); ++i) {
    double sum = 0.0;
    for (double x : s.history[i]) sum += x;
    std::fill(m[i].begin(), m[i].end(), sum / s.history[i].size());
    m[i][0] = first[i];
  }
  return m;
}

}  // namespace

TEST(MeanDemands, ConstantHistory) {
  const auto inst = generate_instance(DemandPattern::normal, 3, Penalty::low, 1);
  auto s = fixtures::random_state(inst, 2);
  for (int i = 0; i < 3; ++i) std::fill(s.history[i].begin(), s.history[i].end(), 4.0 + i);
  const auto m = mean_demands(s, 5);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(m[i], Vector(5, 4.0 + i));
  State empty = s;
  empty.history.assign(3, Vector{});
  EXPECT_THROW(mean_demands(empty, 2), InvalidInput);
}

TEST(SaaObservations, RecentOrNearestColumn) {
  const auto inst = generate_instance(DemandPattern::normal, 3, Penalty::low, 3);
  const auto s = fixtures::random_state(inst, 4);
  EXPECT_EQ(saa1_observation(inst, s), 49);
  EXPECT_EQ(saa3_observations(inst, s), (std::vector<int>{49, 48, 47}));

  const auto ctx = generate_instance(DemandPattern::contextual, 3, Penalty::low, 5);
  auto cs = fixtures::random_state(ctx, 6);
  // Make column 17 an exact match and column 30 a duplicate of it.
  cs.history_context[17] = cs.context_window.front();
  cs.history_context[30] = cs.context_window.front();
  EXPECT_EQ(saa1_observation(ctx, cs), 17);
  const auto three = saa3_observations(ctx, cs);
  EXPECT_EQ(three[0], 17);
  EXPECT_EQ(three[1], 30);

  // Literal nearest-neighbour search.
  const auto fresh = fixtures::random_state(ctx, 7);
  int arg = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < fresh.window(); ++j) {
    double d = 0.0;
    for (int a = 0; a < kNumFeatures; ++a) {
      const double diff = fresh.history_context[j][a] - fresh.context_window[0][a];
      d += diff * diff;
    }
    if (d < best) best = d, arg = j;
  }
  EXPECT_EQ(saa1_observation(ctx, fresh), arg);
}

TEST(SaaPolicy, IdenticalScenariosReduceToSaa1) {
  LookaheadOptions opt;
  opt.lookahead = 3;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto inst = generate_instance(DemandPattern::normal, 4, Penalty::low, seed);
    const TourCostCache cache(inst.gamma);
    const auto s = fixtures::random_state(inst, seed + 50);
    Vector obs(inst.n);
    for (int i = 0; i < inst.n; ++i) obs[i] = s.history[i].back();
    EXPECT_EQ(saa_policy(inst, cache, s, {obs, obs, obs}, opt), saa1_policy(inst, cache, s, opt)) << seed;
  }
}

TEST(SaaPolicy, MatchesBruteForceOverFirstSets) {
  LookaheadOptions opt;
  opt.lookahead = 3;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto inst = generate_instance(DemandPattern::uniform, 3, Penalty::high, seed);
    const TourCostCache cache(inst.gamma);
    const auto s = fixtures::random_state(inst, seed + 10);
    std::vector<Matrix> scen;
    for (int j : {49, 48, 47}) {
      Vector col(inst.n);
      for (int i = 0; i < inst.n; ++i) col[i] = s.history[i][j];
      scen.push_back(first_then_mean(col, s, 3));
    }
    auto value = [&](CustomerMask u) {
      double v = 0.0;
      for (const auto& d : scen) v += best_with_first(inst, s.inventory, u, d);
      return v;
    };
    double best = std::numeric_limits<double>::infinity();
    for (CustomerMask u = 0; u < 8; ++u) best = std::min(best, value(u));
    const CustomerMask chosen = mask_of(saa3_policy(inst, cache, s, opt));
    EXPECT_NEAR(value(chosen), best, 1e-9 * (1.0 + best)) << seed;
  }
}

TEST(MlcoPolicy, ComposesPrizeModelAndOracle) {
  const auto inst = generate_instance(DemandPattern::contextual, 6, Penalty::low, 8);
  const TourCostCache cache(inst.gamma);
  const QuantileConfig cfg;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = fixtures::random_state(inst, seed);
    const auto w = fixtures::random_params(cfg, 8, seed);
    const Vector theta = prize_forward(s, inst, w, cfg);
    Vector q(inst.n);
    for (int i = 0; i < inst.n; ++i) q[i] = inst.capacity[i] - s.inventory[i];
    const auto ref = oracle::brute_cpctsp(theta, q, inst.vehicle_capacity, inst.gamma);
    const Tour got = mlco_policy(inst, cache, s, w, cfg);
    EXPECT_EQ(got, solve_cpctsp(theta, q, inst.vehicle_capacity, cache).tour);
    EXPECT_NEAR(cpctsp_objective(theta, mask_of(got), routing_cost(got, inst.gamma)), ref.objective,
                1e-9 * (1.0 + std::abs(ref.objective)));
    EXPECT_TRUE(is_feasible(inst, s, got));
  }
  // Every prize non-positive: stay at the depot.
  auto w = init_params(cfg, 8);
  for (auto& r : w.w4) std::fill(r.begin(), r.end(), 0.0);
  EXPECT_TRUE(mlco_policy(inst, cache, fixtures::random_state(inst, 99), w, cfg).empty());
}

TEST(Policies, RolloutsNeverBreakCapacity) {
  LookaheadOptions opt;
  opt.lookahead = 3;
  opt.search = {0, 2000, 2};
  opt.continuation_search = {0, 200, 1};
  for (auto pattern : {DemandPattern::normal, DemandPattern::bimodal, DemandPattern::uniform,
                       DemandPattern::contextual}) {
    const auto inst = generate_instance(pattern, 5, Penalty::low, 9);
    const TourCostCache cache(inst.gamma);
    const auto hist = sample_history(inst, 50, 1);
    for (auto kind : {PolicyKind::mean, PolicyKind::saa1, PolicyKind::saa3, PolicyKind::mlco}) {
      PolicySpec spec{kind, opt, init_params(QuantileConfig{}, model_features(inst)), QuantileConfig{}, 3};
      const auto policy = make_policy(spec, inst, cache);
      for (std::uint64_t e = 0; e < 3; ++e) {
        const auto ep = sample_episode(inst, 4, 100 + e);
        const auto r = rollout(inst, policy, ep, initial_state(inst, hist, ep));
        for (const auto& step : r.trajectory) EXPECT_TRUE(is_feasible(inst, step.state, step.tour));
      }
    }
  }
  const auto inst = generate_instance(DemandPattern::normal, 3, Penalty::low, 1);
  const TourCostCache cache(inst.gamma);
  EXPECT_THROW(make_policy({PolicyKind::anticipative}, inst, cache), InvalidInput);
  EXPECT_THROW(parse_policy("oracle"), InvalidInput);
}

TEST(Anticipative, SinglePeriodAndDominance) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = generate_instance(DemandPattern::normal, 4, Penalty::high, seed);
    const TourCostCache cache(inst.gamma);
    const auto hist = sample_history(inst, 50, 1);
    const auto one = sample_episode(inst, 1, seed);
    const auto x0 = initial_state(inst, hist, one);
    const auto a1 = anticipative_baseline(inst, cache, one, x0);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t m = 0; m < 16; ++m)
      best = std::min(best, oracle::literal_plan_cost(inst, x0.inventory, {m}, one.demand));
    EXPECT_NEAR(a1.total, best, 1e-9 * (1.0 + best));

    const auto ep = sample_episode(inst, 4, seed + 1);
    const auto x = initial_state(inst, hist, ep);
    const auto a = anticipative_baseline(inst, cache, ep, x);
    LookaheadOptions opt;
    opt.lookahead = 4;
    for (auto kind : {PolicyKind::mean, PolicyKind::saa1}) {
      const auto r = rollout(inst, make_policy({kind, opt}, inst, cache), ep, x);
      EXPECT_LE(a.total, r.total.total + 1e-9);
    }
    EXPECT_EQ(a.tours.size(), 4u);
  }
}
