#include <gtest/gtest.h>

#include <limits>

#include "dsirp/det_irp.hpp"
#include "dsirp/errors.hpp"
#include "oracles.hpp"

using namespace dsirp;

namespace {

struct Case {
  Instance inst;
  Vector inventory;
  Matrix demands;
};

Case random_case(int n, int H, std::uint64_t seed) {
  Case c{generate_instance(DemandPattern::normal, n, Penalty::low, seed), {}, {}};
  Rng rng(derive_seed(seed, {99}));
  for (int i = 0; i < n; ++i) {
    c.inventory.push_back(rng.uniform(0.0, c.inst.capacity[i]));
    Vector row;
    for (int h = 0; h < H; ++h) row.push_back(rng.uniform(0.0, c.inst.capacity[i] * 0.6));
    c.demands.push_back(row);
  }
  return c;
}

// Minimum over every schedule of per-period subsets.
double brute_schedule_optimum(const Case& c, int H) {
  const std::uint32_t per = 1U << c.inst.n;
  std::uint64_t total = 1;
  for (int h = 0; h < H; ++h) total *= per;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t code = 0; code < total; ++code) {
    std::vector<std::uint32_t> masks;
    std::uint64_t x = code;
    for (int h = 0; h < H; ++h, x /= per) masks.push_back(static_cast<std::uint32_t>(x % per));
    best = std::min(best, oracle::literal_plan_cost(c.inst, c.inventory, masks, c.demands));
  }
  return best;
}

double delivered(const Instance& inst, const Vector& inv, CustomerMask m) { return delivery_load(inst, inv, m); }

}  // namespace

TEST(ScheduleCost, EmptyScheduleWithoutDemand) {
  const auto c = random_case(4, 3, 1);
  const TourCostCache cache(c.inst.gamma);
  const Matrix zero(4, Vector(3, 0.0));
  double per = 0.0;
  for (int i = 0; i < 4; ++i) per += c.inst.holding_cost[i] * c.inventory[i];
  EXPECT_NEAR(schedule_cost(c.inst, cache, c.inventory, zero, make_schedule(cache, {0, 0, 0})), 3 * per, 1e-12);
}

TEST(ScheduleCost, SinglePeriodEqualsStepCost) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = random_case(5, 1, seed);
    const TourCostCache cache(c.inst.gamma);
    State s;
    s.inventory = c.inventory;
    s.history.assign(5, Vector(1, 0.0));
    for (CustomerMask m = 0; m < 32; ++m) {
      if (!capacity_feasible(c.inst, c.inventory, m)) continue;
      const auto sched = make_schedule(cache, {m});
      Vector d(5);
      for (int i = 0; i < 5; ++i) d[i] = c.demands[i][0];
      EXPECT_EQ(schedule_cost(c.inst, cache, c.inventory, c.demands, sched),
                step_cost(c.inst, s, sched.tours[0], d).total);
    }
  }
}

TEST(ScheduleCost, MatchesIndependentSimulator) {
  Rng rng(3);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto c = random_case(5, 4, seed);
    const TourCostCache cache(c.inst.gamma);
    std::vector<CustomerMask> masks(4);
    for (auto& m : masks) m = static_cast<CustomerMask>(rng.uniform_int(0, 31));
    const double ref = oracle::literal_plan_cost(c.inst, c.inventory, masks, c.demands);
    if (std::isinf(ref)) {
      EXPECT_THROW(schedule_cost(c.inst, cache, c.inventory, c.demands, make_schedule(cache, masks)),
                   ContractViolation);
    } else {
      EXPECT_NEAR(schedule_cost(c.inst, cache, c.inventory, c.demands, make_schedule(cache, masks)), ref,
                  1e-9 * ref);
    }
  }
}

TEST(ScheduleCost, InfeasiblePeriodIsNamed) {
  auto c = random_case(3, 2, 4);
  c.inst.vehicle_capacity = 1e-3;
  const TourCostCache cache(c.inst.gamma);
  c.inventory.assign(3, 0.0);
  try {
    schedule_cost(c.inst, cache, c.inventory, c.demands, make_schedule(cache, {0, 1}));
    FAIL();
  } catch (const ContractViolation& e) {
    EXPECT_NE(std::string(e.what()).find("period 1"), std::string::npos);
  }
}

TEST(SolveExhaustive, MatchesFullEnumeration) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    const auto c = random_case(3, 3, 100 + seed);
    const TourCostCache cache(c.inst.gamma);
    const auto s = solve_exhaustive(c.inst, cache, c.inventory, c.demands);
    EXPECT_NEAR(schedule_cost(c.inst, cache, c.inventory, c.demands, s), brute_schedule_optimum(c, 3),
                1e-9 * brute_schedule_optimum(c, 3));
    for (int h = 0; h < 3; ++h) EXPECT_EQ(s.tours[h], cache.tour(s.visits[h]));
  }
}

TEST(SolveExhaustive, SingleCustomerTwoPeriods) {
  Instance inst = generate_instance(DemandPattern::normal, 2, Penalty::low, 5);
  inst.n = 1;
  inst.coords.resize(2);
  inst.gamma = {{0.0, inst.gamma[0][1]}, {inst.gamma[1][0], 0.0}};
  inst.capacity.resize(1);
  inst.initial_inventory.resize(1);
  inst.holding_cost.resize(1);
  inst.demand.resize(1);
  inst.vehicle_capacity = inst.capacity[0];
  const TourCostCache cache(inst.gamma);
  const Vector inv{0.0};
  const Matrix d{{inst.capacity[0], inst.capacity[0]}};
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> arg;
  for (std::uint32_t a = 0; a < 2; ++a)
    for (std::uint32_t b = 0; b < 2; ++b) {
      const double v = oracle::literal_plan_cost(inst, inv, {a, b}, d);
      if (v < best) {
        best = v;
        arg = {a, b};
      }
    }
  const auto s = solve_exhaustive(inst, cache, inv, d);
  EXPECT_EQ(s.visits, (std::vector<CustomerMask>{arg[0], arg[1]}));
}

TEST(SolveExhaustive, ZeroDemandWithoutStockoutStaysHome) {
  const auto c = random_case(4, 3, 7);
  const TourCostCache cache(c.inst.gamma);
  const Matrix zero(4, Vector(3, 0.0));
  const auto s = solve_exhaustive(c.inst, cache, c.inventory, zero);
  EXPECT_EQ(s.visits, (std::vector<CustomerMask>{0, 0, 0}));
}

TEST(SolveExhaustive, NoSampledScheduleIsCheaper) {
  Rng rng(8);
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto c = random_case(5, 3, 200 + seed);
    const TourCostCache cache(c.inst.gamma);
    const double opt = schedule_cost(c.inst, cache, c.inventory, c.demands,
                                     solve_exhaustive(c.inst, cache, c.inventory, c.demands));
    int sampled = 0;
    while (sampled < 10000) {
      std::vector<std::uint32_t> masks(3);
      for (auto& m : masks) m = static_cast<std::uint32_t>(rng.uniform_int(0, 31));
      const double v = oracle::literal_plan_cost(c.inst, c.inventory, masks, c.demands);
      if (std::isinf(v)) continue;
      ++sampled;
      EXPECT_LE(opt, v + 1e-9 * v);
    }
  }
}

TEST(SolveExhaustive, GuardAndFixedFirstPeriod) {
  const auto big = random_case(7, 2, 9);
  const TourCostCache cache(big.inst.gamma);
  EXPECT_THROW(solve_exhaustive(big.inst, cache, big.inventory, big.demands), CapabilityError);
  const auto c = random_case(4, 5, 10);
  const TourCostCache cache4(c.inst.gamma);
  EXPECT_THROW(solve_exhaustive(c.inst, cache4, c.inventory, c.demands), CapabilityError);

  const auto d = random_case(4, 3, 11);
  const TourCostCache cache_d(d.inst.gamma);
  for (CustomerMask f = 0; f < 16; ++f) {
    if (!capacity_feasible(d.inst, d.inventory, f)) continue;
    const auto s = solve_exhaustive(d.inst, cache_d, d.inventory, d.demands, f);
    EXPECT_EQ(s.visits[0], f);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t a = 0; a < 16; ++a)
      for (std::uint32_t b = 0; b < 16; ++b)
        best = std::min(best, oracle::literal_plan_cost(d.inst, d.inventory, {f, a, b}, d.demands));
    EXPECT_NEAR(schedule_cost(d.inst, cache_d, d.inventory, d.demands, s), best, 1e-9 * best);
  }
}

TEST(LocalSearch, AgreesWithExhaustiveOnTinyCases) {
  int equal = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto c = random_case(4, 3, 300 + seed);
    const TourCostCache cache(c.inst.gamma);
    const double opt = schedule_cost(c.inst, cache, c.inventory, c.demands,
                                     solve_exhaustive(c.inst, cache, c.inventory, c.demands));
    const double ls = schedule_cost(c.inst, cache, c.inventory, c.demands,
                                    solve_local_search(c.inst, cache, c.inventory, c.demands, {seed, 50000, 5}));
    EXPECT_GE(ls, opt);
    equal += ls == opt;
  }
  EXPECT_GE(equal, 95);
}

TEST(LocalSearch, OptimumIsAFixedPoint) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = random_case(4, 3, 400 + seed);
    const TourCostCache cache(c.inst.gamma);
    const auto opt = solve_exhaustive(c.inst, cache, c.inventory, c.demands);
    EXPECT_EQ(improve_schedule(c.inst, cache, c.inventory, c.demands, opt, {seed, 5000, 3}), opt);
  }
}

TEST(LocalSearch, ZeroBudgetReturnsGreedyAndNeverWorsens) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = random_case(8, 6, 500 + seed);
    const TourCostCache cache(c.inst.gamma);
    const auto greedy = greedy_schedule(c.inst, cache, c.inventory, c.demands);
    EXPECT_EQ(solve_local_search(c.inst, cache, c.inventory, c.demands, {seed, 0, 5}), greedy);
    const double g = schedule_cost(c.inst, cache, c.inventory, c.demands, greedy);
    const auto better = improve_schedule(c.inst, cache, c.inventory, c.demands, greedy, {seed, 2000, 2});
    EXPECT_LE(schedule_cost(c.inst, cache, c.inventory, c.demands, better), g);
    EXPECT_EQ(solve_local_search(c.inst, cache, c.inventory, c.demands, {seed, 3000, 3}),
              solve_local_search(c.inst, cache, c.inventory, c.demands, {seed, 3000, 3}));
  }
}

TEST(AnticipativeDecision, SinglePeriodIsBestFeasibleSubset) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto c = random_case(5, 1, 600 + seed);
    const TourCostCache cache(c.inst.gamma);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint32_t m = 0; m < 32; ++m)
      best = std::min(best, oracle::literal_plan_cost(c.inst, c.inventory, {m}, c.demands));
    const Tour t = anticipative_first_decision(c.inst, cache, c.inventory, c.demands);
    EXPECT_NEAR(oracle::literal_plan_cost(c.inst, c.inventory, {mask_of(t)}, c.demands), best, 1e-9 * best);
    EXPECT_EQ(t, solve_exhaustive(c.inst, cache, c.inventory, c.demands).tours[0]);
  }
  const auto c = random_case(4, 3, 7);
  const TourCostCache cache(c.inst.gamma);
  EXPECT_TRUE(anticipative_first_decision(c.inst, cache, c.inst.capacity, Matrix(4, Vector(3, 0.0))).empty());
}

TEST(SolveExhaustive, EndOfHorizonDeliveriesDecline) {
  double first = 0.0, last = 0.0;
  const int episodes = 60;
  for (int e = 0; e < episodes; ++e) {
    const auto inst = generate_instance(DemandPattern::normal, 4, Penalty::low, 700 + e % 6);
    const TourCostCache cache(inst.gamma);
    const auto ep = sample_episode(inst, 4, 800 + e);
    const auto s = solve_exhaustive(inst, cache, inst.initial_inventory, ep.demand);
    Vector inv = inst.initial_inventory;
    for (int h = 0; h < 4; ++h) {
      const double q = delivered(inst, inv, s.visits[h]);
      if (h == 0) first += q;
      if (h == 3) last += q;
      inv = next_inventory(inst, inv, s.visits[h], ep.demand_at(h));
    }
  }
  EXPECT_LE(last / episodes, first / episodes);
}
