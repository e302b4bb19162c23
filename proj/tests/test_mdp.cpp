#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "dsirp/cpctsp.hpp"
#include "dsirp/errors.hpp"
#include "dsirp/mdp.hpp"
#include "oracles.hpp"

using namespace dsirp;

namespace {

State state_with(const Instance& inst, Vector inventory, int window = 3) {
  State s;
  s.inventory = std::move(inventory);
  s.history.assign(inst.n, Vector(window, 1.0));
  return s;
}

Tour random_tour(int n, Rng& rng) {
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 1);
  std::shuffle(all.begin(), all.end(), rng.engine());
  all.resize(rng.uniform_int(0, n));
  return Tour{all};
}

}  // namespace

TEST(VisitVector, ListAndEdgeEncodingsAgree) {
  EXPECT_EQ(visit_vector(Tour{}, 4), (std::vector<int>{0, 0, 0, 0}));
  EXPECT_EQ(visit_vector(Tour{{3}}, 4), (std::vector<int>{0, 0, 1, 0}));
  EXPECT_EQ(edge_vector(Tour{{3}}, 4)[0][3], 2);
  Rng rng(5);
  for (int k = 0; k < 200; ++k) {
    const Tour t = random_tour(7, rng);
    EXPECT_EQ(visit_vector(t, 7), visit_vector_from_edges(edge_vector(t, 7)));
  }
  EXPECT_THROW(visit_vector(Tour{{1, 1}}, 3), InvalidInput);
  EXPECT_THROW(visit_vector(Tour{{4}}, 3), InvalidInput);
}

TEST(Feasibility, BoundaryAndOverload) {
  auto inst = generate_instance(DemandPattern::normal, 4, Penalty::low, 1);
  auto s = state_with(inst, inst.capacity);
  EXPECT_TRUE(is_feasible(inst, s, Tour{}));
  s.inventory[0] = inst.capacity[0] - inst.vehicle_capacity;
  if (s.inventory[0] >= 0) EXPECT_TRUE(is_feasible(inst, s, Tour{{1}}));
  inst.vehicle_capacity = inst.capacity[0];
  s.inventory[0] = 0.0;
  EXPECT_TRUE(is_feasible(inst, s, Tour{{1}}));
  const auto empty = state_with(inst, Vector(inst.n, 0.0));
  EXPECT_FALSE(is_feasible(inst, empty, Tour{{1, 2, 3, 4}}));
}

TEST(StepCost, HandExamples) {
  auto inst = generate_instance(DemandPattern::normal, 3, Penalty::low, 2);
  const auto s = state_with(inst, Vector{5.0, 5.0, 5.0});
  const auto c = step_cost(inst, s, Tour{}, Vector(3, 0.0));
  EXPECT_DOUBLE_EQ(c.holding, 5.0 * (inst.holding_cost[0] + inst.holding_cost[1] + inst.holding_cost[2]));
  EXPECT_EQ(c.stockout, 0.0);
  EXPECT_EQ(c.routing, 0.0);

  inst.capacity[0] = 100.0;
  inst.vehicle_capacity = 1e9;
  const auto v = step_cost(inst, s, Tour{{1}}, Vector{120.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(v.stockout, inst.rho * inst.holding_cost[0] * 20.0);
  EXPECT_DOUBLE_EQ(v.routing, 2.0 * inst.gamma[0][1]);

  inst.vehicle_capacity = 1.0;
  EXPECT_THROW(step_cost(inst, state_with(inst, Vector{0.0, 0.0, 0.0}), Tour{{1}}, Vector(3, 0.0)),
               ContractViolation);
}

TEST(Transition, OrderUpToAndWindowShift) {
  auto inst = generate_instance(DemandPattern::normal, 3, Penalty::low, 3);
  inst.vehicle_capacity = 1e9;
  State s = state_with(inst, Vector{1.0, 2.0, 3.0});
  s.history = {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
  const auto next = transition(inst, s, Tour{{1}}, Vector{0.0, 10.0, 1.0});
  EXPECT_EQ(next.inventory[0], inst.capacity[0]);
  EXPECT_EQ(next.inventory[1], 0.0);
  EXPECT_EQ(next.inventory[2], 2.0);
  EXPECT_EQ(next.history[0], (Vector{2, 3, 0}));
  EXPECT_EQ(next.history[1], (Vector{5, 6, 10}));
  EXPECT_EQ(next.t, 1);
}

TEST(Rollout, NoVisitSinglePeriod) {
  const auto inst = generate_instance(DemandPattern::normal, 4, Penalty::low, 4);
  Episode ep;
  ep.T = 1;
  ep.demand.assign(inst.n, Vector(1, 0.0));
  const auto x0 = state_with(inst, inst.initial_inventory);
  const auto r = rollout(inst, [](const State&) { return Tour{}; }, ep, x0);
  double expect = 0.0;
  for (int i = 0; i < inst.n; ++i) expect += inst.holding_cost[i] * inst.initial_inventory[i];
  EXPECT_DOUBLE_EQ(r.total.total, expect);
}

TEST(Rollout, DeterministicAndTelescoping) {
  const auto inst = generate_instance(DemandPattern::bimodal, 6, Penalty::high, 5);
  const auto hist = sample_history(inst, 50, 1);
  const auto ep = sample_episode(inst, 8, 2);
  const auto x0 = initial_state(inst, hist, ep);
  const TourCostCache cache(inst.gamma);
  auto policy = [&](const State& s) {
    CustomerMask m = 0;
    for (int i = 0; i < inst.n; ++i)
      if (s.inventory[i] < inst.capacity[i] / 3 && capacity_feasible(inst, s.inventory, m | (1U << i))) m |= 1U << i;
    return cache.tour(m);
  };
  const auto a = rollout(inst, policy, ep, x0);
  const auto b = rollout(inst, policy, ep, x0);
  ASSERT_EQ(a.trajectory.size(), 8u);
  CostBreakdown sum;
  for (std::size_t t = 0; t < a.trajectory.size(); ++t) {
    EXPECT_EQ(a.trajectory[t].tour, b.trajectory[t].tour);
    EXPECT_EQ(a.trajectory[t].cost, b.trajectory[t].cost);
    sum += a.trajectory[t].cost;
  }
  EXPECT_EQ(sum, a.total);
  EXPECT_EQ(a.total, b.total);

  std::ostringstream csv;
  write_trajectory_csv(csv, inst, a);
  EXPECT_EQ(csv.str().rfind("period,customer_visits,delivered_units_total,holding,stockout,routing,total\n", 0), 0u);
}

TEST(Rollout, InfeasiblePolicyNamesPeriod) {
  auto inst = generate_instance(DemandPattern::normal, 4, Penalty::low, 6);
  inst.vehicle_capacity = 1.0;
  Episode ep;
  ep.T = 2;
  ep.demand.assign(inst.n, Vector(2, 0.0));
  const auto x0 = state_with(inst, Vector(inst.n, 0.0));
  try {
    rollout(inst, [](const State&) { return Tour{{1, 2}}; }, ep, x0);
    FAIL();
  } catch (const ContractViolation& e) {
    EXPECT_NE(std::string(e.what()).find("period 0"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("capacity"), std::string::npos);
  }
}

TEST(RelativeGap, Arithmetic) {
  EXPECT_NEAR(relative_gap(123.43, 100.0), 0.2343, 1e-12);
  EXPECT_EQ(relative_gap(100.0, 100.0), 0.0);
  EXPECT_EQ(relative_gap(7.0, 3.5), 1.0);
  EXPECT_THROW(relative_gap(1.0, 0.0), InvalidInput);
  EXPECT_THROW(relative_gap(1.0, -2.0), InvalidInput);
}

TEST(StepCost, MatchesLiteralEvaluation) {
  Rng rng(77);
  for (int k = 0; k < 500; ++k) {
    const auto inst = generate_instance(DemandPattern::normal, 6, Penalty::high, k);
    Vector I(inst.n), d(inst.n);
    for (int i = 0; i < inst.n; ++i) {
      I[i] = rng.uniform(0.0, inst.capacity[i]);
      d[i] = rng.uniform(0.0, inst.capacity[i]);
    }
    const auto s = state_with(inst, I);
    Tour t = random_tour(inst.n, rng);
    while (!is_feasible(inst, s, t)) t.sequence.pop_back();
    const auto got = step_cost(inst, s, t, d);
    const auto ref = oracle::literal_step(inst, I, t.sequence, d);
    EXPECT_NEAR(got.holding, ref.holding, 1e-9 * (1 + ref.holding));
    EXPECT_NEAR(got.stockout, ref.stockout, 1e-9 * (1 + ref.stockout));
    EXPECT_EQ(got.routing, ref.routing);
    EXPECT_EQ(got.total, got.holding + got.stockout + got.routing);
    EXPECT_EQ(transition(inst, s, t, d).inventory, oracle::literal_next(inst, I, t.sequence, d));
  }
}

TEST(InitialState, Convention) {
  const auto inst = generate_instance(DemandPattern::contextual, 4, Penalty::low, 8);
  const auto hist = sample_history(inst, 50, 1);
  const auto ep = sample_episode(inst, 5, 2);
  const auto x0 = initial_state(inst, hist, ep);
  EXPECT_EQ(x0.t, 0);
  EXPECT_EQ(x0.inventory, inst.initial_inventory);
  EXPECT_EQ(x0.history, hist.demand);
  EXPECT_EQ(x0.window(), 50);
  EXPECT_EQ(x0.context_window.front(), ep.context.front());
}
