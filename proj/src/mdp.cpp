#include "dsirp/mdp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>

#include "dsirp/cpctsp.hpp"
#include "dsirp/errors.hpp"
#include "format_util.hpp"

namespace dsirp {

void validate_tour(const Tour& tour, int n) {
  CustomerMask seen = 0;
  for (int c : tour.sequence) {
    if (c < 1 || c > n) throw InvalidInput("tour visits vertex " + std::to_string(c) + " outside 1.." + std::to_string(n));
    const CustomerMask bit = CustomerMask{1} << (c - 1);
    if (seen & bit) throw InvalidInput("tour visits customer " + std::to_string(c) + " twice");
    seen |= bit;
  }
}

CustomerMask mask_of(const Tour& tour) {
  CustomerMask m = 0;
  for (int c : tour.sequence) m |= CustomerMask{1} << (c - 1);
  return m;
}

int popcount(CustomerMask m) { return std::popcount(m); }

std::vector<int> visit_vector(const Tour& tour, int n) {
  validate_tour(tour, n);
  std::vector<int> z(n, 0);
  for (int c : tour.sequence) z[c - 1] = 1;
  return z;
}

std::vector<std::vector<int>> edge_vector(const Tour& tour, int n) {
  validate_tour(tour, n);
  std::vector<std::vector<int>> u(n + 1, std::vector<int>(n + 1, 0));
  if (tour.empty()) return u;
  auto add = [&](int a, int b) { ++u[std::min(a, b)][std::max(a, b)]; };
  int prev = 0;
  for (int c : tour.sequence) {
    add(prev, c);
    prev = c;
  }
  add(prev, 0);
  return u;
}

std::vector<int> visit_vector_from_edges(const std::vector<std::vector<int>>& u) {
  const int vertices = static_cast<int>(u.size());
  std::vector<int> z(vertices - 1, 0);
  for (int i = 1; i < vertices; ++i) {
    int degree = 0;
    for (int j = 0; j < i; ++j) degree += u[j][i];
    for (int j = i + 1; j < vertices; ++j) degree += u[i][j];
    z[i - 1] = degree / 2;
  }
  return z;
}

State initial_state(const Instance& inst, const Episode& history, const Episode& episode, int context_window) {
  if (static_cast<int>(history.demand.size()) != inst.n)
    throw InvalidInput("history must have one row per customer");
  State x;
  x.t = 0;
  x.inventory = inst.initial_inventory;
  x.history = history.demand;
  if (inst.contextual()) {
    if (!history.contextual() || !episode.contextual())
      throw InvalidInput("contextual instance requires context in both history and episode");
    x.history_context = history.context;
    x.history_context.resize(history.T);
    const int avail = static_cast<int>(episode.context.size());
    x.context_window.assign(episode.context.begin(), episode.context.begin() + std::min(context_window, avail));
  }
  return x;
}

CostBreakdown& CostBreakdown::operator+=(const CostBreakdown& o) {
  holding += o.holding;
  stockout += o.stockout;
  routing += o.routing;
  total += o.total;
  return *this;
}

double delivery_load(const Instance& inst, std::span<const double> inventory, CustomerMask visits) {
  double load = 0.0;
  for (int i = 0; i < inst.n; ++i)
    if (visits >> i & 1U) load += inst.capacity[i] - inventory[i];
  return load;
}

bool capacity_feasible(const Instance& inst, std::span<const double> inventory, CustomerMask visits) {
  return delivery_load(inst, inventory, visits) <= inst.vehicle_capacity;
}

bool is_feasible(const Instance& inst, const State& state, const Tour& tour) {
  validate_tour(tour, inst.n);
  return capacity_feasible(inst, state.inventory, mask_of(tour));
}

CostBreakdown period_cost(const Instance& inst, std::span<const double> inventory, CustomerMask visits,
                          std::span<const double> demand, double routing) {
  CostBreakdown c;
  for (int i = 0; i < inst.n; ++i) {
    const double level = (visits >> i & 1U) ? inst.capacity[i] : inventory[i];
    const double net = level - demand[i];
    if (net > 0.0) c.holding += inst.holding_cost[i] * net;
    else if (net < 0.0) c.stockout += inst.rho * inst.holding_cost[i] * -net;
  }
  c.routing = routing;
  c.total = c.holding + c.stockout + c.routing;
  return c;
}

Vector next_inventory(const Instance& inst, std::span<const double> inventory, CustomerMask visits,
                      std::span<const double> demand) {
  Vector next(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    const double level = (visits >> i & 1U) ? inst.capacity[i] : inventory[i];
    next[i] = std::max(level - demand[i], 0.0);
  }
  return next;
}

namespace {

void require_feasible(const Instance& inst, const State& state, const Tour& tour) {
  if (!is_feasible(inst, state, tour)) {
    const double load = delivery_load(inst, state.inventory, mask_of(tour));
    throw ContractViolation("period " + std::to_string(state.t) + ": delivery load " + std::to_string(load) +
                            " exceeds vehicle capacity " + std::to_string(inst.vehicle_capacity));
  }
}

void require_demand(const Instance& inst, std::span<const double> demand) {
  if (static_cast<int>(demand.size()) != inst.n) throw InvalidInput("demand vector must have n entries");
}

}  // namespace

CostBreakdown step_cost(const Instance& inst, const State& state, const Tour& tour, std::span<const double> demand) {
  require_demand(inst, demand);
  require_feasible(inst, state, tour);
  return period_cost(inst, state.inventory, mask_of(tour), demand, routing_cost(tour, inst.gamma));
}

State transition(const Instance& inst, const State& state, const Tour& tour, std::span<const double> demand,
                 const FeatureVector* next_context) {
  require_demand(inst, demand);
  require_feasible(inst, state, tour);
  State next;
  next.t = state.t + 1;
  next.inventory = next_inventory(inst, state.inventory, mask_of(tour), demand);
  next.history = state.history;
  for (int i = 0; i < inst.n; ++i) {
    auto& row = next.history[i];
    if (!row.empty()) {
      std::rotate(row.begin(), row.begin() + 1, row.end());
      row.back() = demand[i];
    }
  }
  next.history_context = state.history_context;
  if (!state.context_window.empty() && !next.history_context.empty()) {
    std::rotate(next.history_context.begin(), next.history_context.begin() + 1, next.history_context.end());
    next.history_context.back() = state.context_window.front();
  }
  if (!state.context_window.empty()) next.context_window.assign(state.context_window.begin() + 1, state.context_window.end());
  if (next_context) next.context_window.push_back(*next_context);
  return next;
}

RolloutResult rollout(const Instance& inst, const Policy& policy, const Episode& episode, const State& x0) {
  RolloutResult result;
  result.trajectory.reserve(episode.T);
  State state = x0;
  const int window = static_cast<int>(x0.context_window.size());
  for (int t = 0; t < episode.T; ++t) {
    Tour tour = policy(state);
    validate_tour(tour, inst.n);
    if (!capacity_feasible(inst, state.inventory, mask_of(tour))) {
      throw ContractViolation("policy decision infeasible at period " + std::to_string(t) + ": load " +
                              std::to_string(delivery_load(inst, state.inventory, mask_of(tour))) +
                              " exceeds vehicle capacity " + std::to_string(inst.vehicle_capacity));
    }
    const Vector demand = episode.demand_at(t);
    const CostBreakdown cost = step_cost(inst, state, tour, demand);
    const std::size_t next_idx = static_cast<std::size_t>(t + window);
    const FeatureVector* next_ctx =
        (window > 0 && next_idx < episode.context.size()) ? &episode.context[next_idx] : nullptr;
    State next = transition(inst, state, tour, demand, next_ctx);
    result.total += cost;
    result.trajectory.push_back({std::move(state), std::move(tour), demand, cost});
    state = std::move(next);
  }
  return result;
}

double relative_gap(double policy_cost, double anticipative_cost) {
  if (!(anticipative_cost > 0.0)) throw InvalidInput("anticipative baseline cost must be positive");
  return (policy_cost - anticipative_cost) / anticipative_cost;
}

void write_trajectory_csv(std::ostream& out, const Instance& inst, const RolloutResult& result) {
  out << "period,customer_visits,delivered_units_total,holding,stockout,routing,total\n";
  for (const auto& step : result.trajectory) {
    const CustomerMask m = mask_of(step.tour);
    out << step.state.t << ',' << m << ',' << detail::fmt_double(delivery_load(inst, step.state.inventory, m)) << ','
        << detail::fmt_double(step.cost.holding) << ',' << detail::fmt_double(step.cost.stockout) << ','
        << detail::fmt_double(step.cost.routing) << ',' << detail::fmt_double(step.cost.total) << '\n';
  }
}

}  // namespace dsirp
