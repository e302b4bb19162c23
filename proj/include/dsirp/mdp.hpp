#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "dsirp/instance.hpp"

namespace dsirp {

// Bit i-1 set <=> customer i visited.
using CustomerMask = std::uint32_t;

inline constexpr int kHistoryWindow = 50;
// Number of future feature vectors (current period included) a state carries.
inline constexpr int kContextWindow = 10;

// A depot-rooted cycle: depot -> sequence[0] -> ... -> sequence.back() -> depot.
// Customer indices are vertex ids in 1..n.
struct Tour {
  std::vector<int> sequence;

  bool empty() const { return sequence.empty(); }
  bool operator==(const Tour&) const = default;
};

void validate_tour(const Tour& tour, int n);
CustomerMask mask_of(const Tour& tour);
int popcount(CustomerMask m);

// z_i = 1 iff customer i is on the tour (0-based over customers).
std::vector<int> visit_vector(const Tour& tour, int n);
// Undirected edge multiplicities u[a][b] (a < b) over vertices 0..n. The
// out-and-back tour [i] uses edge (0, i) twice.
std::vector<std::vector<int>> edge_vector(const Tour& tour, int n);
// Visit vector recovered from edge multiplicities: half the vertex degree.
std::vector<int> visit_vector_from_edges(const std::vector<std::vector<int>>& u);

struct State {
  int t = 0;
  Vector inventory;
  Matrix history;                             // n x W, oldest first
  std::vector<FeatureVector> history_context;  // W entries aligned with history columns
  std::vector<FeatureVector> context_window;   // features for periods t, t+1, ...

  int window() const { return history.empty() ? 0 : static_cast<int>(history.front().size()); }
  bool operator==(const State&) const = default;
};

// x0: t = 0, inventories I0, history from sample_history, context window
// = the episode's first `context_window` feature vectors.
State initial_state(const Instance& inst, const Episode& history, const Episode& episode,
                    int context_window = kContextWindow);

struct CostBreakdown {
  double holding = 0.0;
  double stockout = 0.0;
  double routing = 0.0;
  double total = 0.0;

  CostBreakdown& operator+=(const CostBreakdown& o);
  bool operator==(const CostBreakdown&) const = default;
};

// Replenishment load sum_i (C_i - I_i) z_i, accumulated in customer order.
double delivery_load(const Instance& inst, std::span<const double> inventory, CustomerMask visits);
bool capacity_feasible(const Instance& inst, std::span<const double> inventory, CustomerMask visits);
bool is_feasible(const Instance& inst, const State& state, const Tour& tour);

// Holding and stock-out part of one period, routing supplied by the caller.
CostBreakdown period_cost(const Instance& inst, std::span<const double> inventory, CustomerMask visits,
                          std::span<const double> demand, double routing);
// Post-decision, post-demand inventories {I(1-z) + C z - d}^+.
Vector next_inventory(const Instance& inst, std::span<const double> inventory, CustomerMask visits,
                      std::span<const double> demand);

CostBreakdown step_cost(const Instance& inst, const State& state, const Tour& tour, std::span<const double> demand);
State transition(const Instance& inst, const State& state, const Tour& tour, std::span<const double> demand,
                 const FeatureVector* next_context = nullptr);

using Policy = std::function<Tour(const State&)>;

struct TrajectoryStep {
  State state;
  Tour tour;
  Vector demand;
  CostBreakdown cost;
};

struct RolloutResult {
  std::vector<TrajectoryStep> trajectory;
  CostBreakdown total;
};

// Applies the policy for t = 0..T-1. Throws ContractViolation naming the
// period if the policy returns a tour that breaks the capacity constraint.
RolloutResult rollout(const Instance& inst, const Policy& policy, const Episode& episode, const State& x0);

double relative_gap(double policy_cost, double anticipative_cost);

// CSV: period,customer_visits,delivered_units_total,holding,stockout,routing,total
void write_trajectory_csv(std::ostream& out, const Instance& inst, const RolloutResult& result);

}  // namespace dsirp
