#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dsirp/cpctsp.hpp"
#include "dsirp/instance.hpp"
#include "dsirp/mdp.hpp"

namespace dsirp {

// Per-period visit sets of a deterministic multi-period plan, with the
// Held-Karp-optimal routing order of each set.
struct VisitSchedule {
  std::vector<CustomerMask> visits;
  std::vector<Tour> tours;

  int periods() const { return static_cast<int>(visits.size()); }
  std::vector<std::vector<bool>> visit_matrix(int n) const;
  bool operator==(const VisitSchedule&) const = default;
};

struct LocalSearchOptions {
  std::uint64_t seed = 0;
  long budget = 50000;  // move evaluations, shared by all restarts
  int restarts = 5;
};

VisitSchedule make_schedule(const TourCostCache& cache, std::vector<CustomerMask> visits);

// Columns [start, start + count) of an n x T demand matrix.
Matrix demand_window(const Matrix& demand, int start, int count);

// Exact cost of following the schedule from `inventory` under the given
// n x H demands (order-up-to replenishment, zero terminal value). Throws
// ContractViolation naming the first period whose visit set exceeds the
// vehicle capacity.
double schedule_cost(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                     const Matrix& demands, const VisitSchedule& schedule);
std::vector<CostBreakdown> schedule_period_costs(const Instance& inst, const TourCostCache& cache,
                                                 std::span<const double> inventory, const Matrix& demands,
                                                 const VisitSchedule& schedule);

inline constexpr int kExhaustiveMaxCustomers = 6;
inline constexpr int kExhaustiveMaxPeriods = 4;
bool within_exhaustive_guard(int n, int periods);

// Globally optimal schedule by depth-first branch and bound over per-period
// capacity-feasible subsets. Among optimal schedules the one with the
// lexicographically smallest sequence of period masks is returned. With
// `first`, the first period is fixed to that (capacity-feasible) set.
VisitSchedule solve_exhaustive(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                               const Matrix& demands, std::optional<CustomerMask> first = std::nullopt);

// Visit whenever the period's demand would otherwise cause a stock-out,
// then repair capacity.
VisitSchedule greedy_schedule(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                              const Matrix& demands);

// Multi-start local search (flip, move between periods, swap periods) with
// capacity repair. budget = 0 returns the repaired greedy schedule.
VisitSchedule solve_local_search(const Instance& inst, const TourCostCache& cache,
                                 std::span<const double> inventory, const Matrix& demands,
                                 const LocalSearchOptions& options = {});

// Descent from a given schedule; never returns anything worse than `start`.
VisitSchedule improve_schedule(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                               const Matrix& demands, const VisitSchedule& start,
                               const LocalSearchOptions& options = {});

// Exhaustive within the guard, local search otherwise.
VisitSchedule solve_deterministic(const Instance& inst, const TourCostCache& cache,
                                  std::span<const double> inventory, const Matrix& demands,
                                  const LocalSearchOptions& options = {});

Tour anticipative_first_decision(const Instance& inst, const TourCostCache& cache,
                                 std::span<const double> inventory, const Matrix& future_demands,
                                 const LocalSearchOptions& options = {});

}  // namespace dsirp
