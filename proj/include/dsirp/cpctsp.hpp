#pragma once

#include <iosfwd>
#include <memory>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "dsirp/instance.hpp"
#include "dsirp/mdp.hpp"

namespace dsirp {

// Held-Karp is guarded to at most this many customers in the graph.
inline constexpr int kMaxHeldKarpCustomers = 20;
// Up to this size the cache materialises the full subset table at once.
inline constexpr int kFullTableMaxCustomers = 14;

struct HeldKarpResult {
  double cost = 0.0;
  std::vector<int> order;  // vertex ids, depot excluded
};

// Optimal depot-rooted cycle through exactly the customers in `subset`.
HeldKarpResult held_karp(CustomerMask subset, const Matrix& gamma);

// Sum of gamma over consecutive vertices, depot legs included.
double routing_cost(const Tour& tour, const Matrix& gamma);

// Optimal tour cost and order per customer subset for one travel-cost
// matrix. Lookups are thread-safe; the table is filled lazily.
class TourCostCache {
 public:
  explicit TourCostCache(Matrix gamma);
  TourCostCache(const TourCostCache&) = delete;
  TourCostCache& operator=(const TourCostCache&) = delete;
  ~TourCostCache();

  int n() const { return n_; }
  const Matrix& gamma() const { return gamma_; }

  double cost(CustomerMask subset) const;
  std::vector<int> order(CustomerMask subset) const;
  Tour tour(CustomerMask subset) const { return Tour{order(subset)}; }

  // Number of subsets whose optimum is currently materialised.
  std::size_t size() const;
  // CSV dump of the materialised (subset, cost) table.
  void dump_csv(std::ostream& out) const;

 private:
  struct Table;
  const Table& table() const;

  int n_;
  Matrix gamma_;
  mutable std::once_flag table_once_;
  mutable std::unique_ptr<Table> table_;
  mutable std::mutex map_mutex_;
  mutable std::unordered_map<CustomerMask, HeldKarpResult> map_;
};

struct CpctspSolution {
  Tour tour;
  CustomerMask mask = 0;
  double objective = 0.0;  // sum of collected prizes minus routing cost
  double routing = 0.0;
};

// Prize sum over the mask (customer order) minus routing.
double cpctsp_objective(std::span<const double> prizes, CustomerMask mask, double routing);

// Exact capacitated prize-collecting TSP by enumeration of capacity-feasible
// subsets of positive-prize customers. Ties: fewer customers, then the
// numerically smallest mask.
CpctspSolution solve_cpctsp(std::span<const double> prizes, std::span<const double> quantities,
                            double vehicle_capacity, const TourCostCache& cache);

// +M on the target, -M elsewhere, M = n * max gamma.
Vector prizes_for_target(CustomerMask target, const Matrix& gamma);

}  // namespace dsirp
