#include "dsirp/cpctsp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>

#include "dsirp/errors.hpp"
#include "format_util.hpp"

namespace dsirp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// dp[S][j]: cheapest path leaving the depot, visiting the local subset S and
// ending at local vertex j. Paths are summed left to right from the depot,
// so a table built over any superset yields bit-identical values.
struct HeldKarpTable {
  std::vector<int> vertices;  // local index -> vertex id
  std::vector<double> dp;     // (1 << k) * k
  std::vector<std::int8_t> parent;

  int k() const { return static_cast<int>(vertices.size()); }
  double at(std::uint32_t s, int j) const { return dp[static_cast<std::size_t>(s) * k() + j]; }
};

HeldKarpTable build_table(const std::vector<int>& vertices, const Matrix& gamma) {
  HeldKarpTable t;
  t.vertices = vertices;
  const int k = t.k();
  const std::size_t subsets = std::size_t{1} << k;
  t.dp.assign(subsets * k, kInf);
  t.parent.assign(subsets * k, -1);
  for (int j = 0; j < k; ++j) t.dp[(std::size_t{1} << j) * k + j] = gamma[0][vertices[j]];
  for (std::uint32_t s = 1; s < subsets; ++s) {
    if (std::popcount(s) < 2) continue;
    for (int j = 0; j < k; ++j) {
      if (!(s >> j & 1U)) continue;
      const std::uint32_t prev = s & ~(1U << j);
      double best = kInf;
      int arg = -1;
      for (int q = 0; q < k; ++q) {
        if (!(prev >> q & 1U)) continue;
        const double c = t.at(prev, q) + gamma[vertices[q]][vertices[j]];
        if (c < best) {
          best = c;
          arg = q;
        }
      }
      t.dp[static_cast<std::size_t>(s) * k + j] = best;
      t.parent[static_cast<std::size_t>(s) * k + j] = static_cast<std::int8_t>(arg);
    }
  }
  return t;
}

HeldKarpResult close_cycle(const HeldKarpTable& t, std::uint32_t local, const Matrix& gamma) {
  HeldKarpResult r;
  if (local == 0) return r;
  const int k = t.k();
  double best = kInf;
  int last = -1;
  for (int j = 0; j < k; ++j) {
    if (!(local >> j & 1U)) continue;
    const double c = t.at(local, j) + gamma[t.vertices[j]][0];
    if (c < best) {
      best = c;
      last = j;
    }
  }
  r.cost = best;
  std::uint32_t s = local;
  int j = last;
  while (j >= 0) {
    r.order.push_back(t.vertices[j]);
    const int p = t.parent[static_cast<std::size_t>(s) * k + j];
    s &= ~(1U << j);
    j = p;
  }
  std::reverse(r.order.begin(), r.order.end());
  return r;
}

std::vector<int> members(CustomerMask m) {
  std::vector<int> v;
  for (int i = 0; m >> i; ++i)
    if (m >> i & 1U) v.push_back(i + 1);
  return v;
}

void check_graph(const Matrix& gamma) {
  const int n = static_cast<int>(gamma.size()) - 1;
  if (n < 0) throw InvalidInput("travel-cost matrix is empty");
  if (n > kMaxHeldKarpCustomers)
    throw CapabilityError("exact tour costs are limited to " + std::to_string(kMaxHeldKarpCustomers) +
                          " customers, instance has " + std::to_string(n));
}

}  // namespace

HeldKarpResult held_karp(CustomerMask subset, const Matrix& gamma) {
  check_graph(gamma);
  const int n = static_cast<int>(gamma.size()) - 1;
  if (n < 32 && (subset >> n) != 0) throw InvalidInput("subset references customers beyond n");
  if (subset == 0) return {};
  const auto verts = members(subset);
  const HeldKarpTable t = build_table(verts, gamma);
  return close_cycle(t, (std::uint32_t{1} << verts.size()) - 1, gamma);
}

double routing_cost(const Tour& tour, const Matrix& gamma) {
  if (tour.empty()) return 0.0;
  double c = 0.0;
  int prev = 0;
  for (int v : tour.sequence) {
    c += gamma[prev][v];
    prev = v;
  }
  return c + gamma[prev][0];
}

struct TourCostCache::Table {
  HeldKarpTable hk;
  std::vector<double> cost;
};

TourCostCache::TourCostCache(Matrix gamma) : n_(static_cast<int>(gamma.size()) - 1), gamma_(std::move(gamma)) {
  check_graph(gamma_);
}

TourCostCache::~TourCostCache() = default;

const TourCostCache::Table& TourCostCache::table() const {
  std::call_once(table_once_, [this] {
    auto t = std::make_unique<Table>();
    std::vector<int> all(n_);
    for (int i = 0; i < n_; ++i) all[i] = i + 1;
    t->hk = build_table(all, gamma_);
    const std::size_t subsets = std::size_t{1} << n_;
    t->cost.assign(subsets, 0.0);
    for (std::uint32_t s = 1; s < subsets; ++s) {
      double best = kInf;
      for (int j = 0; j < n_; ++j)
        if (s >> j & 1U) best = std::min(best, t->hk.at(s, j) + gamma_[j + 1][0]);
      t->cost[s] = best;
    }
    table_ = std::move(t);
  });
  return *table_;
}

double TourCostCache::cost(CustomerMask subset) const {
  if (subset == 0) return 0.0;
  if (n_ <= kFullTableMaxCustomers) return table().cost[subset];
  {
    std::lock_guard lock(map_mutex_);
    if (auto it = map_.find(subset); it != map_.end()) return it->second.cost;
  }
  HeldKarpResult r = held_karp(subset, gamma_);
  const double c = r.cost;
  std::lock_guard lock(map_mutex_);
  map_.emplace(subset, std::move(r));
  return c;
}

std::vector<int> TourCostCache::order(CustomerMask subset) const {
  if (subset == 0) return {};
  if (n_ <= kFullTableMaxCustomers) return close_cycle(table().hk, subset, gamma_).order;
  cost(subset);
  std::lock_guard lock(map_mutex_);
  return map_.at(subset).order;
}

std::size_t TourCostCache::size() const {
  if (n_ <= kFullTableMaxCustomers) return table_ ? (std::size_t{1} << n_) : 0;
  std::lock_guard lock(map_mutex_);
  return map_.size();
}

void TourCostCache::dump_csv(std::ostream& out) const {
  out << "subset,cost\n";
  if (n_ <= kFullTableMaxCustomers) {
    const auto& t = table();
    for (std::size_t s = 0; s < t.cost.size(); ++s) out << s << ',' << detail::fmt_double(t.cost[s]) << '\n';
    return;
  }
  std::lock_guard lock(map_mutex_);
  std::vector<CustomerMask> keys;
  for (const auto& [k, v] : map_) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  for (auto k : keys) out << k << ',' << detail::fmt_double(map_.at(k).cost) << '\n';
}

double cpctsp_objective(std::span<const double> prizes, CustomerMask mask, double routing) {
  double collected = 0.0;
  for (std::size_t i = 0; i < prizes.size(); ++i)
    if (mask >> i & 1U) collected += prizes[i];
  return collected - routing;
}

CpctspSolution solve_cpctsp(std::span<const double> prizes, std::span<const double> quantities,
                            double vehicle_capacity, const TourCostCache& cache) {
  const int n = cache.n();
  if (static_cast<int>(prizes.size()) != n || static_cast<int>(quantities.size()) != n)
    throw InvalidInput("prize and quantity vectors must have one entry per customer");

  CustomerMask positive = 0;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(prizes[i])) throw InvalidInput("prizes must be finite");
    if (prizes[i] > 0.0) positive |= CustomerMask{1} << i;
  }

  CustomerMask best_mask = 0;
  double best_obj = 0.0;
  double best_routing = 0.0;
  // Enumerate every submask of the positive-prize set (0 included last).
  for (CustomerMask s = positive;; s = (s - 1) & positive) {
    if (s != 0) {
      double load = 0.0;
      for (int i = 0; i < n; ++i)
        if (s >> i & 1U) load += quantities[i];
      if (load <= vehicle_capacity) {
        const double routing = cache.cost(s);
        const double obj = cpctsp_objective(prizes, s, routing);
        const bool better = obj > best_obj ||
                            (obj == best_obj && (popcount(s) < popcount(best_mask) ||
                                                 (popcount(s) == popcount(best_mask) && s < best_mask)));
        if (better) {
          best_obj = obj;
          best_mask = s;
          best_routing = routing;
        }
      }
    }
    if (s == 0) break;
  }
  CpctspSolution sol;
  sol.mask = best_mask;
  sol.tour = cache.tour(best_mask);
  sol.objective = best_obj;
  sol.routing = best_routing;
  return sol;
}

Vector prizes_for_target(CustomerMask target, const Matrix& gamma) {
  const int n = static_cast<int>(gamma.size()) - 1;
  double max_gamma = 0.0;
  for (const auto& row : gamma)
    for (double g : row) max_gamma = std::max(max_gamma, g);
  const double big = n * max_gamma;
  Vector theta(n);
  for (int i = 0; i < n; ++i) theta[i] = (target >> i & 1U) ? big : -big;
  return theta;
}

}  // namespace dsirp
