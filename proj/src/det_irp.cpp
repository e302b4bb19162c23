#include "dsirp/det_irp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dsirp/errors.hpp"
#include "dsirp/rng.hpp"

namespace dsirp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int horizon_of(const Instance& inst, const Matrix& demands) {
  if (static_cast<int>(demands.size()) != inst.n) throw InvalidInput("demand matrix must have one row per customer");
  const int H = demands.empty() ? 0 : static_cast<int>(demands.front().size());
  for (const auto& row : demands)
    if (static_cast<int>(row.size()) != H) throw InvalidInput("demand matrix rows must have equal length");
  return H;
}

Vector column(const Matrix& demands, int h) {
  Vector d(demands.size());
  for (std::size_t i = 0; i < demands.size(); ++i) d[i] = demands[i][h];
  return d;
}

// Cost of a visit sequence. With `checked`, capacity violations throw;
// otherwise they are ignored (used while repairing).
double simulate(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                const std::vector<Vector>& columns, const std::vector<CustomerMask>& visits, bool checked) {
  Vector inv(inventory.begin(), inventory.end());
  double total = 0.0;
  for (std::size_t h = 0; h < visits.size(); ++h) {
    if (checked && !capacity_feasible(inst, inv, visits[h]))
      throw ContractViolation("schedule period " + std::to_string(h) + " exceeds the vehicle capacity");
    total += period_cost(inst, inv, visits[h], columns[h], cache.cost(visits[h])).total;
    inv = next_inventory(inst, inv, visits[h], columns[h]);
  }
  return total;
}

std::vector<Vector> columns_of(const Matrix& demands, int H) {
  std::vector<Vector> cols;
  cols.reserve(H);
  for (int h = 0; h < H; ++h) cols.push_back(column(demands, h));
  return cols;
}

}  // namespace

std::vector<std::vector<bool>> VisitSchedule::visit_matrix(int n) const {
  std::vector<std::vector<bool>> m(visits.size(), std::vector<bool>(n, false));
  for (std::size_t h = 0; h < visits.size(); ++h)
    for (int i = 0; i < n; ++i) m[h][i] = visits[h] >> i & 1U;
  return m;
}

VisitSchedule make_schedule(const TourCostCache& cache, std::vector<CustomerMask> visits) {
  VisitSchedule s;
  s.tours.reserve(visits.size());
  for (auto m : visits) s.tours.push_back(cache.tour(m));
  s.visits = std::move(visits);
  return s;
}

Matrix demand_window(const Matrix& demand, int start, int count) {
  Matrix out(demand.size());
  for (std::size_t i = 0; i < demand.size(); ++i) {
    const int end = std::min<int>(start + count, static_cast<int>(demand[i].size()));
    if (start < 0 || start > end) throw InvalidInput("demand window out of range");
    out[i].assign(demand[i].begin() + start, demand[i].begin() + end);
  }
  return out;
}

std::vector<CostBreakdown> schedule_period_costs(const Instance& inst, const TourCostCache& cache,
                                                 std::span<const double> inventory, const Matrix& demands,
                                                 const VisitSchedule& schedule) {
  const int H = horizon_of(inst, demands);
  if (schedule.periods() != H) throw InvalidInput("schedule length does not match the demand horizon");
  Vector inv(inventory.begin(), inventory.end());
  std::vector<CostBreakdown> out;
  for (int h = 0; h < H; ++h) {
    if (!capacity_feasible(inst, inv, schedule.visits[h]))
      throw ContractViolation("schedule period " + std::to_string(h) + " exceeds the vehicle capacity");
    const Vector d = column(demands, h);
    out.push_back(period_cost(inst, inv, schedule.visits[h], d, cache.cost(schedule.visits[h])));
    inv = next_inventory(inst, inv, schedule.visits[h], d);
  }
  return out;
}

double schedule_cost(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                     const Matrix& demands, const VisitSchedule& schedule) {
  const int H = horizon_of(inst, demands);
  if (schedule.periods() != H) throw InvalidInput("schedule length does not match the demand horizon");
  return simulate(inst, cache, inventory, columns_of(demands, H), schedule.visits, true);
}

bool within_exhaustive_guard(int n, int periods) {
  return n <= kExhaustiveMaxCustomers && periods <= kExhaustiveMaxPeriods;
}

// ---------------------------------------------------------------------------
// Exhaustive branch and bound

namespace {

class ExhaustiveSearch {
 public:
  ExhaustiveSearch(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                   const Matrix& demands, int H, std::optional<CustomerMask> first)
      : inst_(inst),
        cache_(cache),
        H_(H),
        columns_(columns_of(demands, H)),
        start_(inventory.begin(), inventory.end()),
        first_(first) {
    build_bounds();
  }

  std::vector<CustomerMask> run() {
    current_.assign(H_, 0);
    if (first_) current_[0] = *first_;
    best_ = simulate(inst_, cache_, start_, columns_, current_, false);
    best_visits_ = current_;
    std::vector<int> last(inst_.n, 0);
    search(0, start_, last, 0.0);
    return best_visits_;
  }

 private:
  // Per-customer relaxation (no routing, no capacity): the cheapest
  // holding plus stock-out cost from period h on, given the last visit.
  void build_bounds() {
    const int n = inst_.n;
    bound_.assign(n, std::vector<Vector>(H_ + 1));
    for (int i = 0; i < n; ++i) {
      std::vector<Vector> level(H_ + 1);
      level[0] = {start_[i]};
      for (int h = 0; h < H_; ++h) {
        level[h + 1].resize(h + 2);
        for (int l = 0; l <= h; ++l) level[h + 1][l] = std::max(level[h][l] - columns_[h][i], 0.0);
        level[h + 1][h + 1] = std::max(inst_.capacity[i] - columns_[h][i], 0.0);
      }
      auto cost = [&](double lvl, int h) {
        const double net = lvl - columns_[h][i];
        return net >= 0.0 ? inst_.holding_cost[i] * net : inst_.rho * inst_.holding_cost[i] * -net;
      };
      bound_[i][H_].assign(H_ + 1, 0.0);
      for (int h = H_ - 1; h >= 0; --h) {
        bound_[i][h].assign(h + 1, 0.0);
        for (int l = 0; l <= h; ++l) {
          const double skip = cost(level[h][l], h) + bound_[i][h + 1][l];
          const double visit = cost(inst_.capacity[i], h) + bound_[i][h + 1][h + 1];
          bound_[i][h][l] = std::min(skip, visit);
        }
      }
    }
  }

  // last[i] holds (last visit period + 1), 0 meaning "never visited".
  void search(int h, const Vector& inv, std::vector<int>& last, double partial) {
    double bound = partial;
    for (int i = 0; i < inst_.n; ++i) bound += bound_[i][h][last[i]];
    if (bound > best_ + 1e-9 * (1.0 + std::abs(best_))) return;
    if (h == H_) {
      if (partial < best_) {
        best_ = partial;
        best_visits_ = current_;
      }
      return;
    }
    const CustomerMask all = (CustomerMask{1} << inst_.n) - 1;
    const CustomerMask lo = (h == 0 && first_) ? *first_ : 0;
    const CustomerMask hi = (h == 0 && first_) ? *first_ : all;
    for (CustomerMask m = lo; m <= hi; ++m) {
      if (!capacity_feasible(inst_, inv, m)) continue;
      const double c = period_cost(inst_, inv, m, columns_[h], cache_.cost(m)).total;
      const Vector next = next_inventory(inst_, inv, m, columns_[h]);
      std::vector<int> saved = last;
      for (int i = 0; i < inst_.n; ++i)
        if (m >> i & 1U) last[i] = h + 1;
      current_[h] = m;
      search(h + 1, next, last, partial + c);
      last = std::move(saved);
    }
    current_[h] = (h == 0 && first_) ? *first_ : 0;
  }

  const Instance& inst_;
  const TourCostCache& cache_;
  int H_;
  std::vector<Vector> columns_;
  Vector start_;
  std::optional<CustomerMask> first_;
  std::vector<std::vector<Vector>> bound_;  // [customer][period][last visit + 1]
  std::vector<CustomerMask> current_;
  std::vector<CustomerMask> best_visits_;
  double best_ = kInf;
};

}  // namespace

VisitSchedule solve_exhaustive(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                               const Matrix& demands, std::optional<CustomerMask> first) {
  const int H = horizon_of(inst, demands);
  if (!within_exhaustive_guard(inst.n, H))
    throw CapabilityError("exhaustive deterministic IRP is limited to n <= " + std::to_string(kExhaustiveMaxCustomers) +
                          " and H <= " + std::to_string(kExhaustiveMaxPeriods) + " (got n=" + std::to_string(inst.n) +
                          ", H=" + std::to_string(H) + ")");
  if (first) {
    if (H < 1) throw InvalidInput("a fixed first period needs at least one period");
    if (inst.n < 32 && (*first >> inst.n) != 0) throw InvalidInput("first-period set references customers beyond n");
    if (!capacity_feasible(inst, inventory, *first)) throw InvalidInput("fixed first-period set exceeds the vehicle capacity");
  }
  ExhaustiveSearch search(inst, cache, inventory, demands, H, first);
  return make_schedule(cache, search.run());
}

// ---------------------------------------------------------------------------
// Local search

namespace {

class LocalSearch {
 public:
  LocalSearch(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
              const Matrix& demands, int H)
      : inst_(inst), cache_(cache), H_(H), columns_(columns_of(demands, H)), start_(inventory.begin(), inventory.end()) {}

  double cost(const std::vector<CustomerMask>& v) const { return simulate(inst_, cache_, start_, columns_, v, false); }

  // Drops the visit whose removal costs least per unit of freed load until
  // every period fits the vehicle.
  void repair(std::vector<CustomerMask>& v) const {
    Vector inv = start_;
    for (int h = 0; h < H_; ++h) {
      while (!capacity_feasible(inst_, inv, v[h])) {
        const double base = cost(v);
        int drop = -1;
        double best_density = kInf;
        for (int i = 0; i < inst_.n; ++i) {
          if (!(v[h] >> i & 1U)) continue;
          const double q = inst_.capacity[i] - inv[i];
          if (q <= 0.0) continue;
          auto trial = v;
          trial[h] &= ~(CustomerMask{1} << i);
          const double density = (cost(trial) - base) / q;
          if (density < best_density) {
            best_density = density;
            drop = i;
          }
        }
        if (drop < 0) break;
        v[h] &= ~(CustomerMask{1} << drop);
      }
      inv = next_inventory(inst_, inv, v[h], columns_[h]);
    }
  }

  std::vector<CustomerMask> greedy() const {
    std::vector<CustomerMask> v(H_, 0);
    Vector inv = start_;
    for (int h = 0; h < H_; ++h) {
      for (int i = 0; i < inst_.n; ++i)
        if (inv[i] - columns_[h][i] < 0.0) v[h] |= CustomerMask{1} << i;
      inv = next_inventory(inst_, inv, v[h], columns_[h]);
    }
    repair(v);
    return v;
  }

  // First-improvement descent over a shuffled neighbourhood until a full
  // scan finds nothing better or the budget runs out.
  double descend(std::vector<CustomerMask>& v, long& budget, Rng& rng) const {
    double current = cost(v);
    bool improved = true;
    while (improved && budget > 0) {
      improved = false;
      auto moves = neighbourhood(v);
      for (std::size_t k = moves.size(); k > 1; --k) std::swap(moves[k - 1], moves[rng.uniform_int(0, k - 1)]);
      for (const auto& mv : moves) {
        if (budget <= 0) break;
        auto trial = apply(v, mv);
        repair(trial);
        --budget;
        const double c = cost(trial);
        if (c < current) {
          current = c;
          v = std::move(trial);
          improved = true;
          break;
        }
      }
    }
    return current;
  }

  std::vector<CustomerMask> perturb(std::vector<CustomerMask> v, Rng& rng) const {
    const int flips = 1 + inst_.n * H_ / 8;
    for (int k = 0; k < flips; ++k) {
      const int h = static_cast<int>(rng.uniform_int(0, H_ - 1));
      const int i = static_cast<int>(rng.uniform_int(0, inst_.n - 1));
      v[h] ^= CustomerMask{1} << i;
    }
    repair(v);
    return v;
  }

  int periods() const { return H_; }

 private:
  enum class Kind { flip, move, swap };
  struct Move {
    Kind kind;
    int customer;
    int from;
    int to;
  };

  std::vector<Move> neighbourhood(const std::vector<CustomerMask>& v) const {
    std::vector<Move> moves;
    for (int h = 0; h < H_; ++h)
      for (int i = 0; i < inst_.n; ++i) moves.push_back({Kind::flip, i, h, h});
    for (int h = 0; h < H_; ++h)
      for (int g = 0; g < H_; ++g)
        if (g != h)
          for (int i = 0; i < inst_.n; ++i)
            if ((v[h] >> i & 1U) && !(v[g] >> i & 1U)) moves.push_back({Kind::move, i, h, g});
    for (int h = 0; h < H_; ++h)
      for (int g = h + 1; g < H_; ++g)
        if (v[h] != v[g]) moves.push_back({Kind::swap, -1, h, g});
    return moves;
  }

  static std::vector<CustomerMask> apply(std::vector<CustomerMask> v, const Move& mv) {
    switch (mv.kind) {
      case Kind::flip:
        v[mv.from] ^= CustomerMask{1} << mv.customer;
        break;
      case Kind::move:
        v[mv.from] &= ~(CustomerMask{1} << mv.customer);
        v[mv.to] |= CustomerMask{1} << mv.customer;
        break;
      case Kind::swap:
        std::swap(v[mv.from], v[mv.to]);
        break;
    }
    return v;
  }

  const Instance& inst_;
  const TourCostCache& cache_;
  int H_;
  std::vector<Vector> columns_;
  Vector start_;
};

VisitSchedule run_local_search(const LocalSearch& ls, const TourCostCache& cache, std::vector<CustomerMask> start,
                               const LocalSearchOptions& options) {
  const int restarts = std::max(1, options.restarts);
  std::vector<CustomerMask> best = start;
  double best_cost = ls.cost(best);
  long remaining = std::max(0L, options.budget);
  for (int r = 0; r < restarts && remaining > 0; ++r) {
    Rng rng(derive_seed(options.seed, {static_cast<std::uint64_t>(r)}));
    const long allotted = remaining / (restarts - r);
    long share = allotted;
    std::vector<CustomerMask> v = r == 0 ? start : ls.perturb(best, rng);
    double c = ls.descend(v, share, rng);
    // Perturb-and-descend from the restart's incumbent until its share of
    // the budget is spent.
    while (share > 0) {
      auto trial = ls.perturb(v, rng);
      const long before = share;
      const double t = ls.descend(trial, share, rng);
      if (t < c) {
        c = t;
        v = std::move(trial);
      }
      if (share == before) break;
    }
    remaining -= allotted - share;
    if (c < best_cost) {
      best_cost = c;
      best = std::move(v);
    }
  }
  return make_schedule(cache, std::move(best));
}

}  // namespace

VisitSchedule greedy_schedule(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                              const Matrix& demands) {
  const int H = horizon_of(inst, demands);
  LocalSearch ls(inst, cache, inventory, demands, H);
  return make_schedule(cache, ls.greedy());
}

VisitSchedule solve_local_search(const Instance& inst, const TourCostCache& cache,
                                 std::span<const double> inventory, const Matrix& demands,
                                 const LocalSearchOptions& options) {
  const int H = horizon_of(inst, demands);
  if (H == 0) return {};
  LocalSearch ls(inst, cache, inventory, demands, H);
  return run_local_search(ls, cache, ls.greedy(), options);
}

VisitSchedule improve_schedule(const Instance& inst, const TourCostCache& cache, std::span<const double> inventory,
                               const Matrix& demands, const VisitSchedule& start, const LocalSearchOptions& options) {
  const int H = horizon_of(inst, demands);
  if (start.periods() != H) throw InvalidInput("schedule length does not match the demand horizon");
  if (H == 0) return {};
  LocalSearch ls(inst, cache, inventory, demands, H);
  auto v = start.visits;
  ls.repair(v);
  return run_local_search(ls, cache, std::move(v), options);
}

VisitSchedule solve_deterministic(const Instance& inst, const TourCostCache& cache,
                                  std::span<const double> inventory, const Matrix& demands,
                                  const LocalSearchOptions& options) {
  const int H = horizon_of(inst, demands);
  if (H == 0) return {};
  if (within_exhaustive_guard(inst.n, H)) return solve_exhaustive(inst, cache, inventory, demands);
  return solve_local_search(inst, cache, inventory, demands, options);
}

Tour anticipative_first_decision(const Instance& inst, const TourCostCache& cache,
                                 std::span<const double> inventory, const Matrix& future_demands,
                                 const LocalSearchOptions& options) {
  const int H = horizon_of(inst, future_demands);
  if (H < 1) throw InvalidInput("anticipative decision needs at least one future period");
  return solve_deterministic(inst, cache, inventory, future_demands, options).tours.front();
}

}  // namespace dsirp
