#include "dsirp/imitation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "dsirp/errors.hpp"
#include "dsirp/policies.hpp"
#include "dsirp/rng.hpp"
#include "json_util.hpp"
#include "model_json.hpp"
#include "parallel.hpp"

namespace dsirp {

Paradigm parse_paradigm(std::string_view name) {
  if (name == "baty") return Paradigm::baty;
  if (name == "sampling") return Paradigm::sampling;
  if (name == "anticipative_dagger") return Paradigm::anticipative_dagger;
  if (name == "voting_dagger") return Paradigm::voting_dagger;
  throw InvalidInput("unknown paradigm '" + std::string(name) + "'");
}

std::string to_string(Paradigm p) {
  switch (p) {
    case Paradigm::baty: return "baty";
    case Paradigm::sampling: return "sampling";
    case Paradigm::anticipative_dagger: return "anticipative_dagger";
    case Paradigm::voting_dagger: return "voting_dagger";
  }
  return "?";
}

OracleContext oracle_context(const Instance& inst, const TourCostCache& cache, const State& state) {
  OracleContext o;
  o.quantities.resize(inst.n);
  for (int i = 0; i < inst.n; ++i) o.quantities[i] = inst.capacity[i] - state.inventory[i];
  o.vehicle_capacity = inst.vehicle_capacity;
  o.cache = &cache;
  return o;
}

// ---------------------------------------------------------------------------
// Fenchel-Young loss

namespace {

int draws(const PerturbationOptions& pert) {
  if (pert.n_pert < 1) throw InvalidInput("n_pert must be at least 1");
  if (!(pert.pert_scale >= 0.0)) throw InvalidInput("pert_scale must be non-negative");
  return pert.pert_scale == 0.0 ? 1 : pert.n_pert;
}

// Calls fn(solution) once per perturbed prize vector.
template <class Fn>
void for_each_perturbation(std::span<const double> theta, const OracleContext& oracle, const PerturbationOptions& pert,
                           std::uint64_t seed, Fn&& fn) {
  const int K = draws(pert);
  Rng rng(seed);
  Vector perturbed(theta.size());
  for (int k = 0; k < K; ++k) {
    for (std::size_t i = 0; i < theta.size(); ++i)
      perturbed[i] = pert.pert_scale == 0.0 ? theta[i] : theta[i] + pert.pert_scale * rng.normal(0.0, 1.0);
    fn(solve_cpctsp(perturbed, oracle.quantities, oracle.vehicle_capacity, *oracle.cache), perturbed);
  }
}

}  // namespace

Vector fy_gradient_theta(std::span<const double> theta, const Tour& target, const OracleContext& oracle,
                         const PerturbationOptions& pert, std::uint64_t seed) {
  const CustomerMask t = mask_of(target);
  Vector g(theta.size(), 0.0);
  for_each_perturbation(theta, oracle, pert, seed, [&](const CpctspSolution& sol, const Vector&) {
    for (std::size_t i = 0; i < g.size(); ++i)
      if (sol.mask >> i & 1U) g[i] += 1.0;
  });
  const double K = draws(pert);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = g[i] / K - ((t >> i & 1U) ? 1.0 : 0.0);
  return g;
}

double fy_loss_estimate(std::span<const double> theta, const Tour& target, const OracleContext& oracle,
                        const PerturbationOptions& pert, std::uint64_t seed) {
  const CustomerMask t = mask_of(target);
  double best = 0.0;
  for_each_perturbation(theta, oracle, pert, seed, [&](const CpctspSolution& sol, const Vector&) { best += sol.objective; });
  best /= draws(pert);
  return best - cpctsp_objective(theta, t, oracle.cache->cost(t));
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

struct Prepared {
  std::vector<PrizeInput> inputs;
  std::vector<OracleContext> oracles;
};

Prepared prepare(const Dataset& data, const Instance& inst, const TourCostCache& cache, const QuantileConfig& config) {
  Prepared p;
  p.inputs.reserve(data.size());
  p.oracles.reserve(data.size());
  for (const auto& s : data) {
    p.inputs.push_back(make_prize_input(s.state, inst, config));
    p.oracles.push_back(oracle_context(inst, cache, s.state));
  }
  return p;
}

double prepared_loss(const Prepared& p, const Dataset& data, const ModelParams& w, const PerturbationOptions& pert,
                     std::uint64_t seed, int jobs) {
  Vector losses(data.size());
  detail::parallel_for(data.size(), jobs, [&](std::size_t j) {
    const Vector theta = prize_forward(p.inputs[j], w);
    losses[j] = fy_loss_estimate(theta, data[j].target, p.oracles[j], pert, derive_seed(seed, {j}));
  });
  double s = 0.0;
  for (double l : losses) s += l;
  return data.empty() ? 0.0 : s / static_cast<double>(data.size());
}

}  // namespace

double dataset_loss(const Dataset& data, const Instance& inst, const TourCostCache& cache, const ModelParams& params,
                    const QuantileConfig& config, const PerturbationOptions& pert, std::uint64_t seed, int jobs) {
  return prepared_loss(prepare(data, inst, cache, config), data, params, pert, seed, jobs);
}

FitResult fit_params(const Dataset& data, const Instance& inst, const TourCostCache& cache,
                     const ModelParams& params0, const QuantileConfig& config, const FitOptions& options,
                     std::uint64_t seed) {
  if (data.empty()) throw InvalidInput("cannot fit parameters on an empty dataset");
  if (options.batch_size < 1 || options.steps < 0) throw InvalidInput("invalid fit options");
  const Prepared prep = prepare(data, inst, cache, config);
  const std::uint64_t eval_seed = derive_seed(seed, {0xE7A1});

  FitResult result{params0, prepared_loss(prep, data, params0, options.perturbation, eval_seed, options.jobs), 0};
  ModelParams w = params0;
  Vector flat = w.flatten();
  Vector m(flat.size(), 0.0), v(flat.size(), 0.0);

  const std::size_t N = data.size();
  const std::size_t B = std::min<std::size_t>(options.batch_size, N);
  const std::size_t per_pass = (N + B - 1) / B;
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);

  std::vector<Vector> grads(B);
  for (int s = 0; s < options.steps; ++s) {
    const std::size_t slot = static_cast<std::size_t>(s) % per_pass;
    if (slot == 0) {
      Rng shuffle(derive_seed(seed, {0x5107, static_cast<std::uint64_t>(s / per_pass)}));
      std::shuffle(order.begin(), order.end(), shuffle.engine());
    }
    const std::size_t lo = slot * B;
    const std::size_t hi = std::min(N, lo + B);
    detail::parallel_for(hi - lo, options.jobs, [&](std::size_t k) {
      const std::size_t j = order[lo + k];
      const Vector theta = prize_forward(prep.inputs[j], w);
      const Vector dtheta = fy_gradient_theta(theta, data[j].target, prep.oracles[j], options.perturbation,
                                              derive_seed(seed, {static_cast<std::uint64_t>(s), j}));
      grads[k] = prize_backward(prep.inputs[j], w, dtheta).flatten();
    });
    const double scale = 1.0 / static_cast<double>(hi - lo);
    const double t = s + 1;
    const double c1 = 1.0 - std::pow(options.beta1, t);
    const double c2 = 1.0 - std::pow(options.beta2, t);
    for (std::size_t q = 0; q < flat.size(); ++q) {
      double g = 0.0;
      for (std::size_t k = 0; k < hi - lo; ++k) g += grads[k][q];
      g *= scale;
      m[q] = options.beta1 * m[q] + (1.0 - options.beta1) * g;
      v[q] = options.beta2 * v[q] + (1.0 - options.beta2) * g * g;
      flat[q] -= options.step_size * (m[q] / c1) / (std::sqrt(v[q] / c2) + options.epsilon);
    }
    w.assign(flat);
    result.steps = s + 1;
    if (slot + 1 == per_pass || s + 1 == options.steps) {
      const double loss = prepared_loss(prep, data, w, options.perturbation, eval_seed, options.jobs);
      if (loss < result.loss) {
        result.loss = loss;
        result.params = w;
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Datasets

double TrainConfig::alpha(int epoch) const {
  if (!alpha_schedule.empty())
    return alpha_schedule[std::min<std::size_t>(static_cast<std::size_t>(epoch), alpha_schedule.size() - 1)];
  const double half = epochs / 2.0;
  if (half <= 0.0) return 0.0;
  return std::max(0.0, 1.0 - epoch / half);
}

void TrainConfig::validate() const {
  quantiles.validate();
  if (epochs < 0) throw InvalidInput("epochs must be non-negative");
  if (voting < 1) throw InvalidInput("voting scenario count M must be at least 1");
  if (horizon < 1) throw InvalidInput("training episode length must be at least 1");
  if (patience < 1) throw InvalidInput("patience must be at least 1");
  if (samples_per_epoch < 1) throw InvalidInput("samples_per_epoch must be at least 1");
  if (fit.perturbation.n_pert < 1) throw InvalidInput("n_pert must be at least 1");
  for (std::size_t k = 0; k < alpha_schedule.size(); ++k) {
    if (!(alpha_schedule[k] >= 0.0 && alpha_schedule[k] <= 1.0)) throw InvalidInput("alpha must lie in [0, 1]");
    if (k > 0 && alpha_schedule[k] > alpha_schedule[k - 1]) throw InvalidInput("alpha schedule must be non-increasing");
  }
}

State sampled_state(const Instance& inst, const Episode& history, const Episode& episode, Rng& rng) {
  State x = initial_state(inst, history, episode);
  for (int i = 0; i < inst.n; ++i) x.inventory[i] = rng.uniform(0.0, inst.capacity[i]);
  return x;
}

namespace {

const FeatureVector* context_at(const Episode& ep, std::size_t idx) {
  return idx < ep.context.size() ? &ep.context[idx] : nullptr;
}

// Anticipative plans over freshly sampled H-period episodes from sampled
// initial states; keeps the first `keep` pairs of each plan.
Dataset anticipative_plans(const Instance& inst, const TourCostCache& cache, const Episode& history,
                           const TrainConfig& config, int count, int keep, int epoch, std::uint64_t seed) {
  const int H = config.quantiles.horizon;
  std::vector<Dataset> parts(count);
  detail::parallel_for(count, config.jobs, [&](std::size_t e) {
    const Episode ep = sample_episode(inst, H, derive_seed(seed, {e, 1}));
    Rng rng(derive_seed(seed, {e, 2}));
    State x = sampled_state(inst, history, ep, rng);
    LocalSearchOptions search = config.search;
    search.seed = derive_seed(seed, {e, 3});
    const VisitSchedule plan = solve_deterministic(inst, cache, x.inventory, ep.demand, search);
    const int window = static_cast<int>(x.context_window.size());
    for (int h = 0; h < std::min(keep, H); ++h) {
      parts[e].push_back({x, plan.tours[h], epoch});
      if (h + 1 < std::min(keep, H))
        x = transition(inst, x, plan.tours[h], ep.demand_at(h), context_at(ep, static_cast<std::size_t>(h + window)));
    }
  });
  Dataset out;
  for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

}  // namespace

Dataset build_dataset_baty(const Instance& inst, const TourCostCache& cache, const Episode& history,
                           const TrainConfig& config, int episodes, int epoch, std::uint64_t seed) {
  return anticipative_plans(inst, cache, history, config, episodes, config.quantiles.horizon, epoch, seed);
}

Dataset build_dataset_sampling(const Instance& inst, const TourCostCache& cache, const Episode& history,
                               const TrainConfig& config, int solves, int epoch, std::uint64_t seed) {
  return anticipative_plans(inst, cache, history, config, solves, 1, epoch, seed);
}

Matrix bootstrap_trajectory(const Instance& inst, const State& state, int periods, Rng& rng) {
  const int W = state.window();
  if (W < 1) throw InvalidInput("bootstrap needs a non-empty history");
  Matrix d(inst.n, Vector(periods));
  for (int h = 0; h < periods; ++h) {
    if (inst.contextual()) {
      // Demands and features are resampled jointly: one shared column.
      const long j = rng.uniform_int(0, W - 1);
      for (int i = 0; i < inst.n; ++i) d[i][h] = state.history[i][j];
    } else {
      for (int i = 0; i < inst.n; ++i) d[i][h] = state.history[i][rng.uniform_int(0, W - 1)];
    }
  }
  return d;
}

Dataset dagger_rollout(const Instance& inst, const TourCostCache& cache, const Episode& history,
                       const Episode& episode, const ModelParams& params, const TrainConfig& config, double alpha,
                       int epoch, std::uint64_t seed) {
  const int H = config.quantiles.horizon;
  const int T = config.horizon;
  if (episode.T < T + H - 1) throw InvalidInput("DAgger episode must cover T + H - 1 periods");
  const bool voting = config.paradigm == Paradigm::voting_dagger;
  Rng rng(seed);
  LocalSearchOptions search = config.search;
  search.seed = derive_seed(seed, {0x5EA});
  Dataset out;
  State x = initial_state(inst, history, episode);
  const int window = static_cast<int>(x.context_window.size());
  for (int t = 0; t < T; ++t) {
    const bool follow_expert = rng.bernoulli(alpha);
    std::optional<Tour> expert;
    auto expert_decision = [&]() -> const Tour& {
      if (!expert)
        expert = anticipative_first_decision(inst, cache, x.inventory, demand_window(episode.demand, t, H), search);
      return *expert;
    };
    if (voting) {
      for (int j = 0; j < config.voting; ++j) {
        const Matrix traj = bootstrap_trajectory(inst, x, H, rng);
        out.push_back({x, anticipative_first_decision(inst, cache, x.inventory, traj, search), epoch});
      }
    } else {
      out.push_back({x, expert_decision(), epoch});
    }
    const Tour action = follow_expert ? expert_decision() : mlco_policy(inst, cache, x, params, config.quantiles);
    x = transition(inst, x, action, episode.demand_at(t), context_at(episode, static_cast<std::size_t>(t + window)));
  }
  return out;
}

Dataset age_dataset(const Dataset& data, int current_epoch, std::uint64_t seed, int max_age, double retain_probability) {
  Rng rng(seed);
  Dataset out;
  for (const auto& s : data) {
    const int age = current_epoch - s.epoch;
    if (age <= 0) {
      out.push_back(s);
      continue;
    }
    if (age > max_age) continue;
    if (rng.bernoulli(retain_probability)) out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation and early stopping

double validation_cost(const Instance& inst, const TourCostCache& cache, const Episode& history,
                       const std::vector<Episode>& validation, const ModelParams& params,
                       const QuantileConfig& config, int jobs) {
  if (validation.empty()) throw InvalidInput("validation needs at least one episode");
  Vector costs(validation.size());
  const Policy policy = [&](const State& x) { return mlco_policy(inst, cache, x, params, config); };
  detail::parallel_for(validation.size(), jobs, [&](std::size_t j) {
    costs[j] = rollout(inst, policy, validation[j], initial_state(inst, history, validation[j])).total.total;
  });
  double s = 0.0;
  for (double c : costs) s += c;
  return s;
}

bool early_stop_check(EarlyStopState& state, const ModelParams& params, double cost, int patience) {
  if (cost < state.best_cost) {
    state.best = params;
    state.best_cost = cost;
    state.stale = 0;
    return false;
  }
  ++state.stale;
  return state.stale >= patience;
}

// ---------------------------------------------------------------------------
// Trainer state persistence

namespace {

using detail::json;

json state_to_json(const State& x) {
  json j;
  j["t"] = x.t;
  j["inventory"] = x.inventory;
  j["history"] = x.history;
  j["history_context"] = x.history_context;
  j["context_window"] = x.context_window;
  return j;
}

State state_from_json(const json& j, const std::string& path) {
  using namespace detail;
  expect_object(j, path, {"t", "inventory", "history", "history_context", "context_window"});
  State x;
  x.t = static_cast<int>(as_int(j["t"], join_path(path, "t")));
  x.inventory = as_vector(j["inventory"], join_path(path, "inventory"));
  x.history = as_matrix(j["history"], join_path(path, "history"));
  x.history_context = as_matrix(j["history_context"], join_path(path, "history_context"));
  x.context_window = as_matrix(j["context_window"], join_path(path, "context_window"));
  return x;
}

struct TrainerState {
  int next_epoch = 0;
  ModelParams params;
  EarlyStopState stop;
  Dataset store;
  std::vector<EpochLog> log;
  bool stopped = false;
};

std::string trainer_to_json(const TrainerState& s, const TrainConfig& config) {
  json j;
  j["schema_version"] = 1;
  j["paradigm"] = to_string(config.paradigm);
  j["seed"] = config.seed;
  j["next_epoch"] = s.next_epoch;
  j["stopped"] = s.stopped;
  j["params"] = detail::params_to_json(s.params);
  j["best"] = detail::params_to_json(s.stop.best);
  j["best_cost"] = s.stop.best_cost;
  j["stale"] = s.stop.stale;
  json log = json::array();
  for (const auto& e : s.log)
    log.push_back({{"epoch", e.epoch},
                   {"dataset_size", e.dataset_size},
                   {"train_fy_loss", e.train_fy_loss},
                   {"validation_cost", e.validation_cost},
                   {"alpha", e.alpha},
                   {"wallclock", e.wallclock}});
  j["log"] = log;
  json store = json::array();
  for (const auto& smp : s.store)
    store.push_back({{"epoch", smp.epoch}, {"target", smp.target.sequence}, {"state", state_to_json(smp.state)}});
  j["store"] = store;
  return j.dump() + "\n";
}

TrainerState trainer_from_json(const std::string& text, const TrainConfig& config) {
  using namespace detail;
  const json j = parse_document(text);
  expect_object(j, "", {"schema_version", "paradigm", "seed", "next_epoch", "stopped", "params", "best", "best_cost",
                        "stale", "log", "store"});
  if (as_int(j["schema_version"], "schema_version") != 1) throw SchemaError("schema_version", "unsupported version");
  if (as_string(j["paradigm"], "paradigm") != to_string(config.paradigm))
    throw SchemaError("paradigm", "trainer state belongs to a different paradigm");
  if (!j["seed"].is_number_unsigned() || j["seed"].get<std::uint64_t>() != config.seed)
    throw SchemaError("seed", "trainer state belongs to a different seed");
  const int P = config.quantiles.P();
  const int H = config.quantiles.horizon;
  TrainerState s;
  s.next_epoch = static_cast<int>(as_int(j["next_epoch"], "next_epoch"));
  s.stopped = as_bool(j["stopped"], "stopped");
  expect_object(j["params"], "params", {"w1", "w2_upper_triangle", "w3", "w4"});
  expect_object(j["best"], "best", {"w1", "w2_upper_triangle", "w3", "w4"});
  s.params = params_from_json(j["params"], "params", P, H);
  s.stop.best = params_from_json(j["best"], "best", P, H);
  s.stop.best_cost = as_double(j["best_cost"], "best_cost");
  s.stop.stale = static_cast<int>(as_int(j["stale"], "stale"));
  const json& log = as_array(j["log"], "log");
  for (std::size_t k = 0; k < log.size(); ++k) {
    const std::string p = index_path("log", k);
    expect_object(log[k], p, {"epoch", "dataset_size", "train_fy_loss", "validation_cost", "alpha", "wallclock"});
    EpochLog e;
    e.epoch = static_cast<int>(as_int(log[k]["epoch"], join_path(p, "epoch")));
    e.dataset_size = static_cast<std::size_t>(as_int(log[k]["dataset_size"], join_path(p, "dataset_size")));
    e.train_fy_loss = as_double(log[k]["train_fy_loss"], join_path(p, "train_fy_loss"));
    e.validation_cost = as_double(log[k]["validation_cost"], join_path(p, "validation_cost"));
    e.alpha = as_double(log[k]["alpha"], join_path(p, "alpha"));
    e.wallclock = as_double(log[k]["wallclock"], join_path(p, "wallclock"));
    s.log.push_back(e);
  }
  const json& store = as_array(j["store"], "store");
  for (std::size_t k = 0; k < store.size(); ++k) {
    const std::string p = index_path("store", k);
    expect_object(store[k], p, {"epoch", "target", "state"});
    TrainingSample smp;
    smp.epoch = static_cast<int>(as_int(store[k]["epoch"], join_path(p, "epoch")));
    const json& tgt = as_array(store[k]["target"], join_path(p, "target"));
    for (std::size_t q = 0; q < tgt.size(); ++q)
      smp.target.sequence.push_back(static_cast<int>(as_int(tgt[q], index_path(join_path(p, "target"), q))));
    smp.state = state_from_json(store[k]["state"], join_path(p, "state"));
    s.store.push_back(std::move(smp));
  }
  return s;
}

int ceil_div(int a, int b) { return (a + b - 1) / b; }

}  // namespace

TrainResult train(const Instance& inst, const Episode& history, const std::vector<Episode>& validation,
                  const TrainConfig& config, const std::optional<std::filesystem::path>& state_path,
                  const std::function<void(const EpochLog&)>& on_epoch) {
  config.validate();
  const TourCostCache cache(inst.gamma);
  FitOptions fit = config.fit;
  fit.jobs = config.jobs;

  TrainerState s;
  if (state_path && std::filesystem::exists(*state_path)) {
    s = trainer_from_json(detail::read_text_file(*state_path), config);
  } else {
    s.params = init_params(config.quantiles, model_features(inst));
    s.stop.best = s.params;
    s.stop.best_cost = validation_cost(inst, cache, history, validation, s.params, config.quantiles, config.jobs);
  }

  const int H = config.quantiles.horizon;
  const int T = config.horizon;
  for (int i = s.next_epoch; i < config.epochs && !s.stopped; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t epoch_seed = derive_seed(config.seed, {static_cast<std::uint64_t>(i)});
    Dataset fresh;
    double alpha = 1.0;  // Baty and sampling follow the expert only
    switch (config.paradigm) {
      case Paradigm::baty:
        fresh = build_dataset_baty(inst, cache, history, config, ceil_div(config.samples_per_epoch, H), i,
                                   derive_seed(epoch_seed, {1}));
        break;
      case Paradigm::sampling:
        fresh = build_dataset_sampling(inst, cache, history, config, config.samples_per_epoch, i,
                                       derive_seed(epoch_seed, {1}));
        break;
      case Paradigm::anticipative_dagger:
      case Paradigm::voting_dagger: {
        alpha = config.alpha(i);
        const int per_state = config.paradigm == Paradigm::voting_dagger ? config.voting : 1;
        const int episodes = ceil_div(ceil_div(config.samples_per_epoch, per_state), T);
        std::vector<Dataset> parts(episodes);
        TrainConfig serial = config;
        serial.jobs = 1;
        detail::parallel_for(episodes, config.jobs, [&](std::size_t e) {
          const Episode ep = sample_episode(inst, T + H - 1, derive_seed(epoch_seed, {2, e}));
          parts[e] = dagger_rollout(inst, cache, history, ep, s.params, serial, alpha, i, derive_seed(epoch_seed, {3, e}));
        });
        for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(fresh));
        break;
      }
    }
    std::move(fresh.begin(), fresh.end(), std::back_inserter(s.store));
    std::erase_if(s.store, [&](const TrainingSample& x) { return i - x.epoch > config.max_age; });
    const Dataset train_set =
        age_dataset(s.store, i, derive_seed(epoch_seed, {4}), config.max_age, config.retain_probability);
    const FitResult fr = fit_params(train_set, inst, cache, s.params, config.quantiles, fit, derive_seed(epoch_seed, {5}));
    s.params = fr.params;
    const double val = validation_cost(inst, cache, history, validation, s.params, config.quantiles, config.jobs);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EpochLog entry{i, train_set.size(), fr.loss, val, alpha, wall};
    s.log.push_back(entry);
    s.stopped = early_stop_check(s.stop, s.params, val, config.patience);
    s.next_epoch = i + 1;
    if (state_path) detail::write_text_file(*state_path, trainer_to_json(s, config));
    if (on_epoch) on_epoch(entry);
  }
  return {s.stop.best, s.stop.best_cost, s.log, s.stopped};
}

TrainResult dagger_train(const Instance& inst, const Episode& history, const std::vector<Episode>& validation,
                         const TrainConfig& config) {
  if (config.paradigm != Paradigm::anticipative_dagger && config.paradigm != Paradigm::voting_dagger)
    throw InvalidInput("dagger_train needs the anticipative_dagger or voting_dagger paradigm");
  return train(inst, history, validation, config);
}

}  // namespace dsirp
