#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsirp/cpctsp.hpp"
#include "dsirp/det_irp.hpp"
#include "dsirp/instance.hpp"
#include "dsirp/mdp.hpp"
#include "dsirp/prize_model.hpp"

namespace dsirp {

enum class Paradigm { baty, sampling, anticipative_dagger, voting_dagger };
Paradigm parse_paradigm(std::string_view name);
std::string to_string(Paradigm p);

struct TrainingSample {
  State state;
  Tour target;
  int epoch = 0;
};
using Dataset = std::vector<TrainingSample>;

// What the CPCTSP oracle needs besides the prizes.
struct OracleContext {
  Vector quantities;  // C_i - I_i
  double vehicle_capacity = 0.0;
  const TourCostCache* cache = nullptr;
};
OracleContext oracle_context(const Instance& inst, const TourCostCache& cache, const State& state);

struct PerturbationOptions {
  int n_pert = 20;
  double pert_scale = 1.0;  // 0 gives the unperturbed (Z = 0) loss
};

// (1/K) sum_k z(solve(theta + Z_k)) - z(target).
Vector fy_gradient_theta(std::span<const double> theta, const Tour& target, const OracleContext& oracle,
                         const PerturbationOptions& pert, std::uint64_t seed);
// (1/K) sum_k max_u [(theta + Z_k)' z(u) - h(u)] - [theta' z(target) - h(target)].
double fy_loss_estimate(std::span<const double> theta, const Tour& target, const OracleContext& oracle,
                        const PerturbationOptions& pert, std::uint64_t seed);

struct FitOptions {
  int steps = 100;
  int batch_size = 32;
  double step_size = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  PerturbationOptions perturbation{};
  int jobs = 1;
};

struct FitResult {
  ModelParams params;
  double loss = 0.0;  // mean FY loss of the returned parameters on the dataset
  int steps = 0;
};

// Mean FY loss over the dataset with a fixed perturbation stream.
double dataset_loss(const Dataset& data, const Instance& inst, const TourCostCache& cache, const ModelParams& params,
                    const QuantileConfig& config, const PerturbationOptions& pert, std::uint64_t seed, int jobs = 1);

// Adam on the mean mini-batch FY loss. Returns the parameters with the
// lowest full-dataset loss seen at the start and after every pass.
FitResult fit_params(const Dataset& data, const Instance& inst, const TourCostCache& cache,
                     const ModelParams& params0, const QuantileConfig& config, const FitOptions& options,
                     std::uint64_t seed);

struct TrainConfig {
  Paradigm paradigm = Paradigm::voting_dagger;
  int epochs = 10;
  // Per-epoch mixture weights; empty means max(0, 1 - i / (epochs / 2)).
  std::vector<double> alpha_schedule;
  int voting = 5;
  int horizon = 6;  // T of the training episodes
  QuantileConfig quantiles{};
  FitOptions fit{};
  int patience = 3;
  int samples_per_epoch = 110;
  int max_age = 10;
  double retain_probability = 0.5;
  LocalSearchOptions search{};
  std::uint64_t seed = 0;
  int jobs = 1;

  double alpha(int epoch) const;
  void validate() const;
};

// Sampled initial state: uniform inventories on [0, C_i], the given
// history, and the episode's context window.
State sampled_state(const Instance& inst, const Episode& history, const Episode& episode, Rng& rng);

// Every (state, decision) pair along the anticipative plan of each sampled
// episode (H pairs per episode).
Dataset build_dataset_baty(const Instance& inst, const TourCostCache& cache, const Episode& history,
                           const TrainConfig& config, int episodes, int epoch, std::uint64_t seed);
// Only the first pair of each anticipative solve.
Dataset build_dataset_sampling(const Instance& inst, const TourCostCache& cache, const Episode& history,
                               const TrainConfig& config, int solves, int epoch, std::uint64_t seed);

// Bootstrap demand trajectory of `periods` periods from the state's history.
Matrix bootstrap_trajectory(const Instance& inst, const State& state, int periods, Rng& rng);

// One DAgger pass over `episode`: at every visited state the anticipative
// targets are recorded; with probability alpha the expert's decision is
// applied, otherwise the learned policy's.
Dataset dagger_rollout(const Instance& inst, const TourCostCache& cache, const Episode& history,
                       const Episode& episode, const ModelParams& params, const TrainConfig& config, double alpha,
                       int epoch, std::uint64_t seed);

// Keeps the current epoch, drops samples older than max_age epochs, and
// keeps each remaining past sample with probability retain_probability.
Dataset age_dataset(const Dataset& data, int current_epoch, std::uint64_t seed, int max_age = 10,
                    double retain_probability = 0.5);

struct EarlyStopState {
  ModelParams best;
  double best_cost = 0.0;
  int stale = 0;
};

// Sum over the validation episodes of the learned policy's rollout cost.
double validation_cost(const Instance& inst, const TourCostCache& cache, const Episode& history,
                       const std::vector<Episode>& validation, const ModelParams& params,
                       const QuantileConfig& config, int jobs = 1);

// Updates the best parameters on strict improvement; returns true when the
// patience budget is exhausted.
bool early_stop_check(EarlyStopState& state, const ModelParams& params, double cost, int patience);

struct EpochLog {
  int epoch = 0;
  std::size_t dataset_size = 0;
  double train_fy_loss = 0.0;
  double validation_cost = 0.0;
  double alpha = 0.0;
  double wallclock = 0.0;
};

struct TrainResult {
  ModelParams best;
  double best_validation = 0.0;
  std::vector<EpochLog> log;
  bool early_stopped = false;
};

// Full training loop for every paradigm. With a checkpoint path the trainer
// state is written after each epoch and an existing file is resumed from.
TrainResult train(const Instance& inst, const Episode& history, const std::vector<Episode>& validation,
                  const TrainConfig& config, const std::optional<std::filesystem::path>& state_path = std::nullopt,
                  const std::function<void(const EpochLog&)>& on_epoch = {});

TrainResult dagger_train(const Instance& inst, const Episode& history, const std::vector<Episode>& validation,
                         const TrainConfig& config);

}  // namespace dsirp
