#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "dsirp/instance.hpp"
#include "dsirp/mdp.hpp"

namespace dsirp {

struct QuantileConfig {
  std::vector<double> levels{0.1, 0.25, 0.5, 0.75, 0.9};
  int horizon = 6;

  int P() const { return static_cast<int>(levels.size()); }
  void validate() const;
  bool operator==(const QuantileConfig&) const = default;
};

// w2 is symmetric with a zero diagonal and is stored as its strict upper
// triangle, row-major over pairs (a, b) with a < b.
struct ModelParams {
  Vector w1;
  Vector w2_upper;
  Matrix w3;  // horizon x |P|
  Matrix w4;  // horizon x |P|

  int n_features() const { return static_cast<int>(w1.size()); }
  double w2(int a, int b) const;
  Matrix w2_full() const;

  std::size_t size() const;
  Vector flatten() const;
  // Inverse of flatten for a parameter record of the same shape.
  void assign(std::span<const double> flat);
  bool same_shape(const ModelParams& other) const;
  bool all_finite() const;
  bool operator==(const ModelParams&) const = default;
};

std::size_t pair_index(int a, int b, int n_features);

// w1 = w2 = 0, w3 = -1/(|P||H|), w4 = +1/(|P||H|). n_features is 0 for
// non-contextual instances.
ModelParams init_params(const QuantileConfig& config, int n_features);
int model_features(const Instance& inst);

// inf{d in history : F(d) >= p} under the empirical CDF F.
double empirical_quantile(std::span<const double> history, double p);

// ReLU(q + w1.phi + phi' W2 phi); ReLU(q) without features.
double phi1(double q, const FeatureVector* features, const ModelParams& params);

// Everything the prize layers read from a state, precomputed once.
struct PrizeInput {
  Matrix quantiles;  // n x |P|
  std::vector<FeatureVector> features;  // horizon entries, empty when non-contextual
  Vector inventory;
  Vector holding_cost;
  double rho = 0.0;
};

PrizeInput make_prize_input(const State& state, const Instance& inst, const QuantileConfig& config);

Vector prize_forward(const PrizeInput& input, const ModelParams& params);
Vector prize_forward(const State& state, const Instance& inst, const ModelParams& params,
                     const QuantileConfig& config);

// Gradient of theta' dtheta with respect to every parameter.
ModelParams prize_backward(const PrizeInput& input, const ModelParams& params, std::span<const double> dtheta);
ModelParams prize_backward(const State& state, const Instance& inst, const ModelParams& params,
                           const QuantileConfig& config, std::span<const double> dtheta);

// Checkpoint JSON {w1, w2_upper_triangle, w3, w4, P, H, schema_version}.
inline constexpr int kCheckpointSchemaVersion = 1;
struct Checkpoint {
  ModelParams params;
  QuantileConfig config;
};
std::string checkpoint_to_json(const ModelParams& params, const QuantileConfig& config);
Checkpoint checkpoint_from_json(const std::string& text);
void save_checkpoint(const ModelParams& params, const QuantileConfig& config, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace dsirp
