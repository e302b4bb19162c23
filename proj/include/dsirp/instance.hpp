#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dsirp/rng.hpp"

namespace dsirp {

using Vector = std::vector<double>;
using Matrix = std::vector<std::vector<double>>;
using FeatureVector = std::vector<double>;

enum class DemandPattern { normal, uniform, bimodal, contextual };
enum class Penalty { low, high };

DemandPattern parse_pattern(std::string_view name);
std::string to_string(DemandPattern p);
Penalty parse_penalty(std::string_view name);
std::string to_string(Penalty p);
double penalty_multiplier(Penalty p);

// Per-customer demand laws. Normal and bimodal components are truncated
// to [0, C_i]; contextual draws are clamped to [0, C_i].
struct NormalDemand {
  double mu = 0.0;
  double sigma = 1.0;
  bool operator==(const NormalDemand&) const = default;
};

struct UniformDemand {
  double upper = 0.0;
  bool operator==(const UniformDemand&) const = default;
};

struct BimodalDemand {
  double mu1 = 0.0;
  double sigma1 = 1.0;
  double mu2 = 0.0;
  double sigma2 = 1.0;
  double mix = 0.5;  // probability of drawing from the first component
  bool operator==(const BimodalDemand&) const = default;
};

struct ContextualDemand {
  double mu = 0.0;
  double noise_sigma = 1.0;
  bool operator==(const ContextualDemand&) const = default;
};

using DemandSpec = std::variant<NormalDemand, UniformDemand, BimodalDemand, ContextualDemand>;

// Mean used to size capacities: mu, (mu1 + mu2) / 2, or the midpoint of
// the uniform support.
double demand_proxy_mean(const DemandSpec& spec);

inline constexpr int kNumFeatures = 8;

enum class FeatureDist { arcsin, uniform, truncated_normal };
std::string to_string(FeatureDist d);
FeatureDist parse_feature_dist(std::string_view name);

struct ContextSpec {
  int n_features = kNumFeatures;
  std::vector<bool> informative;
  std::vector<FeatureDist> dist;
  std::vector<double> scale;
  std::vector<double> alpha_lin;
  Matrix alpha_pair;  // symmetric, zero diagonal; only n < m entries are used

  int informative_count() const;
  bool operator==(const ContextSpec&) const = default;
};

struct Instance {
  std::string id;
  int n = 0;
  std::vector<std::array<int, 2>> coords;  // vertex 0 is the depot
  Matrix gamma;
  Vector capacity;
  Vector initial_inventory;
  Vector holding_cost;
  double rho = 200.0;
  double vehicle_capacity = 0.0;
  std::vector<DemandSpec> demand;
  std::optional<ContextSpec> context;

  bool contextual() const { return context.has_value(); }
  bool operator==(const Instance&) const = default;
};

// A realisation of the exogenous noise. demand is n x T (customer-major).
// context holds one feature vector per period; it may extend past T so
// that states near the end of the episode still see a full look-ahead
// window of features.
struct Episode {
  int T = 0;
  Matrix demand;
  std::vector<FeatureVector> context;

  bool contextual() const { return !context.empty(); }
  Vector demand_at(int t) const;
  bool operator==(const Episode&) const = default;
};

struct GeneratorOptions {
  double bimodal_mix = 0.5;
  // Feature scales are sqrt(k) with k uniform on {scale_k_min..scale_k_max}.
  int scale_k_min = 10;
  int scale_k_max = 100;
};

// Extra context periods sampled past T by default (supports look-ahead up
// to kDefaultContextExtra + 1 periods at the last decision epoch).
inline constexpr int kDefaultContextExtra = 9;
inline constexpr int kDefaultHistoryLength = 50;

Instance generate_instance(DemandPattern pattern, int n, Penalty penalty, std::uint64_t seed,
                           const GeneratorOptions& options = {});

FeatureVector sample_features(const ContextSpec& ctx, Rng& rng);

// Draws one demand for a customer with capacity cap. features and ctx must
// be provided exactly when spec is contextual.
double sample_demand(const DemandSpec& spec, double cap, const FeatureVector* features,
                     const ContextSpec* ctx, Rng& rng);

// Clamped linear-plus-pairwise contextual demand for a given noise value.
double contextual_demand_value(const ContextualDemand& spec, double cap, const FeatureVector& features,
                               const ContextSpec& ctx, double noise);

Episode sample_episode(const Instance& inst, int T, std::uint64_t seed,
                       int context_extra = kDefaultContextExtra);

// History of len observations, oldest first, same law as sample_episode.
Episode sample_history(const Instance& inst, int len, std::uint64_t seed);

void validate_instance(const Instance& inst);

// Strict JSON persistence: unknown or missing fields raise SchemaError
// naming the field path. Loads never return partially filled objects.
void save_instance(const Instance& inst, const std::filesystem::path& path);
Instance load_instance(const std::filesystem::path& path);
void save_episode(const Episode& ep, const std::filesystem::path& path);
Episode load_episode(const std::filesystem::path& path);

std::string instance_to_json(const Instance& inst);
Instance instance_from_json(const std::string& text);
std::string episode_to_json(const Episode& ep);
Episode episode_from_json(const std::string& text);

}  // namespace dsirp
