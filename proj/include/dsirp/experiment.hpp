#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dsirp/imitation.hpp"
#include "dsirp/instance.hpp"
#include "dsirp/policies.hpp"

namespace dsirp {

struct ExperimentConfig {
  std::vector<DemandPattern> patterns{DemandPattern::normal, DemandPattern::uniform, DemandPattern::bimodal,
                                      DemandPattern::contextual};
  std::vector<Penalty> penalties{Penalty::low, Penalty::high};
  int instances_per_pattern = 10;
  int n = 10;
  int horizon = 10;  // evaluation periods T
  int lookahead = 6;
  Paradigm paradigm = Paradigm::voting_dagger;
  int voting = 5;
  std::vector<double> quantiles{0.1, 0.25, 0.5, 0.75, 0.9};
  std::uint64_t seed = 0;
  int jobs = 1;
  std::filesystem::path out = "runs";
  bool force = false;

  std::vector<PolicyKind> policies{PolicyKind::mean, PolicyKind::saa1, PolicyKind::saa3, PolicyKind::mlco};
  int eval_episodes = 10;
  int epochs = 10;
  int samples_per_epoch = 110;
  int fit_steps = 100;
  int patience = 3;
  int n_pert = 20;
  double pert_scale = 1.0;
  double step_size = 1e-2;
  bool trajectories = true;

  void validate() const;
  // Training settings implied by this configuration.
  TrainConfig train_config() const;
};

inline constexpr int kValidationEpisodes = 5;

// Strict JSON config: keys mirror the CLI flags (patterns, penalties, n,
// horizon, lookahead, paradigm, voting, quantiles, seed, jobs, out, force,
// policies, episodes, epochs, ...). Unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});

struct InstanceEntry {
  std::string id;
  DemandPattern pattern = DemandPattern::normal;
  Penalty penalty = Penalty::low;
  std::uint64_t seed = 0;
};

struct Manifest {
  std::uint64_t seed = 0;
  int n = 0;
  int horizon = 0;
  int eval_episodes = 0;
  int instances_per_pattern = 0;
  std::vector<InstanceEntry> instances;
};

Manifest load_manifest(const std::filesystem::path& out);
std::filesystem::path instance_dir(const std::filesystem::path& out, const std::string& id);
std::filesystem::path checkpoint_dir(const std::filesystem::path& out, Paradigm paradigm, int lookahead);

// Writes instances, histories, validation and evaluation episodes and the
// manifest. Refuses a non-empty output directory unless force is set.
Manifest cmd_generate(const ExperimentConfig& config);

// Trains the configured paradigm on every instance in the manifest
// (optionally filtered by the config's patterns and penalties). Resumes
// from per-instance trainer state files.
void cmd_train(const ExperimentConfig& config);

struct EvalRow {
  std::string instance;
  DemandPattern pattern = DemandPattern::normal;
  Penalty penalty = Penalty::low;
  PolicyKind policy = PolicyKind::mean;
  int episode = 0;
  double cost = 0.0;
  double anticipative = 0.0;
  double gap = 0.0;
};

struct InstanceSummary {
  std::string instance;
  DemandPattern pattern = DemandPattern::normal;
  Penalty penalty = Penalty::low;
  PolicyKind policy = PolicyKind::mean;
  int episodes = 0;
  double mean_gap = 0.0;
};

struct GroupSummary {
  DemandPattern pattern = DemandPattern::normal;
  Penalty penalty = Penalty::low;
  PolicyKind policy = PolicyKind::mean;
  int instances = 0;
  double mean_gap = 0.0;
  double std_gap = 0.0;
  double median_decision_seconds = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> episodes;
  std::vector<InstanceSummary> per_instance;
  std::vector<GroupSummary> summary;
};

// Per-instance means and group mean / sample standard deviation over
// instances, in first-appearance order.
std::vector<InstanceSummary> summarize_instances(const std::vector<EvalRow>& rows);
std::vector<GroupSummary> summarize_groups(const std::vector<InstanceSummary>& rows);

EvalReport cmd_evaluate(const ExperimentConfig& config);
// Reads eval_per_instance.csv and eval_summary.csv and checks that the
// aggregates equal their recomputation from the per-instance rows.
EvalReport load_eval_report(const std::filesystem::path& dir);

struct PeriodProfile {
  int period = 0;
  std::size_t samples = 0;
  double mean_visits = 0.0;
  double mean_delivered = 0.0;
};

// One record per (sequence, relative period): visited-customer count and
// delivered quantity.
struct PeriodRecord {
  int visits = 0;
  double delivered = 0.0;
};
std::vector<PeriodProfile> eoh_profile(const std::vector<std::vector<PeriodRecord>>& sequences);
// Consecutive groups of `periods` samples of a Baty dataset.
std::vector<std::vector<PeriodRecord>> dataset_sequences(const Instance& inst, const Dataset& data, int periods);
// All trajectory CSVs below a directory, one sequence per file.
std::vector<std::vector<PeriodRecord>> trajectory_sequences(const std::filesystem::path& dir);
void write_eoh_csv(std::ostream& out, const std::vector<PeriodProfile>& profile);

enum class EohSource { baty, trajectories };
// Baty source: builds Baty datasets (episodes per instance) on the
// generated instances; trajectories source: reads evaluation trajectories.
std::vector<PeriodProfile> cmd_eoh_report(const ExperimentConfig& config, EohSource source, int episodes,
                                          const std::filesystem::path& csv_path);

}  // namespace dsirp
