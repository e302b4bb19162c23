// dsirp: generate instances, train ML-CO policies, evaluate policies and
// report end-of-horizon statistics.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsirp/errors.hpp"
#include "dsirp/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> patterns;
  std::vector<std::string> penalties;
  std::vector<std::string> policies;
  std::vector<double> quantiles;
  int n = 0, horizon = 0, lookahead = 0, voting = 0, jobs = 0, episodes = 0, epochs = 0, instances = 0;
  int samples_per_epoch = 0, fit_steps = 0, patience = 0, n_pert = 0;
  double pert_scale = 0.0, step_size = 0.0;
  std::string paradigm, out;
  std::uint64_t seed = 0;
  bool force = false, no_trajectories = false;

  std::string eoh_source = "baty";
  int eoh_episodes = 50;
  std::string eoh_csv;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config file; flags override its values");
  app->add_option("--pattern,--patterns", f.patterns, "demand patterns: normal uniform bimodal contextual");
  app->add_option("--penalty,--penalties", f.penalties, "penalty levels: low high");
  app->add_option("--n", f.n, "customers per instance");
  app->add_option("--horizon", f.horizon, "evaluation periods T");
  app->add_option("--lookahead", f.lookahead, "look-ahead periods H");
  app->add_option("--paradigm", f.paradigm, "baty, sampling, anticipative_dagger or voting_dagger");
  app->add_option("--voting", f.voting, "voting scenarios M");
  app->add_option("--quantiles", f.quantiles, "quantile levels P");
  app->add_option("--seed", f.seed, "base seed");
  app->add_option("--jobs", f.jobs, "worker threads");
  app->add_option("--out", f.out, "output directory");
  app->add_flag("--force", f.force, "overwrite a non-empty output directory");
  app->add_option("--policies", f.policies, "policies to evaluate: mean saa1 saa3 mlco anticipative");
  app->add_option("--episodes", f.episodes, "evaluation episodes per instance");
  app->add_option("--instances", f.instances, "instances per pattern and penalty level");
  app->add_option("--epochs", f.epochs, "training epochs K");
  app->add_option("--samples-per-epoch", f.samples_per_epoch, "training samples added per epoch");
  app->add_option("--fit-steps", f.fit_steps, "optimizer steps per epoch");
  app->add_option("--patience", f.patience, "early-stopping patience in epochs");
  app->add_option("--n-pert", f.n_pert, "perturbation samples per loss evaluation");
  app->add_option("--pert-scale", f.pert_scale, "perturbation standard deviation");
  app->add_option("--step-size", f.step_size, "optimizer step size");
  app->add_flag("--no-trajectories", f.no_trajectories, "skip per-episode trajectory CSVs");
}

dsirp::ExperimentConfig resolve(const CLI::App* app, const Flags& f) {
  dsirp::ExperimentConfig c;
  if (!f.config.empty()) c = dsirp::load_config(f.config);
  auto given = [app](const char* name) { return app->count(name) > 0; };
  if (given("--pattern")) {
    c.patterns.clear();
    for (const auto& s : f.patterns) c.patterns.push_back(dsirp::parse_pattern(s));
  }
  if (given("--penalty")) {
    c.penalties.clear();
    for (const auto& s : f.penalties) c.penalties.push_back(dsirp::parse_penalty(s));
  }
  if (given("--policies")) {
    c.policies.clear();
    for (const auto& s : f.policies) c.policies.push_back(dsirp::parse_policy(s));
  }
  if (given("--quantiles")) c.quantiles = f.quantiles;
  if (given("--n")) c.n = f.n;
  if (given("--horizon")) c.horizon = f.horizon;
  if (given("--lookahead")) c.lookahead = f.lookahead;
  if (given("--paradigm")) c.paradigm = dsirp::parse_paradigm(f.paradigm);
  if (given("--voting")) c.voting = f.voting;
  if (given("--seed")) c.seed = f.seed;
  if (given("--jobs")) c.jobs = f.jobs;
  if (given("--out")) c.out = f.out;
  if (given("--force")) c.force = f.force;
  if (given("--episodes")) c.eval_episodes = f.episodes;
  if (given("--instances")) c.instances_per_pattern = f.instances;
  if (given("--epochs")) c.epochs = f.epochs;
  if (given("--samples-per-epoch")) c.samples_per_epoch = f.samples_per_epoch;
  if (given("--fit-steps")) c.fit_steps = f.fit_steps;
  if (given("--patience")) c.patience = f.patience;
  if (given("--n-pert")) c.n_pert = f.n_pert;
  if (given("--pert-scale")) c.pert_scale = f.pert_scale;
  if (given("--step-size")) c.step_size = f.step_size;
  if (given("--no-trajectories")) c.trajectories = false;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic and stochastic inventory routing experiments"};
  app.require_subcommand(1);
  Flags f;
  auto* generate = app.add_subcommand("generate", "write instances, histories and episodes");
  auto* train = app.add_subcommand("train", "train the ML-CO policy on every instance");
  auto* evaluate = app.add_subcommand("evaluate", "roll out policies and report relative gaps");
  auto* eoh = app.add_subcommand("eoh-report", "per-period visit and delivery statistics");
  for (auto* sub : {generate, train, evaluate, eoh}) add_common(sub, f);
  eoh->add_option("--source", f.eoh_source, "baty (fresh Baty datasets) or trajectories (evaluation output)")
      ->check(CLI::IsMember({"baty", "trajectories"}));
  eoh->add_option("--eoh-episodes", f.eoh_episodes, "Baty episodes per instance");
  eoh->add_option("--csv", f.eoh_csv, "output CSV (default <out>/eoh_report.csv)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (generate->parsed()) {
      const auto m = dsirp::cmd_generate(resolve(generate, f));
      std::cout << "generated " << m.instances.size() << " instances\n";
    } else if (train->parsed()) {
      dsirp::cmd_train(resolve(train, f));
    } else if (evaluate->parsed()) {
      const auto report = dsirp::cmd_evaluate(resolve(evaluate, f));
      std::cout << "pattern,penalty,policy,instances,mean_gap,std_gap,median_decision_seconds\n";
      for (const auto& g : report.summary)
        std::cout << dsirp::to_string(g.pattern) << ',' << dsirp::to_string(g.penalty) << ','
                  << dsirp::to_string(g.policy) << ',' << g.instances << ',' << g.mean_gap << ',' << g.std_gap << ','
                  << g.median_decision_seconds << '\n';
    } else if (eoh->parsed()) {
      const auto cfg = resolve(eoh, f);
      const auto source = f.eoh_source == "baty" ? dsirp::EohSource::baty : dsirp::EohSource::trajectories;
      const std::filesystem::path csv = f.eoh_csv.empty() ? cfg.out / "eoh_report.csv" : std::filesystem::path(f.eoh_csv);
      const auto profile = dsirp::cmd_eoh_report(cfg, source, f.eoh_episodes, csv);
      dsirp::write_eoh_csv(std::cout, profile);
    }
  } catch (const dsirp::SchemaError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
