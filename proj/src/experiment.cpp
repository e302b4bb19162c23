#include "dsirp/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dsirp/errors.hpp"
#include "format_util.hpp"
#include "json_util.hpp"
#include "parallel.hpp"

namespace fs = std::filesystem;

namespace dsirp {

using detail::fmt_double;
using detail::json;

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (patterns.empty()) throw InvalidInput("at least one demand pattern is required");
  if (penalties.empty()) throw InvalidInput("at least one penalty level is required");
  if (instances_per_pattern < 1) throw InvalidInput("instances_per_pattern must be at least 1");
  if (n < 1 || n > kMaxHeldKarpCustomers) throw InvalidInput("n must lie in 1.." + std::to_string(kMaxHeldKarpCustomers));
  if (horizon < 1) throw InvalidInput("horizon must be at least 1");
  if (lookahead < 1 || lookahead > kDefaultContextExtra + 1)
    throw InvalidInput("lookahead must lie in 1.." + std::to_string(kDefaultContextExtra + 1));
  if (voting < 1) throw InvalidInput("voting must be at least 1");
  if (eval_episodes < 1) throw InvalidInput("episodes must be at least 1");
  if (jobs < 1) throw InvalidInput("jobs must be at least 1");
  if (policies.empty()) throw InvalidInput("at least one policy is required");
  train_config().validate();
}

TrainConfig ExperimentConfig::train_config() const {
  TrainConfig t;
  t.paradigm = paradigm;
  t.epochs = epochs;
  t.voting = voting;
  t.horizon = horizon;
  t.quantiles.levels = quantiles;
  t.quantiles.horizon = lookahead;
  t.fit.steps = fit_steps;
  t.fit.step_size = step_size;
  t.fit.perturbation.n_pert = n_pert;
  t.fit.perturbation.pert_scale = pert_scale;
  t.patience = patience;
  t.samples_per_epoch = samples_per_epoch;
  t.seed = seed;
  t.jobs = jobs;
  return t;
}

ExperimentConfig config_from_json(const std::string& text, ExperimentConfig c) {
  using namespace detail;
  const json j = parse_document(text);
  expect_object(j, "", {},
                {"patterns", "penalties", "instances_per_pattern", "n", "horizon", "lookahead", "paradigm", "voting",
                 "quantiles", "seed", "jobs", "out", "force", "policies", "episodes", "epochs", "samples_per_epoch",
                 "fit_steps", "patience", "n_pert", "pert_scale", "step_size", "trajectories"});
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    const json& a = as_array(j[key], key);
    for (std::size_t k = 0; k < a.size(); ++k) out.push_back(as_string(a[k], index_path(key, k)));
    return out;
  };
  auto integer = [&](const char* key) { return static_cast<int>(as_int(j[key], key)); };
  try {
    if (j.contains("patterns")) {
      c.patterns.clear();
      for (const auto& s : strings("patterns")) c.patterns.push_back(parse_pattern(s));
    }
    if (j.contains("penalties")) {
      c.penalties.clear();
      for (const auto& s : strings("penalties")) c.penalties.push_back(parse_penalty(s));
    }
    if (j.contains("policies")) {
      c.policies.clear();
      for (const auto& s : strings("policies")) c.policies.push_back(parse_policy(s));
    }
    if (j.contains("paradigm")) c.paradigm = parse_paradigm(as_string(j["paradigm"], "paradigm"));
  } catch (const InvalidInput& e) {
    throw SchemaError("$", e.what());
  }
  if (j.contains("instances_per_pattern")) c.instances_per_pattern = integer("instances_per_pattern");
  if (j.contains("n")) c.n = integer("n");
  if (j.contains("horizon")) c.horizon = integer("horizon");
  if (j.contains("lookahead")) c.lookahead = integer("lookahead");
  if (j.contains("voting")) c.voting = integer("voting");
  if (j.contains("quantiles")) c.quantiles = as_vector(j["quantiles"], "quantiles");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SchemaError("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("jobs")) c.jobs = integer("jobs");
  if (j.contains("out")) c.out = as_string(j["out"], "out");
  if (j.contains("force")) c.force = as_bool(j["force"], "force");
  if (j.contains("episodes")) c.eval_episodes = integer("episodes");
  if (j.contains("epochs")) c.epochs = integer("epochs");
  if (j.contains("samples_per_epoch")) c.samples_per_epoch = integer("samples_per_epoch");
  if (j.contains("fit_steps")) c.fit_steps = integer("fit_steps");
  if (j.contains("patience")) c.patience = integer("patience");
  if (j.contains("n_pert")) c.n_pert = integer("n_pert");
  if (j.contains("pert_scale")) c.pert_scale = as_double(j["pert_scale"], "pert_scale");
  if (j.contains("step_size")) c.step_size = as_double(j["step_size"], "step_size");
  if (j.contains("trajectories")) c.trajectories = as_bool(j["trajectories"], "trajectories");
  return c;
}

ExperimentConfig load_config(const fs::path& path, ExperimentConfig base) {
  return config_from_json(detail::read_text_file(path), std::move(base));
}

// ---------------------------------------------------------------------------
// Layout

fs::path instance_dir(const fs::path& out, const std::string& id) { return out / "instances" / id; }

fs::path checkpoint_dir(const fs::path& out, Paradigm paradigm, int lookahead) {
  return out / "checkpoints" / (to_string(paradigm) + "_H" + std::to_string(lookahead));
}

namespace {

std::string two_digits(int k) {
  std::string s = std::to_string(k);
  return s.size() < 2 ? "0" + s : s;
}

std::string three_digits(int k) {
  std::string s = std::to_string(k);
  while (s.size() < 3) s = "0" + s;
  return s;
}

fs::path history_file(const fs::path& out, const std::string& id) { return instance_dir(out, id) / "history.json"; }
fs::path validation_file(const fs::path& out, const std::string& id, int j) {
  return instance_dir(out, id) / ("validation_" + std::to_string(j) + ".json");
}
fs::path eval_file(const fs::path& out, const std::string& id, int e) {
  return instance_dir(out, id) / ("eval_" + three_digits(e) + ".json");
}

std::string manifest_to_json(const Manifest& m) {
  json j;
  j["schema_version"] = 1;
  j["seed"] = m.seed;
  j["n"] = m.n;
  j["horizon"] = m.horizon;
  j["eval_episodes"] = m.eval_episodes;
  j["validation_episodes"] = kValidationEpisodes;
  j["history_length"] = kDefaultHistoryLength;
  j["instances_per_pattern"] = m.instances_per_pattern;
  json list = json::array();
  for (const auto& e : m.instances)
    list.push_back({{"id", e.id}, {"pattern", to_string(e.pattern)}, {"penalty", to_string(e.penalty)}, {"seed", e.seed}});
  j["instances"] = list;
  return j.dump(1) + "\n";
}

bool selected(const ExperimentConfig& c, const InstanceEntry& e) {
  return std::find(c.patterns.begin(), c.patterns.end(), e.pattern) != c.patterns.end() &&
         std::find(c.penalties.begin(), c.penalties.end(), e.penalty) != c.penalties.end();
}

std::vector<InstanceEntry> selection(const ExperimentConfig& c, const Manifest& m) {
  std::vector<InstanceEntry> out;
  for (const auto& e : m.instances)
    if (selected(c, e)) out.push_back(e);
  return out;
}

void require_files(const std::vector<fs::path>& paths) {
  std::vector<std::string> missing;
  for (const auto& p : paths)
    if (!fs::exists(p)) missing.push_back(p.string());
  if (missing.empty()) return;
  std::string msg = "missing files:";
  for (const auto& m : missing) msg += "\n  " + m;
  throw InvalidInput(msg);
}

void write_file(const fs::path& path, const std::string& text) { detail::write_text_file(path, text); }

}  // namespace

Manifest load_manifest(const fs::path& out) {
  using namespace detail;
  const fs::path path = out / "manifest.json";
  require_files({path});
  const json j = parse_document(read_text_file(path));
  expect_object(j, "", {"schema_version", "seed", "n", "horizon", "eval_episodes", "validation_episodes",
                        "history_length", "instances_per_pattern", "instances"});
  if (as_int(j["schema_version"], "schema_version") != 1) throw SchemaError("schema_version", "unsupported version");
  Manifest m;
  if (!j["seed"].is_number_unsigned()) throw SchemaError("seed", "expected a non-negative integer");
  m.seed = j["seed"].get<std::uint64_t>();
  m.n = static_cast<int>(as_int(j["n"], "n"));
  m.horizon = static_cast<int>(as_int(j["horizon"], "horizon"));
  m.eval_episodes = static_cast<int>(as_int(j["eval_episodes"], "eval_episodes"));
  m.instances_per_pattern = static_cast<int>(as_int(j["instances_per_pattern"], "instances_per_pattern"));
  if (as_int(j["validation_episodes"], "validation_episodes") != kValidationEpisodes)
    throw SchemaError("validation_episodes", "expected " + std::to_string(kValidationEpisodes));
  const json& list = as_array(j["instances"], "instances");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string p = index_path("instances", k);
    expect_object(list[k], p, {"id", "pattern", "penalty", "seed"});
    InstanceEntry e;
    e.id = as_string(list[k]["id"], join_path(p, "id"));
    try {
      e.pattern = parse_pattern(as_string(list[k]["pattern"], join_path(p, "pattern")));
      e.penalty = parse_penalty(as_string(list[k]["penalty"], join_path(p, "penalty")));
    } catch (const InvalidInput& err) {
      throw SchemaError(p, err.what());
    }
    if (!list[k]["seed"].is_number_unsigned()) throw SchemaError(join_path(p, "seed"), "expected a non-negative integer");
    e.seed = list[k]["seed"].get<std::uint64_t>();
    m.instances.push_back(e);
  }
  return m;
}

// ---------------------------------------------------------------------------
// generate

Manifest cmd_generate(const ExperimentConfig& config) {
  config.validate();
  const fs::path& out = config.out;
  if (fs::exists(out) && !fs::is_empty(out)) {
    if (!config.force)
      throw InvalidInput("output directory " + out.string() + " is not empty; pass --force to overwrite");
    fs::remove(out / "manifest.json");
    fs::remove_all(out / "instances");
  }
  Manifest m;
  m.seed = config.seed;
  m.n = config.n;
  m.horizon = config.horizon;
  m.eval_episodes = config.eval_episodes;
  m.instances_per_pattern = config.instances_per_pattern;
  for (auto pattern : config.patterns)
    for (auto penalty : config.penalties)
      for (int k = 0; k < config.instances_per_pattern; ++k) {
        InstanceEntry e;
        e.id = to_string(pattern) + "_" + to_string(penalty) + "_" + two_digits(k);
        e.pattern = pattern;
        e.penalty = penalty;
        e.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(pattern), static_cast<std::uint64_t>(penalty),
                                           static_cast<std::uint64_t>(k)});
        m.instances.push_back(e);
      }
  detail::parallel_for(m.instances.size(), config.jobs, [&](std::size_t k) {
    const InstanceEntry& e = m.instances[k];
    Instance inst = generate_instance(e.pattern, config.n, e.penalty, e.seed);
    inst.id = e.id;
    save_instance(inst, instance_dir(out, e.id) / "instance.json");
    save_episode(sample_history(inst, kDefaultHistoryLength, derive_seed(e.seed, {1})), history_file(out, e.id));
    for (int j = 0; j < kValidationEpisodes; ++j)
      save_episode(sample_episode(inst, config.horizon, derive_seed(e.seed, {2, static_cast<std::uint64_t>(j)})),
                   validation_file(out, e.id, j));
    for (int ep = 0; ep < config.eval_episodes; ++ep)
      save_episode(sample_episode(inst, config.horizon, derive_seed(e.seed, {3, static_cast<std::uint64_t>(ep)})),
                   eval_file(out, e.id, ep));
  });
  write_file(out / "manifest.json", manifest_to_json(m));
  return m;
}

// ---------------------------------------------------------------------------
// train

namespace {

struct InstanceData {
  Instance inst;
  Episode history;
  std::vector<Episode> validation;
  std::vector<Episode> evaluation;
};

InstanceData load_instance_data(const fs::path& out, const InstanceEntry& e, int eval_episodes) {
  std::vector<fs::path> needed{instance_dir(out, e.id) / "instance.json", history_file(out, e.id)};
  for (int j = 0; j < kValidationEpisodes; ++j) needed.push_back(validation_file(out, e.id, j));
  for (int k = 0; k < eval_episodes; ++k) needed.push_back(eval_file(out, e.id, k));
  require_files(needed);
  InstanceData d;
  d.inst = load_instance(needed[0]);
  d.history = load_episode(needed[1]);
  for (int j = 0; j < kValidationEpisodes; ++j) d.validation.push_back(load_episode(needed[2 + j]));
  for (int k = 0; k < eval_episodes; ++k) d.evaluation.push_back(load_episode(needed[2 + kValidationEpisodes + k]));
  return d;
}

}  // namespace

void cmd_train(const ExperimentConfig& config) {
  config.validate();
  const Manifest m = load_manifest(config.out);
  const auto entries = selection(config, m);
  std::vector<fs::path> needed;
  for (const auto& e : entries) {
    needed.push_back(instance_dir(config.out, e.id) / "instance.json");
    needed.push_back(history_file(config.out, e.id));
    for (int j = 0; j < kValidationEpisodes; ++j) needed.push_back(validation_file(config.out, e.id, j));
  }
  require_files(needed);

  const fs::path dir = checkpoint_dir(config.out, config.paradigm, config.lookahead);
  fs::create_directories(dir);
  std::vector<TrainResult> results(entries.size());
  // Instances run one after another; each trainer parallelises internally.
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    const InstanceData d = load_instance_data(config.out, e, 0);
    TrainConfig tc = config.train_config();
    tc.seed = derive_seed(e.seed, {0x7A1});
    results[k] = train(d.inst, d.history, d.validation, tc, dir / (e.id + ".state.json"));
    save_checkpoint(results[k].best, tc.quantiles, dir / (e.id + ".json"));
  }

  std::ostringstream log, timing;
  log << "instance,epoch,dataset_size,train_fy_loss,validation_cost,alpha\n";
  timing << "instance,epoch,wallclock_seconds\n";
  for (std::size_t k = 0; k < entries.size(); ++k)
    for (const auto& row : results[k].log) {
      log << entries[k].id << ',' << row.epoch << ',' << row.dataset_size << ',' << fmt_double(row.train_fy_loss) << ','
          << fmt_double(row.validation_cost) << ',' << fmt_double(row.alpha) << '\n';
      timing << entries[k].id << ',' << row.epoch << ',' << fmt_double(row.wallclock) << '\n';
    }
  write_file(dir / "train_log.csv", log.str());
  write_file(dir / "train_timing.csv", timing.str());
}

// ---------------------------------------------------------------------------
// evaluate

std::vector<InstanceSummary> summarize_instances(const std::vector<EvalRow>& rows) {
  std::vector<InstanceSummary> out;
  std::map<std::pair<std::string, PolicyKind>, std::size_t> index;
  std::vector<double> sums;
  for (const auto& r : rows) {
    auto [it, fresh] = index.try_emplace({r.instance, r.policy}, out.size());
    if (fresh) {
      out.push_back({r.instance, r.pattern, r.penalty, r.policy, 0, 0.0});
      sums.push_back(0.0);
    }
    sums[it->second] += r.gap;
    ++out[it->second].episodes;
  }
  for (std::size_t k = 0; k < out.size(); ++k) out[k].mean_gap = sums[k] / out[k].episodes;
  return out;
}

std::vector<GroupSummary> summarize_groups(const std::vector<InstanceSummary>& rows) {
  std::vector<GroupSummary> out;
  std::vector<std::vector<double>> gaps;
  std::map<std::tuple<DemandPattern, Penalty, PolicyKind>, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, fresh] = index.try_emplace({r.pattern, r.penalty, r.policy}, out.size());
    if (fresh) {
      GroupSummary g;
      g.pattern = r.pattern;
      g.penalty = r.penalty;
      g.policy = r.policy;
      out.push_back(g);
      gaps.emplace_back();
    }
    gaps[it->second].push_back(r.mean_gap);
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& g = gaps[k];
    double s = 0.0;
    for (double x : g) s += x;
    const double mean = s / static_cast<double>(g.size());
    double ss = 0.0;
    for (double x : g) ss += (x - mean) * (x - mean);
    out[k].instances = static_cast<int>(g.size());
    out[k].mean_gap = mean;
    out[k].std_gap = g.size() > 1 ? std::sqrt(ss / static_cast<double>(g.size() - 1)) : 0.0;
  }
  return out;
}

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct InstanceEval {
  std::vector<EvalRow> rows;
  std::map<PolicyKind, std::vector<double>> decision_seconds;
};

}  // namespace

EvalReport cmd_evaluate(const ExperimentConfig& config) {
  config.validate();
  const Manifest m = load_manifest(config.out);
  if (m.eval_episodes < config.eval_episodes)
    throw InvalidInput("manifest holds only " + std::to_string(m.eval_episodes) + " evaluation episodes");
  const auto entries = selection(config, m);
  const bool needs_model =
      std::find(config.policies.begin(), config.policies.end(), PolicyKind::mlco) != config.policies.end();
  const fs::path ckpt_dir = checkpoint_dir(config.out, config.paradigm, config.lookahead);
  if (needs_model) {
    std::vector<fs::path> ckpts;
    for (const auto& e : entries) ckpts.push_back(ckpt_dir / (e.id + ".json"));
    require_files(ckpts);
  }

  const fs::path eval_dir = config.out / "eval" / (to_string(config.paradigm) + "_H" + std::to_string(config.lookahead));
  std::vector<InstanceEval> parts(entries.size());
  detail::parallel_for(entries.size(), config.jobs, [&](std::size_t k) {
    const auto& e = entries[k];
    const InstanceData d = load_instance_data(config.out, e, config.eval_episodes);
    const TourCostCache cache(d.inst.gamma);
    std::vector<double> baseline(d.evaluation.size());
    for (std::size_t ep = 0; ep < d.evaluation.size(); ++ep) {
      const State x0 = initial_state(d.inst, d.history, d.evaluation[ep]);
      LocalSearchOptions ls{derive_seed(e.seed, {0xA17, ep}), 50000, 10};
      baseline[ep] = anticipative_baseline(d.inst, cache, d.evaluation[ep], x0, ls).total;
    }
    for (PolicyKind kind : config.policies) {
      PolicySpec spec;
      spec.kind = kind;
      spec.lookahead.lookahead = config.lookahead;
      if (kind == PolicyKind::mlco) {
        const Checkpoint c = load_checkpoint(ckpt_dir / (e.id + ".json"));
        spec.params = c.params;
        spec.quantiles = c.config;
      }
      for (std::size_t ep = 0; ep < d.evaluation.size(); ++ep) {
        const Episode& episode = d.evaluation[ep];
        const Policy inner = make_policy(spec, d.inst, cache, &episode);
        auto& times = parts[k].decision_seconds[kind];
        const Policy timed = [&](const State& x) {
          const auto t0 = std::chrono::steady_clock::now();
          Tour tour = inner(x);
          times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
          return tour;
        };
        const RolloutResult r = rollout(d.inst, timed, episode, initial_state(d.inst, d.history, episode));
        parts[k].rows.push_back({e.id, e.pattern, e.penalty, kind, static_cast<int>(ep), r.total.total, baseline[ep],
                                 relative_gap(r.total.total, baseline[ep])});
        if (config.trajectories) {
          std::ostringstream csv;
          write_trajectory_csv(csv, d.inst, r);
          write_file(eval_dir / "trajectories" / e.id / (to_string(kind) + "_" + three_digits(static_cast<int>(ep)) + ".csv"),
                     csv.str());
        }
      }
    }
  });

  EvalReport report;
  for (const auto& p : parts) report.episodes.insert(report.episodes.end(), p.rows.begin(), p.rows.end());
  report.per_instance = summarize_instances(report.episodes);
  report.summary = summarize_groups(report.per_instance);
  for (auto& g : report.summary) {
    std::vector<double> times;
    for (std::size_t k = 0; k < entries.size(); ++k) {
      if (entries[k].pattern != g.pattern || entries[k].penalty != g.penalty) continue;
      auto it = parts[k].decision_seconds.find(g.policy);
      if (it != parts[k].decision_seconds.end()) times.insert(times.end(), it->second.begin(), it->second.end());
    }
    g.median_decision_seconds = median(times);
  }

  std::ostringstream eps, inst, sum, timing;
  eps << "instance,pattern,penalty,policy,episode,cost,anticipative_cost,relative_gap\n";
  for (const auto& r : report.episodes)
    eps << r.instance << ',' << to_string(r.pattern) << ',' << to_string(r.penalty) << ',' << to_string(r.policy) << ','
        << r.episode << ',' << fmt_double(r.cost) << ',' << fmt_double(r.anticipative) << ',' << fmt_double(r.gap) << '\n';
  inst << "instance,pattern,penalty,policy,episodes,mean_gap\n";
  for (const auto& r : report.per_instance)
    inst << r.instance << ',' << to_string(r.pattern) << ',' << to_string(r.penalty) << ',' << to_string(r.policy) << ','
         << r.episodes << ',' << fmt_double(r.mean_gap) << '\n';
  sum << "pattern,penalty,policy,instances,mean_gap,std_gap\n";
  timing << "pattern,penalty,policy,median_decision_seconds\n";
  for (const auto& g : report.summary) {
    sum << to_string(g.pattern) << ',' << to_string(g.penalty) << ',' << to_string(g.policy) << ',' << g.instances << ','
        << fmt_double(g.mean_gap) << ',' << fmt_double(g.std_gap) << '\n';
    timing << to_string(g.pattern) << ',' << to_string(g.penalty) << ',' << to_string(g.policy) << ','
           << fmt_double(g.median_decision_seconds) << '\n';
  }
  write_file(eval_dir / "eval_episodes.csv", eps.str());
  write_file(eval_dir / "eval_per_instance.csv", inst.str());
  write_file(eval_dir / "eval_summary.csv", sum.str());
  write_file(eval_dir / "eval_timing.csv", timing.str());
  return report;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw SchemaError(where, "not a number: '" + s + "'");
  return v;
}

long parse_long(const std::string& s, const std::string& where) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw SchemaError(where, "not an integer: '" + s + "'");
  return v;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open");
  std::string line;
  if (!std::getline(in, line) || line != header) throw SchemaError(path.string(), "unexpected header");
  const std::size_t cols = split(header).size();
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 2; std::getline(in, line); ++k) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != cols) throw SchemaError(path.string() + ":" + std::to_string(k), "wrong column count");
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

EvalReport load_eval_report(const fs::path& dir) {
  EvalReport r;
  const auto inst = read_csv(dir / "eval_per_instance.csv", "instance,pattern,penalty,policy,episodes,mean_gap");
  for (std::size_t k = 0; k < inst.size(); ++k) {
    const auto& c = inst[k];
    const std::string where = "eval_per_instance.csv:" + std::to_string(k + 2);
    try {
      r.per_instance.push_back({c[0], parse_pattern(c[1]), parse_penalty(c[2]), parse_policy(c[3]),
                                static_cast<int>(parse_long(c[4], where)), parse_double(c[5], where)});
    } catch (const InvalidInput& e) {
      throw SchemaError(where, e.what());
    }
  }
  const auto sum = read_csv(dir / "eval_summary.csv", "pattern,penalty,policy,instances,mean_gap,std_gap");
  for (std::size_t k = 0; k < sum.size(); ++k) {
    const auto& c = sum[k];
    const std::string where = "eval_summary.csv:" + std::to_string(k + 2);
    GroupSummary g;
    try {
      g.pattern = parse_pattern(c[0]);
      g.penalty = parse_penalty(c[1]);
      g.policy = parse_policy(c[2]);
    } catch (const InvalidInput& e) {
      throw SchemaError(where, e.what());
    }
    g.instances = static_cast<int>(parse_long(c[3], where));
    g.mean_gap = parse_double(c[4], where);
    g.std_gap = parse_double(c[5], where);
    r.summary.push_back(g);
  }
  const auto expected = summarize_groups(r.per_instance);
  if (expected.size() != r.summary.size()) throw SchemaError("eval_summary.csv", "row count differs from recomputation");
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const auto& a = expected[k];
    const auto& b = r.summary[k];
    if (a.pattern != b.pattern || a.penalty != b.penalty || a.policy != b.policy || a.instances != b.instances ||
        a.mean_gap != b.mean_gap || a.std_gap != b.std_gap)
      throw SchemaError("eval_summary.csv:" + std::to_string(k + 2), "aggregate differs from per-instance rows");
  }
  return r;
}

// ---------------------------------------------------------------------------
// end-of-horizon report

std::vector<PeriodProfile> eoh_profile(const std::vector<std::vector<PeriodRecord>>& sequences) {
  std::size_t longest = 0;
  for (const auto& s : sequences) longest = std::max(longest, s.size());
  std::vector<PeriodProfile> out(longest);
  for (std::size_t p = 0; p < longest; ++p) {
    out[p].period = static_cast<int>(p);
    double visits = 0.0;
    double delivered = 0.0;
    for (const auto& s : sequences) {
      if (p >= s.size()) continue;
      ++out[p].samples;
      visits += s[p].visits;
      delivered += s[p].delivered;
    }
    out[p].mean_visits = visits / static_cast<double>(out[p].samples);
    out[p].mean_delivered = delivered / static_cast<double>(out[p].samples);
  }
  return out;
}

std::vector<std::vector<PeriodRecord>> dataset_sequences(const Instance& inst, const Dataset& data, int periods) {
  if (periods < 1) throw InvalidInput("periods must be at least 1");
  std::vector<std::vector<PeriodRecord>> out;
  for (std::size_t k = 0; k < data.size(); ++k) {
    if (k % static_cast<std::size_t>(periods) == 0) out.emplace_back();
    const CustomerMask m = mask_of(data[k].target);
    out.back().push_back({popcount(m), delivery_load(inst, data[k].state.inventory, m)});
  }
  return out;
}

std::vector<std::vector<PeriodRecord>> trajectory_sequences(const fs::path& dir) {
  static const std::string header = "period,customer_visits,delivered_units_total,holding,stockout,routing,total";
  std::vector<fs::path> files;
  if (fs::exists(dir))
    for (const auto& entry : fs::recursive_directory_iterator(dir))
      if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<std::vector<PeriodRecord>> out;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::string line;
    if (!std::getline(in, line) || line != header) continue;
    std::vector<PeriodRecord> seq;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto c = split(line);
      if (c.size() != 7) throw SchemaError(f.string(), "wrong column count");
      const auto mask = static_cast<CustomerMask>(parse_long(c[1], f.string()));
      seq.push_back({popcount(mask), parse_double(c[2], f.string())});
    }
    out.push_back(std::move(seq));
  }
  return out;
}

void write_eoh_csv(std::ostream& out, const std::vector<PeriodProfile>& profile) {
  out << "period,samples,mean_visits,mean_delivered\n";
  for (const auto& p : profile)
    out << p.period << ',' << p.samples << ',' << fmt_double(p.mean_visits) << ',' << fmt_double(p.mean_delivered)
        << '\n';
}

std::vector<PeriodProfile> cmd_eoh_report(const ExperimentConfig& config, EohSource source, int episodes,
                                          const fs::path& csv_path) {
  std::vector<std::vector<PeriodRecord>> sequences;
  if (source == EohSource::trajectories) {
    sequences = trajectory_sequences(config.out / "eval");
  } else {
    config.validate();
    const Manifest m = load_manifest(config.out);
    const auto entries = selection(config, m);
    std::vector<std::vector<std::vector<PeriodRecord>>> parts(entries.size());
    TrainConfig tc = config.train_config();
    tc.paradigm = Paradigm::baty;
    tc.jobs = 1;
    detail::parallel_for(entries.size(), config.jobs, [&](std::size_t k) {
      const InstanceData d = load_instance_data(config.out, entries[k], 0);
      const TourCostCache cache(d.inst.gamma);
      const Dataset data = build_dataset_baty(d.inst, cache, d.history, tc, episodes, 0, derive_seed(entries[k].seed, {0xE0}));
      parts[k] = dataset_sequences(d.inst, data, tc.quantiles.horizon);
    });
    for (auto& p : parts) std::move(p.begin(), p.end(), std::back_inserter(sequences));
  }
  const auto profile = eoh_profile(sequences);
  std::ostringstream csv;
  write_eoh_csv(csv, profile);
  write_file(csv_path, csv.str());
  return profile;
}

}  // namespace dsirp
