// Python module dsirp._core: instances, episodes, the cost model, the
// CPCTSP oracle, the prize model, baseline and learned policies, training
// and the experiment commands.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "dsirp/cpctsp.hpp"
#include "dsirp/det_irp.hpp"
#include "dsirp/errors.hpp"
#include "dsirp/experiment.hpp"
#include "dsirp/imitation.hpp"
#include "dsirp/instance.hpp"
#include "dsirp/mdp.hpp"
#include "dsirp/policies.hpp"
#include "dsirp/prize_model.hpp"

namespace py = pybind11;
using namespace dsirp;

namespace {

CustomerMask mask_from(const std::vector<int>& customers) { return mask_of(Tour{customers}); }

std::vector<int> customers_of(CustomerMask m) {
  std::vector<int> out;
  for (int i = 0; i < 32; ++i)
    if ((m >> i) & 1U) out.push_back(i + 1);
  return out;
}

QuantileConfig quantile_config(const std::vector<double>& levels, int horizon) {
  QuantileConfig c{levels, horizon};
  c.validate();
  return c;
}

py::dict cost_dict(const CostBreakdown& c) {
  py::dict d;
  d["holding"] = c.holding;
  d["stockout"] = c.stockout;
  d["routing"] = c.routing;
  d["total"] = c.total;
  return d;
}

py::dict rollout_dict(const RolloutResult& r) {
  py::list tours, costs;
  for (const auto& s : r.trajectory) {
    tours.append(s.tour.sequence);
    costs.append(cost_dict(s.cost));
  }
  py::dict d;
  d["tours"] = tours;
  d["costs"] = costs;
  d["total"] = cost_dict(r.total);
  return d;
}

PolicySpec policy_spec(const std::string& kind, int lookahead, const std::optional<ModelParams>& params,
                       const std::vector<double>& levels) {
  PolicySpec spec;
  spec.kind = parse_policy(kind);
  spec.lookahead.lookahead = lookahead;
  spec.quantiles = quantile_config(levels, lookahead);
  if (spec.kind == PolicyKind::mlco) {
    if (!params) throw InvalidInput("the mlco policy needs params");
    spec.params = *params;
  }
  return spec;
}

const std::vector<double> kLevels{0.1, 0.25, 0.5, 0.75, 0.9};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dynamic and stochastic inventory routing with CO-enriched ML policies";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);
  py::register_exception<CapabilityError>(m, "CapabilityError", PyExc_RuntimeError);
  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

  py::class_<Instance>(m, "Instance")
      .def_readonly("id", &Instance::id)
      .def_readonly("n", &Instance::n)
      .def_readonly("coords", &Instance::coords)
      .def_readonly("gamma", &Instance::gamma)
      .def_readonly("capacity", &Instance::capacity)
      .def_readonly("initial_inventory", &Instance::initial_inventory)
      .def_readonly("holding_cost", &Instance::holding_cost)
      .def_readonly("rho", &Instance::rho)
      .def_readonly("vehicle_capacity", &Instance::vehicle_capacity)
      .def_property_readonly("contextual", &Instance::contextual)
      .def("to_json", [](const Instance& i) { return instance_to_json(i); })
      .def_static("from_json", &instance_from_json)
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; });

  py::class_<Episode>(m, "Episode")
      .def_readonly("T", &Episode::T)
      .def_readonly("demand", &Episode::demand)
      .def_readonly("context", &Episode::context)
      .def("to_json", [](const Episode& e) { return episode_to_json(e); })
      .def_static("from_json", &episode_from_json)
      .def("__eq__", [](const Episode& a, const Episode& b) { return a == b; });

  py::class_<State>(m, "State")
      .def_readwrite("t", &State::t)
      .def_readwrite("inventory", &State::inventory)
      .def_readwrite("history", &State::history)
      .def_readwrite("history_context", &State::history_context)
      .def_readwrite("context_window", &State::context_window);

  py::class_<TourCostCache>(m, "TourCostCache")
      .def(py::init<Matrix>(), py::arg("gamma"))
      .def_property_readonly("n", &TourCostCache::n)
      .def("cost", [](const TourCostCache& c, const std::vector<int>& s) { return c.cost(mask_from(s)); })
      .def("order", [](const TourCostCache& c, const std::vector<int>& s) { return c.order(mask_from(s)); });

  py::class_<ModelParams>(m, "ModelParams")
      .def_readwrite("w1", &ModelParams::w1)
      .def_readwrite("w2_upper", &ModelParams::w2_upper)
      .def_readwrite("w3", &ModelParams::w3)
      .def_readwrite("w4", &ModelParams::w4)
      .def("flatten", &ModelParams::flatten)
      .def("assign", [](ModelParams& p, const Vector& flat) { p.assign(flat); })
      .def("__len__", &ModelParams::size);

  m.def(
      "generate_instance",
      [](const std::string& pattern, int n, const std::string& penalty, std::uint64_t seed) {
        return generate_instance(parse_pattern(pattern), n, parse_penalty(penalty), seed);
      },
      py::arg("pattern"), py::arg("n"), py::arg("penalty"), py::arg("seed"));
  m.def("sample_episode", &sample_episode, py::arg("instance"), py::arg("T"), py::arg("seed"),
        py::arg("context_extra") = kDefaultContextExtra);
  m.def("sample_history", &sample_history, py::arg("instance"), py::arg("length"), py::arg("seed"));
  m.def(
      "initial_state",
      [](const Instance& inst, const Episode& history, const Episode& episode) {
        return initial_state(inst, history, episode);
      },
      py::arg("instance"), py::arg("history"), py::arg("episode"));

  m.def(
      "held_karp",
      [](const std::vector<int>& customers, const Matrix& gamma) {
        const auto r = held_karp(mask_from(customers), gamma);
        return py::make_tuple(r.cost, r.order);
      },
      py::arg("customers"), py::arg("gamma"));
  m.def(
      "routing_cost", [](const std::vector<int>& tour, const Matrix& gamma) { return routing_cost(Tour{tour}, gamma); },
      py::arg("tour"), py::arg("gamma"));
  m.def(
      "solve_cpctsp",
      [](const Vector& prizes, const Vector& quantities, double vehicle_capacity, const TourCostCache& cache) {
        const auto s = solve_cpctsp(prizes, quantities, vehicle_capacity, cache);
        py::dict d;
        d["tour"] = s.tour.sequence;
        d["customers"] = customers_of(s.mask);
        d["objective"] = s.objective;
        d["routing"] = s.routing;
        return d;
      },
      py::arg("prizes"), py::arg("quantities"), py::arg("vehicle_capacity"), py::arg("cache"));

  m.def(
      "step_cost",
      [](const Instance& inst, const State& s, const std::vector<int>& tour, const Vector& demand) {
        return cost_dict(step_cost(inst, s, Tour{tour}, demand));
      },
      py::arg("instance"), py::arg("state"), py::arg("tour"), py::arg("demand"));
  m.def(
      "transition",
      [](const Instance& inst, const State& s, const std::vector<int>& tour, const Vector& demand) {
        return transition(inst, s, Tour{tour}, demand);
      },
      py::arg("instance"), py::arg("state"), py::arg("tour"), py::arg("demand"));
  m.def("relative_gap", &relative_gap, py::arg("policy_cost"), py::arg("anticipative_cost"));

  m.def(
      "solve_deterministic",
      [](const Instance& inst, const TourCostCache& cache, const Vector& inventory, const Matrix& demands,
         std::uint64_t seed) {
        const auto s = solve_deterministic(inst, cache, inventory, demands, {seed, 50000, 5});
        std::vector<std::vector<int>> tours;
        for (const auto& t : s.tours) tours.push_back(t.sequence);
        return py::make_tuple(tours, schedule_cost(inst, cache, inventory, demands, s));
      },
      py::arg("instance"), py::arg("cache"), py::arg("inventory"), py::arg("demands"), py::arg("seed") = 0);

  m.def("empirical_quantile", [](const Vector& h, double p) { return empirical_quantile(h, p); }, py::arg("history"),
        py::arg("p"));
  m.def(
      "init_params",
      [](const Instance& inst, const std::vector<double>& levels, int horizon) {
        return init_params(quantile_config(levels, horizon), model_features(inst));
      },
      py::arg("instance"), py::arg("levels") = kLevels, py::arg("horizon") = 6);
  m.def(
      "prize_forward",
      [](const State& s, const Instance& inst, const ModelParams& p, const std::vector<double>& levels, int horizon) {
        return prize_forward(s, inst, p, quantile_config(levels, horizon));
      },
      py::arg("state"), py::arg("instance"), py::arg("params"), py::arg("levels") = kLevels, py::arg("horizon") = 6);
  m.def(
      "save_checkpoint",
      [](const ModelParams& p, const std::filesystem::path& path, const std::vector<double>& levels, int horizon) {
        save_checkpoint(p, quantile_config(levels, horizon), path);
      },
      py::arg("params"), py::arg("path"), py::arg("levels") = kLevels, py::arg("horizon") = 6);
  m.def(
      "load_checkpoint",
      [](const std::filesystem::path& path) {
        const auto c = load_checkpoint(path);
        return py::make_tuple(c.params, c.config.levels, c.config.horizon);
      },
      py::arg("path"));

  m.def(
      "decide",
      [](const std::string& kind, const Instance& inst, const TourCostCache& cache, const State& s, int lookahead,
         const std::optional<ModelParams>& params, const std::vector<double>& levels) {
        const auto spec = policy_spec(kind, lookahead, params, levels);
        py::gil_scoped_release release;
        return make_policy(spec, inst, cache)(s).sequence;
      },
      py::arg("kind"), py::arg("instance"), py::arg("cache"), py::arg("state"), py::arg("lookahead") = 6,
      py::arg("params") = std::nullopt, py::arg("levels") = kLevels);

  m.def(
      "rollout",
      [](const Instance& inst, const TourCostCache& cache, const std::string& kind, const Episode& ep,
         const State& x0, int lookahead, const std::optional<ModelParams>& params,
         const std::vector<double>& levels) {
        const auto spec = policy_spec(kind, lookahead, params, levels);
        RolloutResult r;
        {
          py::gil_scoped_release release;
          r = rollout(inst, make_policy(spec, inst, cache, &ep), ep, x0);
        }
        return rollout_dict(r);
      },
      py::arg("instance"), py::arg("cache"), py::arg("kind"), py::arg("episode"), py::arg("x0"),
      py::arg("lookahead") = 6, py::arg("params") = std::nullopt, py::arg("levels") = kLevels);
  m.def(
      "rollout_callable",
      [](const Instance& inst, const std::function<std::vector<int>(const State&)>& fn, const Episode& ep,
         const State& x0) {
        return rollout_dict(rollout(inst, [&fn](const State& s) { return Tour{fn(s)}; }, ep, x0));
      },
      py::arg("instance"), py::arg("policy"), py::arg("episode"), py::arg("x0"));
  m.def(
      "anticipative_baseline",
      [](const Instance& inst, const TourCostCache& cache, const Episode& ep, const State& x0, std::uint64_t seed) {
        AnticipativeResult r;
        {
          py::gil_scoped_release release;
          r = anticipative_baseline(inst, cache, ep, x0, {seed, 50000, 10});
        }
        auto d = rollout_dict(r.rollout);
        d["plan_total"] = r.total;
        return d;
      },
      py::arg("instance"), py::arg("cache"), py::arg("episode"), py::arg("x0"), py::arg("seed") = 0);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_property(
          "paradigm", [](const TrainConfig& c) { return to_string(c.paradigm); },
          [](TrainConfig& c, const std::string& s) { c.paradigm = parse_paradigm(s); })
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("voting", &TrainConfig::voting)
      .def_readwrite("horizon", &TrainConfig::horizon)
      .def_readwrite("patience", &TrainConfig::patience)
      .def_readwrite("samples_per_epoch", &TrainConfig::samples_per_epoch)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("jobs", &TrainConfig::jobs)
      .def_property(
          "lookahead", [](const TrainConfig& c) { return c.quantiles.horizon; },
          [](TrainConfig& c, int h) { c.quantiles.horizon = h; })
      .def_property(
          "levels", [](const TrainConfig& c) { return c.quantiles.levels; },
          [](TrainConfig& c, const std::vector<double>& l) { c.quantiles.levels = l; })
      .def_property(
          "fit_steps", [](const TrainConfig& c) { return c.fit.steps; }, [](TrainConfig& c, int s) { c.fit.steps = s; })
      .def_property(
          "n_pert", [](const TrainConfig& c) { return c.fit.perturbation.n_pert; },
          [](TrainConfig& c, int k) { c.fit.perturbation.n_pert = k; })
      .def_property(
          "pert_scale", [](const TrainConfig& c) { return c.fit.perturbation.pert_scale; },
          [](TrainConfig& c, double s) { c.fit.perturbation.pert_scale = s; })
      .def_property(
          "step_size", [](const TrainConfig& c) { return c.fit.step_size; },
          [](TrainConfig& c, double s) { c.fit.step_size = s; })
      .def("alpha", &TrainConfig::alpha, py::arg("epoch"));

  m.def(
      "train",
      [](const Instance& inst, const Episode& history, const std::vector<Episode>& validation,
         const TrainConfig& config) {
        TrainResult r;
        {
          py::gil_scoped_release release;
          r = train(inst, history, validation, config);
        }
        py::list log;
        for (const auto& e : r.log) {
          py::dict d;
          d["epoch"] = e.epoch;
          d["dataset_size"] = e.dataset_size;
          d["train_fy_loss"] = e.train_fy_loss;
          d["validation_cost"] = e.validation_cost;
          d["alpha"] = e.alpha;
          log.append(d);
        }
        py::dict d;
        d["params"] = r.best;
        d["best_validation"] = r.best_validation;
        d["log"] = log;
        d["early_stopped"] = r.early_stopped;
        return d;
      },
      py::arg("instance"), py::arg("history"), py::arg("validation"), py::arg("config"));

  m.def(
      "run_experiment",
      [](const std::string& command, const std::string& config_json) {
        const auto cfg = config_from_json(config_json);
        py::gil_scoped_release release;
        if (command == "generate") {
          cmd_generate(cfg);
        } else if (command == "train") {
          cmd_train(cfg);
        } else if (command == "evaluate") {
          cmd_evaluate(cfg);
        } else {
          throw InvalidInput("unknown command '" + command + "' (generate, train, evaluate)");
        }
      },
      py::arg("command"), py::arg("config_json"),
      "Runs an experiment command with a JSON config using the CLI's keys.");
}
