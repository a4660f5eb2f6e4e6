#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "algoselect/comb.hpp"
#include "algoselect/harness.hpp"
#include "algoselect/online.hpp"
#include "algoselect/problems.hpp"
#include "algoselect/sim.hpp"
#include "algoselect/threshold.hpp"
#include "algoselect/tree_comb.hpp"

namespace py = pybind11;
using namespace algoselect;

namespace {

// table form: losses[i][h] = loss of hypothesis h on datum i
MoMEstimate mom_erm_table(const std::vector<std::vector<double>>& losses, double delta,
                          std::uint64_t seed, bool shuffle) {
  if (losses.empty()) throw std::invalid_argument("mom_erm: empty data");
  const std::size_t width = losses.front().size();
  HypothesisClass<std::vector<double>> hypotheses;
  for (std::size_t h = 0; h < width; ++h) {
    hypotheses.push_back([h](const std::vector<double>& row) { return row.at(h); });
  }
  Rng rng(seed);
  return mom_erm<std::vector<double>>(losses, hypotheses, delta, rng, shuffle);
}

std::size_t mean_erm_table(const std::vector<std::vector<double>>& losses) {
  if (losses.empty()) throw std::invalid_argument("mean_erm: empty data");
  const std::size_t width = losses.front().size();
  HypothesisClass<std::vector<double>> hypotheses;
  for (std::size_t h = 0; h < width; ++h) {
    hypotheses.push_back([h](const std::vector<double>& row) { return row.at(h); });
  }
  return mean_erm<std::vector<double>>(losses, hypotheses);
}

}  // namespace

PYBIND11_MODULE(_algoselect, m) {
  m.doc() = "Comb-based algorithm selection: combs, tree routing, threshold "
            "learning, online selectors and the benchmark harness";

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("uniform01", &Rng::uniform01)
      .def("open01", &Rng::open01)
      .def("uniform_below", &Rng::uniform_below, py::arg("n"))
      .def("normal", &Rng::normal)
      .def("gumbel", &Rng::gumbel);

  py::class_<SeedingFunction>(m, "SeedingFunction")
      .def(py::init([](std::vector<double> weights, double bias) {
             return SeedingFunction{std::move(weights), bias};
           }),
           py::arg("weights"), py::arg("bias") = 0.0)
      .def_readwrite("weights", &SeedingFunction::weights)
      .def_readwrite("bias", &SeedingFunction::bias)
      .def("to_json", &seeding_to_json)
      .def_static("from_json", &seeding_from_json);

  m.def("logistic", &logistic, py::arg("x"));
  m.def(
      "seed",
      [](const SeedingFunction& s, const std::vector<double>& phi) { return seed(s, phi); },
      py::arg("seeding"), py::arg("features"));
  m.def(
      "comb_select",
      [](double t, Rng& rng) {
        return comb_select(t, rng) == Endpoint::Systematic ? "systematic" : "random";
      },
      py::arg("t"), py::arg("rng"));
  m.def(
      "n_path_distribution",
      [](const std::vector<double>& scores) { return n_path_distribution(scores); },
      py::arg("scores"));
  m.def(
      "sample_path",
      [](const std::vector<double>& probabilities, Rng& rng) {
        return sample_path(probabilities, rng);
      },
      py::arg("probabilities"), py::arg("rng"));

  py::class_<TreeCombNode>(m, "TreeComb")
      .def_static("from_json", &tree_from_json, py::arg("text"))
      .def("to_json", &tree_to_json)
      .def("leaf_count", [](const TreeCombNode& t) { return leaf_count(t); })
      .def(
          "route",
          [](const TreeCombNode& t, const std::vector<double>& phi, Rng& rng) {
            return route(t, phi, rng);
          },
          py::arg("features"), py::arg("rng"))
      .def(
          "route_deterministic",
          [](const TreeCombNode& t, const std::vector<double>& phi) {
            return route_deterministic(t, phi);
          },
          py::arg("features"))
      .def(
          "trace",
          [](const TreeCombNode& t, const std::vector<double>& phi, Rng& rng) {
            const auto tr = trace(t, phi, rng);
            py::list steps;
            for (const auto& s : tr.steps) {
              steps.append(py::make_tuple(s.node_id, s.t, s.went_right ? "right" : "left"));
            }
            return py::make_tuple(steps, tr.terminal);
          },
          py::arg("features"), py::arg("rng"));
  m.def("complete_tree", &complete_tree, py::arg("depth"), py::arg("seeding"));

  m.def("log_ratio", &log_ratio, py::arg("t_sys"), py::arg("t_ran"));
  py::class_<ThresholdEstimate>(m, "ThresholdEstimate")
      .def_readonly("theta_k", &ThresholdEstimate::theta_k)
      .def_readonly("k", &ThresholdEstimate::k)
      .def("epsilon_band", &ThresholdEstimate::epsilon_band, py::arg("delta"));
  m.def(
      "empirical_median",
      [](const std::vector<double>& samples) { return empirical_median(samples); },
      py::arg("samples"));
  m.def("threshold_to_seeding", &threshold_to_seeding, py::arg("estimate"),
        py::arg("ratio_feature_index"), py::arg("slope"), py::arg("dimension") = 0);

  py::class_<MoMEstimate>(m, "MoMEstimate")
      .def_readonly("chosen", &MoMEstimate::chosen)
      .def_readonly("mom_risk", &MoMEstimate::mom_risk)
      .def_readonly("k_blocks", &MoMEstimate::k_blocks)
      .def_readonly("block_size", &MoMEstimate::block_size);
  m.def("mom_erm", &mom_erm_table, py::arg("losses"), py::arg("delta") = 0.05,
        py::arg("seed") = 0, py::arg("shuffle") = false);
  m.def("mean_erm", &mean_erm_table, py::arg("losses"));

  py::class_<FplState>(m, "FplState")
      .def(py::init<std::size_t>(), py::arg("actions"))
      .def_readwrite("cumulative_losses", &FplState::cumulative_losses)
      .def_readonly("round", &FplState::round)
      .def("choose", [](const FplState& s, Rng& rng) { return fpl_choose(s, rng); },
           py::arg("rng"))
      .def(
          "update",
          [](FplState& s, const std::vector<double>& losses) { fpl_update(s, losses); },
          py::arg("losses"));

  m.def(
      "fpl_regret_experiment",
      [](std::size_t actions, std::size_t seeds, std::uint64_t base_seed, double gap) {
        const auto r = fpl_regret_experiment(actions, seeds, base_seed, gap);
        py::dict out;
        out["K"] = r.actions;
        out["ratio_at_1e3"] = r.ratio_at_1e3;
        out["ratio_at_1e4"] = r.ratio_at_1e4;
        return out;
      },
      py::arg("actions"), py::arg("seeds") = 20, py::arg("base_seed") = 42, py::arg("gap") = 0.1);
  m.def(
      "cascade_experiment",
      [](const std::vector<double>& means, const std::vector<double>& costs, std::size_t horizon,
         std::size_t seeds, std::uint64_t base_seed) {
        const auto r = cascade_experiment(means, costs, horizon, seeds, base_seed);
        py::dict out;
        out["mean_cost_plus_loss"] = r.mean_cost_plus_loss;
        out["optimal_cost_plus_loss"] = r.optimal_cost_plus_loss;
        return out;
      },
      py::arg("means"), py::arg("costs"), py::arg("horizon") = 5000, py::arg("seeds") = 20,
      py::arg("base_seed") = 42);
  m.def(
      "ucb_tree_experiment",
      [](std::size_t depth, std::size_t horizon, std::size_t seeds, std::uint64_t base_seed) {
        const auto r = ucb_tree_experiment(depth, 0, horizon, seeds, base_seed);
        py::dict out;
        out["mean_regret"] = r.mean_regret;
        out["bound"] = r.bound;
        return out;
      },
      py::arg("depth") = 2, py::arg("horizon") = 10000, py::arg("seeds") = 20,
      py::arg("base_seed") = 42);
  m.def(
      "adaptive_window_experiment",
      [](std::size_t horizon, std::size_t seeds, std::uint64_t base_seed) {
        const auto r = adaptive_window_experiment(horizon, seeds, base_seed);
        py::dict out;
        out["wins"] = r.wins;
        out["seeds"] = r.seeds;
        return out;
      },
      py::arg("horizon") = 5000, py::arg("seeds") = 20, py::arg("base_seed") = 42);

  m.def("suite_manifest", [] {
    py::list out;
    for (const auto& e : suite_manifest()) {
      py::dict d;
      d["problem"] = e.spec_template.problem;
      d["category"] = category_name(e.spec_template.category);
      d["params"] = e.spec_template.params;
      d["systematic"] = e.systematic.algorithm;
      d["randomized"] = e.randomized.algorithm;
      out.append(std::move(d));
    }
    return out;
  });
  m.def(
      "solve_one",
      [](const std::string& registry_key, std::uint64_t seed, double budget_s) {
        const auto entry = registry_lookup(registry_key);
        ProblemSpec spec = manifest_entry(entry.problem).spec_template;
        spec.seed = seed;
        const auto instance = generate(spec);
        Rng rng(hash_combine(seed, "solver"));
        const auto outcome = solve(entry, instance, rng, budget_s);
        py::dict out;
        out["problem"] = entry.problem;
        out["algorithm"] = entry.algorithm;
        out["runtime_s"] = outcome.runtime_s;
        out["quality"] = outcome.quality;
        out["summary"] = outcome.summary;
        out["features"] = instance.features;
        return out;
      },
      py::arg("registry_key"), py::arg("seed") = 0, py::arg("budget_s") = 2.0);

  m.def(
      "run_matrix",
      [](const std::vector<std::string>& problems, int repetitions, std::uint64_t base_seed,
         double time_budget_s, int workers, bool extended) {
        MatrixConfig config;
        config.problems = problems;
        config.repetitions = repetitions;
        config.base_seed = base_seed;
        config.time_budget_s = time_budget_s;
        config.workers = workers;
        config.extended = extended;
        py::list out;
        for (const auto& r : run_matrix(config)) out.append(record_to_jsonl(r));
        return out;
      },
      py::arg("problems") = std::vector<std::string>{}, py::arg("repetitions") = 7,
      py::arg("base_seed") = 42, py::arg("time_budget_s") = 2.0, py::arg("workers") = 1,
      py::arg("extended") = false);
  m.def(
      "analysis_report",
      [](const std::vector<std::string>& jsonl_lines, std::uint64_t bootstrap_seed) {
        std::vector<RunRecord> records;
        for (const auto& line : jsonl_lines) records.push_back(record_from_jsonl(line));
        AnalyzeOptions options;
        options.bootstrap_seed = bootstrap_seed;
        return analysis_report(records, options);
      },
      py::arg("jsonl_lines"), py::arg("bootstrap_seed") = 17);
}
