#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "algoselect/harness.hpp"
#include "algoselect/online.hpp"
#include "algoselect/sim.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace algoselect;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBounds = 3;

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("bad config JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

struct GlobalOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
};

// resolution order: flags beat config-file values beat defaults
template <typename T>
T resolve(const CLI::Option* flag, const T& flag_value, const json& config,
          const std::string& key, const T& fallback) {
  if (flag != nullptr && flag->count() > 0) return flag_value;
  if (config.contains(key)) return config.at(key).get<T>();
  return fallback;
}

int cmd_run(const GlobalOptions& global, const json& config, const CLI::Option* reps_opt,
            int reps_flag, const CLI::Option* budget_opt, double budget_flag,
            const CLI::Option* problems_opt, const std::vector<std::string>& problems_flag,
            const CLI::Option* extended_opt, bool extended_flag, bool allow_flagged) {
  MatrixConfig matrix;
  matrix.repetitions = resolve(reps_opt, reps_flag, config, "repetitions", 7);
  matrix.time_budget_s = resolve(budget_opt, budget_flag, config, "time_budget_s", 2.0);
  matrix.problems =
      resolve(problems_opt, problems_flag, config, "problems", std::vector<std::string>{});
  matrix.extended = resolve(extended_opt, extended_flag, config, "extended", false);
  matrix.base_seed = global.seed.value_or(config.value("base_seed", std::uint64_t{42}));
  matrix.workers = global.workers.value_or(config.value("workers", 1));

  fs::create_directories(global.out_dir);
  const fs::path runs_path = fs::path(global.out_dir) / "runs.jsonl";
  std::ofstream runs(runs_path);
  if (!runs) throw DataError("cannot write " + runs_path.string());

  std::size_t emitted = 0;
  bool any_flagged = false;
  const auto records = run_matrix(matrix, [&](const RunRecord& r) {
    runs << record_to_jsonl(r) << '\n';
    ++emitted;
    any_flagged = any_flagged || r.flagged;
  });
  runs.close();

  json resolved{{"subcommand", "run"},
                {"problems", matrix.problems},
                {"repetitions", matrix.repetitions},
                {"base_seed", matrix.base_seed},
                {"time_budget_s", matrix.time_budget_s},
                {"workers", matrix.workers},
                {"extended", matrix.extended},
                {"records", records.size()}};
  write_text(fs::path(global.out_dir) / "config.resolved.json", resolved.dump(2) + "\n");

  std::cout << "wrote " << emitted << " records to " << runs_path.string() << "\n";
  if (any_flagged) {
    std::cout << "warning: some cells were flagged (solver errors)\n";
    if (!allow_flagged) return kExitData;
  }
  return kExitOk;
}

int cmd_analyze(const GlobalOptions& global, const json& config, const std::string& runs_arg) {
  std::string runs_path = runs_arg;
  if (runs_path.empty()) runs_path = config.value("runs", std::string{});
  if (runs_path.empty()) runs_path = (fs::path(global.out_dir) / "runs.jsonl").string();
  std::ifstream in(runs_path);
  if (!in) throw DataError("cannot read runs file: " + runs_path);
  const auto records = read_jsonl(in);

  AnalyzeOptions options;
  options.bootstrap_seed = global.seed.value_or(config.value("bootstrap_seed", std::uint64_t{17}));
  options.bootstrap_resamples = config.value("bootstrap_resamples", 10000);
  options.confidence = config.value("confidence", 0.95);

  const std::string report_text = analysis_report(records, options);
  fs::create_directories(global.out_dir);
  write_text(fs::path(global.out_dir) / "report.json", report_text + "\n");

  std::ostringstream heatmap;
  export_heatmap(records, heatmap);
  write_text(fs::path(global.out_dir) / "heatmap.csv", heatmap.str());

  const auto compat = compatibility_and_ratios(records);
  std::ostringstream ratios;
  export_ratio_histogram(compat, ratios);
  write_text(fs::path(global.out_dir) / "ratios.csv", ratios.str());

  const json report = json::parse(report_text);
  const auto& ci = report.at("bootstrap_ci");
  double mean_compat = 0.0;
  for (const auto& [problem, count] : compat.counts) mean_compat += count;
  if (!compat.counts.empty()) mean_compat /= static_cast<double>(compat.counts.size());
  const auto value_or_na = [&](const char* key) {
    const auto& v = report.at(key);
    return v.is_null() ? std::string{"n/a"} : v.dump();
  };

  std::cout << "Total Problems Analyzed: " << report.at("total_problems") << "\n"
            << "Total Algorithms Tested: " << report.at("total_algorithms") << "\n"
            << "Total Experiments Run (Observations): " << report.at("total_runs") << "\n"
            << "Mean Absolute CV Gap (Median Predictor): " << value_or_na("cv_gap_abs") << " s\n"
            << "Median Relative Improvement Potential: " << value_or_na("cv_gap_relative")
            << " %\n"
            << "Geometric Mean Performance Ratio (Predicted vs. Best): "
            << value_or_na("geometric_mean_ratio") << "x\n"
            << "95% CI for Absolute CV Gap (Bootstrap): [" << ci[0].dump() << ", " << ci[1].dump()
            << "] s\n"
            << "Conditional Entropy H(A|P): " << value_or_na("conditional_entropy_bits")
            << " bits\n"
            << "Average Compatible Algorithms per Problem: " << mean_compat << "\n";
  return kExitOk;
}

int cmd_simulate(const GlobalOptions& global, const json& file_config, std::string name,
                 const CLI::Option* t_opt, std::size_t horizon_flag, const CLI::Option* k_opt,
                 std::size_t k_flag, const CLI::Option* seeds_opt, std::size_t seeds_flag,
                 const CLI::Option* depth_opt, std::size_t depth_flag, double gap,
                 bool assert_bounds) {
  const json config = file_config.value("simulate", file_config);
  if (name.empty()) name = config.value("name", std::string{});
  if (name.empty()) {
    std::cerr << "simulate needs an environment name (argument or config \"name\")\n";
    return kExitUsage;
  }
  const std::size_t horizon = resolve(t_opt, horizon_flag, config, "horizon", std::size_t{1000});
  const std::size_t actions = resolve(k_opt, k_flag, config, "K", std::size_t{2});
  const std::size_t seeds = resolve(seeds_opt, seeds_flag, config, "seeds", std::size_t{20});
  const std::size_t depth = resolve(depth_opt, depth_flag, config, "depth", std::size_t{2});
  const std::uint64_t base_seed = global.seed.value_or(config.value("seed", std::uint64_t{42}));

  fs::create_directories(global.out_dir);
  const auto save_ledger = [&](std::size_t s, const RegretLedger& ledger) {
    std::ostringstream os;
    ledger.write_csv(os);
    write_text(fs::path(global.out_dir) / (name + "_seed" + std::to_string(s) + ".csv"),
               os.str());
  };

  json summary{{"name", name},   {"horizon", horizon},     {"K", actions},
               {"seeds", seeds}, {"base_seed", base_seed}, {"environment", json::object()}};
  bool bounds_ok = true;

  if (name == "fpl") {
    summary["environment"] = {{"kind", "near_tie_bernoulli"}, {"gap", gap}};
    for (std::size_t s = 0; s < seeds; ++s) {
      Rng env(hash_combine(base_seed + s, "env"));
      const auto stream = near_tie_stream(horizon, actions, gap, env);
      save_ledger(s, fpl_run(stream, hash_combine(base_seed + s, "learner")));
    }
    const auto result = fpl_regret_experiment(actions, seeds, base_seed, gap);
    summary["ratio_at_1e3"] = result.ratio_at_1e3;
    summary["ratio_at_1e4"] = result.ratio_at_1e4;
    summary["max_regret_ratio"] = std::max(result.ratio_at_1e3, result.ratio_at_1e4);
    summary["bound"] = 8.0;
    bounds_ok = result.ratio_at_1e3 <= 8.0 && result.ratio_at_1e4 <= 8.0 &&
                result.ratio_at_1e4 <= 1.1 * result.ratio_at_1e3;
  } else if (name == "cascade") {
    const std::vector<double> means = config.value("means", std::vector<double>{0.3, 0.0});
    const std::vector<double> costs = config.value("costs", std::vector<double>{0.0, 10.0});
    summary["environment"] = {
        {"kind", "bernoulli_with_costs"}, {"means", means}, {"costs", costs}};
    for (std::size_t s = 0; s < seeds; ++s) {
      save_ledger(s, cascade_run(means, costs, horizon, base_seed + s));
    }
    const auto result = cascade_experiment(means, costs, horizon, seeds, base_seed);
    summary["mean_cost_plus_loss"] = result.mean_cost_plus_loss;
    summary["optimal_cost_plus_loss"] = result.optimal_cost_plus_loss;
    summary["bound"] = 0.05;
    bounds_ok = std::abs(result.mean_cost_plus_loss - result.optimal_cost_plus_loss) <= 0.05;
  } else if (name == "adaptive-window") {
    summary["environment"] = {{"kind", "flip_at_half"}};
    const auto stream = flip_stream(horizon);
    const std::size_t starts[] = {0, horizon / 2};
    for (std::size_t s = 0; s < seeds; ++s) {
      save_ledger(s,
                  adaptive_window_run(stream, starts, hash_combine(base_seed + s, "adaptive")));
    }
    const auto result = adaptive_window_experiment(horizon, seeds, base_seed);
    summary["wins"] = result.wins;
    summary["bound"] = "wins >= 16/20";
    bounds_ok = result.wins * 20 >= result.seeds * 16;
  } else if (name == "ucb-tree") {
    summary["environment"] = {{"kind", "one_zero_loss_leaf"}, {"depth", depth}};
    for (std::size_t s = 0; s < seeds; ++s) {
      save_ledger(s, ucb_tree_run(depth, 0, horizon, base_seed + s));
    }
    const auto result = ucb_tree_experiment(depth, 0, horizon, seeds, base_seed);
    summary["mean_regret"] = result.mean_regret;
    summary["bound"] = result.bound;
    bounds_ok = result.mean_regret <= result.bound;
  } else {
    std::cerr << "unknown simulation name: " << name
              << " (expected fpl | cascade | adaptive-window | ucb-tree)\n";
    return kExitUsage;
  }

  summary["bounds_ok"] = bounds_ok;
  write_text(fs::path(global.out_dir) / (name + "_summary.json"), summary.dump(2) + "\n");
  std::cout << summary.dump(2) << "\n";
  if (assert_bounds && !bounds_ok) return kExitBounds;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AlgoSelect: comb-based algorithm selection and benchmark harness"};
  app.require_subcommand(1);

  GlobalOptions global;
  app.add_option("--config", global.config_path, "JSON config file");
  const char* env_out = std::getenv("ALGOSELECT_OUT");
  if (env_out != nullptr) global.out_dir = env_out;
  app.add_option("--out", global.out_dir, "output directory");
  std::uint64_t seed_value = 0;
  auto* seed_opt = app.add_option("--seed", seed_value, "base seed override");
  int workers_value = 1;
  auto* workers_opt = app.add_option("--workers", workers_value, "worker thread count");

  auto* run = app.add_subcommand("run", "execute the problem x algorithm run matrix");
  int reps_flag = 7;
  auto* reps_opt = run->add_option("--reps", reps_flag, "repetitions per cell");
  double budget_flag = 2.0;
  auto* budget_opt = run->add_option("--budget", budget_flag, "per-run time budget, seconds");
  std::vector<std::string> problems_flag;
  auto* problems_opt =
      run->add_option("--problems", problems_flag, "problem ids (default: all)")->delimiter(',');
  bool extended_flag = false;
  auto* extended_opt =
      run->add_flag("--extended", extended_flag, "run every algorithm on every problem");
  bool allow_flagged = false;
  run->add_flag("--allow-flagged", allow_flagged, "exit 0 even when cells are flagged");

  auto* analyze = app.add_subcommand("analyze", "compute the analysis report from runs.jsonl");
  std::string runs_arg;
  analyze->add_option("--runs", runs_arg, "runs.jsonl path (default: <out>/runs.jsonl)");

  auto* simulate = app.add_subcommand("simulate", "run an online-selection simulation");
  std::string sim_name;
  simulate->add_option("name", sim_name, "fpl | cascade | adaptive-window | ucb-tree");
  std::size_t horizon_flag = 1000;
  auto* t_opt = simulate->add_option("--T", horizon_flag, "horizon");
  std::size_t k_flag = 2;
  auto* k_opt = simulate->add_option("--K", k_flag, "number of actions");
  std::size_t seeds_flag = 20;
  auto* seeds_opt = simulate->add_option("--seeds", seeds_flag, "seed count");
  std::size_t depth_flag = 2;
  auto* depth_opt = simulate->add_option("--depth", depth_flag, "ucb-tree depth");
  double gap = 0.1;
  simulate->add_option("--gap", gap, "near-tie stream gap (fpl)");
  bool assert_bounds = false;
  simulate->add_flag("--assert-bounds", assert_bounds, "exit 3 when a regret bound is violated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (seed_opt->count() > 0) global.seed = seed_value;
    if (workers_opt->count() > 0) global.workers = workers_value;
    json config = json::object();
    if (!global.config_path.empty()) config = read_config_file(global.config_path);

    if (run->parsed()) {
      return cmd_run(global, config, reps_opt, reps_flag, budget_opt, budget_flag, problems_opt,
                     problems_flag, extended_opt, extended_flag, allow_flagged);
    }
    if (analyze->parsed()) return cmd_analyze(global, config, runs_arg);
    if (simulate->parsed()) {
      return cmd_simulate(global, config, sim_name, t_opt, horizon_flag, k_opt, k_flag, seeds_opt,
                          seeds_flag, depth_opt, depth_flag, gap, assert_bounds);
    }
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
