#include "algoselect/harness.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "algoselect/threshold.hpp"
#include "json.hpp"

namespace algoselect {

namespace {

using nlohmann::json;

json record_to_json(const RunRecord& r) {
  return json{{"problem", r.problem}, {"algorithm", r.algorithm}, {"rep", r.rep},
              {"seed", r.seed},       {"runtime_s", r.runtime_s}, {"quality", r.quality},
              {"features", r.features}, {"flagged", r.flagged}};
}

RunRecord record_from_json(const json& j) {
  RunRecord r;
  r.problem = j.at("problem").get<std::string>();
  r.algorithm = j.at("algorithm").get<std::string>();
  r.rep = j.at("rep").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.runtime_s = j.at("runtime_s").get<double>();
  r.quality = j.at("quality").get<double>();
  r.features = j.at("features").get<std::vector<double>>();
  r.flagged = j.at("flagged").get<bool>();
  return r;
}

double clamped(double runtime) { return std::max(runtime, kRuntimeFloor); }

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (const double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

double std_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double mu = mean_of(v);
  double acc = 0.0;
  for (const double x : v) acc += (x - mu) * (x - mu);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

// problem -> algorithm -> rep-ordered (runtime, quality)
struct Cell {
  std::vector<double> runtimes;
  std::vector<double> qualities;
};
using Grouped = std::map<std::string, std::map<std::string, Cell>>;

Grouped group(std::span<const RunRecord> records) {
  std::map<std::string, std::map<std::string, std::vector<const RunRecord*>>> staged;
  for (const auto& r : records) staged[r.problem][r.algorithm].push_back(&r);
  Grouped out;
  for (auto& [problem, algos] : staged) {
    for (auto& [algorithm, rows] : algos) {
      std::sort(rows.begin(), rows.end(),
                [](const RunRecord* a, const RunRecord* b) { return a->rep < b->rep; });
      Cell cell;
      for (const auto* r : rows) {
        cell.runtimes.push_back(r->runtime_s);
        cell.qualities.push_back(r->quality);
      }
      out[problem][algorithm] = std::move(cell);
    }
  }
  return out;
}

double mean_quality(const Cell& cell) { return mean_of(cell.qualities); }

}  // namespace

std::string record_to_jsonl(const RunRecord& record) { return record_to_json(record).dump(); }

RunRecord record_from_jsonl(const std::string& line) {
  try {
    return record_from_json(json::parse(line));
  } catch (const json::exception& e) {
    throw DataError(std::string("bad run record: ") + e.what());
  }
}

void write_jsonl(std::ostream& os, std::span<const RunRecord> records) {
  for (const auto& r : records) os << record_to_jsonl(r) << '\n';
}

std::vector<RunRecord> read_jsonl(std::istream& is) {
  std::vector<RunRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(record_from_jsonl(line));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (records.empty()) throw DataError("no run records found");
  return records;
}

std::string matrix_config_to_json(const MatrixConfig& c) {
  return json{{"problems", c.problems},       {"repetitions", c.repetitions},
              {"base_seed", c.base_seed},     {"time_budget_s", c.time_budget_s},
              {"workers", c.workers},         {"extended", c.extended}}
      .dump(2);
}

MatrixConfig matrix_config_from_json(const std::string& text) {
  try {
    const auto j = json::parse(text);
    MatrixConfig c;
    c.problems = j.value("problems", c.problems);
    c.repetitions = j.value("repetitions", c.repetitions);
    c.base_seed = j.value("base_seed", c.base_seed);
    c.time_budget_s = j.value("time_budget_s", c.time_budget_s);
    c.workers = j.value("workers", c.workers);
    c.extended = j.value("extended", c.extended);
    return c;
  } catch (const json::exception& e) {
    throw DataError(std::string("bad config: ") + e.what());
  }
}

std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& problem,
                        const std::string& algorithm, int rep) {
  std::uint64_t h = hash_combine(base_seed, problem);
  h = hash_combine(h, algorithm);
  return hash_combine(h, static_cast<std::uint64_t>(rep));
}

std::vector<RunRecord> run_matrix(const MatrixConfig& config, const RecordSink& sink) {
  if (config.repetitions < 1) throw std::invalid_argument("run_matrix: repetitions must be >= 1");
  const auto& manifest = suite_manifest();
  std::vector<const ManifestEntry*> selected;
  if (config.problems.empty()) {
    for (const auto& e : manifest) selected.push_back(&e);
  } else {
    for (const auto& name : config.problems) selected.push_back(&manifest_entry(name));
  }
  std::vector<AlgorithmEntry> all_algorithms;
  for (const auto& e : manifest) {
    all_algorithms.push_back(e.systematic);
    all_algorithms.push_back(e.randomized);
  }

  struct Task {
    const ManifestEntry* problem;
    AlgorithmEntry algorithm;
    int rep;
  };
  std::vector<Task> tasks;
  for (const auto* entry : selected) {
    std::vector<AlgorithmEntry> algorithms;
    if (config.extended) {
      algorithms = all_algorithms;
    } else {
      algorithms = {entry->systematic, entry->randomized};
    }
    for (const auto& algorithm : algorithms) {
      for (int rep = 0; rep < config.repetitions; ++rep) {
        tasks.push_back({entry, algorithm, rep});
      }
    }
  }

  const auto run_cell = [&](const Task& task) {
    RunRecord record;
    record.problem = task.problem->spec_template.problem;
    record.algorithm = task.algorithm.algorithm;
    record.rep = task.rep;
    record.seed = cell_seed(config.base_seed, record.problem, record.algorithm, task.rep);
    try {
      ProblemSpec spec = task.problem->spec_template;
      spec.seed = record.seed;
      const ProblemInstance instance = generate(spec);
      record.features = instance.features;
      if (task.algorithm.problem != record.problem) {
        // extended mode, mismatched pair: the adapter scores it incompatible
        record.runtime_s = 0.0;
        record.quality = 0.0;
        return record;
      }
      Rng rng(hash_combine(record.seed, "solver"));
      const SolveOutcome outcome = solve(task.algorithm, instance, rng, config.time_budget_s);
      record.runtime_s = outcome.runtime_s;
      record.quality = outcome.quality;
      record.flagged = outcome.flagged;
    } catch (const std::exception&) {
      record.runtime_s = config.time_budget_s;
      record.quality = 0.0;
      record.flagged = true;
    }
    return record;
  };

  std::vector<RunRecord> records(tasks.size());
  const int workers = std::max(1, config.workers);
  if (workers == 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      records[i] = run_cell(tasks[i]);
      if (sink) sink(records[i]);
    }
  } else {
    std::vector<std::thread> pool;
    std::mutex next_mutex;
    std::size_t next = 0;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          std::size_t i;
          {
            const std::lock_guard<std::mutex> lock(next_mutex);
            if (next >= tasks.size()) return;
            i = next++;
          }
          records[i] = run_cell(tasks[i]);
        }
      });
    }
    for (auto& t : pool) t.join();
    if (sink) {
      for (const auto& r : records) sink(r);  // single-writer, deterministic order
    }
  }
  return records;
}

CvSummary cv_gap_analysis(std::span<const RunRecord> records) {
  const Grouped grouped = group(records);
  CvSummary summary;
  std::vector<double> problem_gap_means;
  std::vector<double> problem_rel_medians;
  std::vector<double> problem_log_ratios;

  for (const auto& [problem, algos] : grouped) {
    std::size_t reps = SIZE_MAX;
    for (const auto& [algorithm, cell] : algos) {
      reps = std::min(reps, cell.runtimes.size());
    }
    if (reps < 2) {
      throw std::invalid_argument("cv_gap_analysis: problem " + problem +
                                  " needs >= 2 records per algorithm");
    }
    CvProblem cv;
    cv.problem = problem;
    for (std::size_t fold = 0; fold < reps; ++fold) {
      // compatibility from training reps only
      std::vector<std::pair<std::string, const Cell*>> compatible;
      for (const auto& [algorithm, cell] : algos) {
        double quality_sum = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
          if (r != fold) quality_sum += cell.qualities[r];
        }
        if (quality_sum / static_cast<double>(reps - 1) > 0.5) {
          compatible.emplace_back(algorithm, &cell);
        }
      }
      if (compatible.empty()) continue;

      std::string predicted;
      double predicted_median = 0.0;
      for (const auto& [algorithm, cell] : compatible) {
        std::vector<double> train;
        for (std::size_t r = 0; r < reps; ++r) {
          if (r != fold) train.push_back(clamped(cell->runtimes[r]));
        }
        const double med = median_of(std::move(train));
        if (predicted.empty() || med < predicted_median) {
          predicted = algorithm;
          predicted_median = med;
        }
      }

      std::string best;
      double best_runtime = 0.0;
      double predicted_runtime = 0.0;
      for (const auto& [algorithm, cell] : compatible) {
        const double held_out = clamped(cell->runtimes[fold]);
        if (algorithm == predicted) predicted_runtime = held_out;
        if (best.empty() || held_out < best_runtime) {
          best = algorithm;
          best_runtime = held_out;
        }
      }

      CvFold f;
      f.rep = static_cast<int>(fold);
      f.predicted = predicted;
      f.best = best;
      f.gap_abs = predicted_runtime - best_runtime;
      f.gap_rel = f.gap_abs / best_runtime;
      f.ratio = predicted_runtime / best_runtime;
      cv.folds.push_back(std::move(f));
    }
    if (cv.folds.empty()) {
      summary.excluded.push_back(problem);
      continue;
    }
    std::vector<double> gaps;
    std::vector<double> rels;
    double log_ratio_sum = 0.0;
    for (const auto& f : cv.folds) {
      gaps.push_back(f.gap_abs);
      rels.push_back(f.gap_rel);
      log_ratio_sum += std::log(f.ratio);
    }
    cv.mean_gap_abs = mean_of(gaps);
    cv.median_gap_rel = median_of(std::move(rels));
    cv.geo_mean_ratio = std::exp(log_ratio_sum / static_cast<double>(cv.folds.size()));
    problem_gap_means.push_back(cv.mean_gap_abs);
    problem_rel_medians.push_back(cv.median_gap_rel);
    problem_log_ratios.push_back(std::log(cv.geo_mean_ratio));
    summary.per_problem.push_back(std::move(cv));
  }

  if (!problem_gap_means.empty()) {
    summary.mean_gap_abs = mean_of(problem_gap_means);
    summary.median_gap_rel = median_of(std::move(problem_rel_medians));
    summary.geometric_mean_ratio = std::exp(mean_of(problem_log_ratios));
  }
  return summary;
}

std::pair<double, double> bootstrap_ci(std::span<const double> gaps, int resamples,
                                       double confidence, Rng& rng) {
  if (gaps.size() < 2) throw std::invalid_argument("bootstrap_ci: need >= 2 gap values");
  if (resamples < 1000) throw std::invalid_argument("bootstrap_ci: need >= 1000 resamples");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("bootstrap_ci: confidence must be in (0, 1)");
  }
  const std::size_t n = gaps.size();
  std::vector<double> means(static_cast<std::size_t>(resamples));
  for (auto& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += gaps[rng.uniform_below(n)];
    m = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(means.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, means.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return means[lo] * (1.0 - frac) + means[hi] * frac;
  };
  const double tail = (1.0 - confidence) / 2.0;
  return {quantile(tail), quantile(1.0 - tail)};
}

EntropyResult conditional_entropy(std::span<const RunRecord> records) {
  const Grouped grouped = group(records);
  EntropyResult out;
  std::vector<double> bits;
  for (const auto& [problem, algos] : grouped) {
    std::vector<std::pair<std::string, const Cell*>> compatible;
    std::size_t reps = SIZE_MAX;
    for (const auto& [algorithm, cell] : algos) {
      if (mean_quality(cell) > 0.5) compatible.emplace_back(algorithm, &cell);
      reps = std::min(reps, cell.runtimes.size());
    }
    if (compatible.empty()) {
      out.excluded.push_back(problem);
      continue;
    }
    if (reps < 2) {
      throw std::invalid_argument("conditional_entropy: problem " + problem +
                                  " needs >= 2 repetitions per algorithm");
    }
    std::map<std::string, int> wins;
    for (std::size_t r = 0; r < reps; ++r) {
      const std::string* winner = nullptr;
      double best = 0.0;
      for (const auto& [algorithm, cell] : compatible) {
        const double runtime = clamped(cell->runtimes[r]);
        if (winner == nullptr || runtime < best) {
          winner = &algorithm;
          best = runtime;
        }
      }
      ++wins[*winner];
    }
    double h = 0.0;
    for (const auto& [algorithm, count] : wins) {
      const double p = static_cast<double>(count) / static_cast<double>(reps);
      if (p > 0.0) h -= p * std::log2(p);
    }
    out.per_problem_bits[problem] = h;
    bits.push_back(h);
  }
  out.mean_bits = mean_of(bits);
  return out;
}

CompatibilityReport compatibility_and_ratios(std::span<const RunRecord> records) {
  static const double kBuckets[] = {1, 1.5, 2, 3, 5, 10, 20, 50, 100, 200, 500, 1000};
  const Grouped grouped = group(records);
  CompatibilityReport out;
  for (const auto& [problem, algos] : grouped) {
    std::vector<double> means;
    for (const auto& [algorithm, cell] : algos) {
      if (mean_quality(cell) > 0.5) {
        std::vector<double> clamped_runtimes;
        for (const double rt : cell.runtimes) clamped_runtimes.push_back(clamped(rt));
        means.push_back(mean_of(clamped_runtimes));
      }
    }
    out.counts[problem] = static_cast<int>(means.size());
    if (means.empty()) continue;
    const double best = *std::min_element(means.begin(), means.end());
    for (const double m : means) out.ratios.push_back(m / best);
  }
  for (const double edge : kBuckets) out.histogram.emplace_back(edge, 0);
  for (const double ratio : out.ratios) {
    std::size_t bucket = 0;
    for (std::size_t i = 0; i < std::size(kBuckets); ++i) {
      if (ratio >= kBuckets[i]) bucket = i;
    }
    ++out.histogram[bucket].second;
  }
  return out;
}

void export_heatmap(std::span<const RunRecord> records, std::ostream& os) {
  const Grouped grouped = group(records);
  std::set<std::string> algorithms;
  for (const auto& [problem, algos] : grouped) {
    for (const auto& [algorithm, cell] : algos) algorithms.insert(algorithm);
  }
  os << "problem";
  for (const auto& a : algorithms) os << ',' << a;
  os << '\n';
  for (const auto& [problem, algos] : grouped) {
    os << problem;
    for (const auto& a : algorithms) {
      os << ',';
      const auto it = algos.find(a);
      if (it == algos.end() || mean_quality(it->second) <= 0.5) continue;  // blank cell
      std::vector<double> clamped_runtimes;
      for (const double rt : it->second.runtimes) clamped_runtimes.push_back(clamped(rt));
      os << std::log10(mean_of(clamped_runtimes));
    }
    os << '\n';
  }
}

void export_ratio_histogram(const CompatibilityReport& report, std::ostream& os) {
  os << "bucket_lo,bucket_hi,count\n";
  for (std::size_t i = 0; i < report.histogram.size(); ++i) {
    const double lo = report.histogram[i].first;
    if (i + 1 < report.histogram.size()) {
      os << lo << ',' << report.histogram[i + 1].first << ',' << report.histogram[i].second
         << '\n';
    } else {
      os << lo << ",inf," << report.histogram[i].second << '\n';
    }
  }
}

std::string analysis_report(std::span<const RunRecord> records, const AnalyzeOptions& options) {
  if (records.empty()) throw DataError("analysis_report: no records");
  const Grouped grouped = group(records);

  json problem_stats = json::object();
  std::map<std::string, std::vector<double>> by_problem;
  std::map<std::string, std::vector<double>> by_algorithm;
  for (const auto& r : records) {
    by_problem[r.problem].push_back(r.runtime_s);
    by_algorithm[r.algorithm].push_back(r.runtime_s);
  }
  for (const auto& [problem, runtimes] : by_problem) {
    problem_stats[problem] = {
        {"mean_runtime_s", mean_of(runtimes)},
        {"std_runtime_s", std_of(runtimes)},
        {"min_runtime_s", *std::min_element(runtimes.begin(), runtimes.end())},
        {"max_runtime_s", *std::max_element(runtimes.begin(), runtimes.end())}};
  }
  json algorithm_stats = json::object();
  for (const auto& [algorithm, runtimes] : by_algorithm) {
    algorithm_stats[algorithm] = {{"mean_runtime_s", mean_of(runtimes)},
                                  {"median_runtime_s", median_of(runtimes)},
                                  {"std_runtime_s", std_of(runtimes)}};
  }

  // CV folds and per-repetition winners need at least two reps per algorithm;
  // with fewer, those sections report null rather than fabricated values.
  std::size_t min_reps = SIZE_MAX;
  for (const auto& [problem, algos] : grouped) {
    for (const auto& [algorithm, cell] : algos) {
      min_reps = std::min(min_reps, cell.runtimes.size());
    }
  }
  const bool cv_possible = min_reps >= 2;

  json cv_per_problem = json::array();
  json cv_gap_abs;
  json cv_gap_relative;
  json geometric_mean_ratio;
  json bootstrap = json::array({nullptr, nullptr});
  json entropy_bits;
  json per_problem_entropy = json::object();
  std::vector<std::string> excluded;
  if (cv_possible) {
    const CvSummary cv = cv_gap_analysis(records);
    std::vector<double> problem_gaps;
    for (const auto& p : cv.per_problem) {
      cv_per_problem.push_back({{"problem", p.problem},
                                {"mean_gap_abs_s", p.mean_gap_abs},
                                {"median_gap_rel_pct", 100.0 * p.median_gap_rel},
                                {"geo_mean_ratio", p.geo_mean_ratio},
                                {"folds", p.folds.size()}});
      problem_gaps.push_back(p.mean_gap_abs);
    }
    cv_gap_abs = cv.mean_gap_abs;
    cv_gap_relative = 100.0 * cv.median_gap_rel;
    geometric_mean_ratio = cv.geometric_mean_ratio;
    excluded = cv.excluded;
    if (problem_gaps.size() >= 2) {
      Rng rng(options.bootstrap_seed);
      const auto ci =
          bootstrap_ci(problem_gaps, options.bootstrap_resamples, options.confidence, rng);
      bootstrap = json::array({ci.first, ci.second});
    }
    const EntropyResult entropy = conditional_entropy(records);
    entropy_bits = entropy.mean_bits;
    per_problem_entropy = entropy.per_problem_bits;
    for (const auto& problem : entropy.excluded) {
      if (std::find(excluded.begin(), excluded.end(), problem) == excluded.end()) {
        excluded.push_back(problem);
      }
    }
  }

  const CompatibilityReport compat = compatibility_and_ratios(records);
  json histogram = json::array();
  for (std::size_t i = 0; i < compat.histogram.size(); ++i) {
    json bucket = {{"bucket_lo", compat.histogram[i].first},
                   {"count", compat.histogram[i].second}};
    if (i + 1 < compat.histogram.size()) {
      bucket["bucket_hi"] = compat.histogram[i + 1].first;
    }
    histogram.push_back(std::move(bucket));
  }

  json report{
      {"total_problems", by_problem.size()},
      {"total_algorithms", by_algorithm.size()},
      {"total_runs", records.size()},
      {"problem_stats", std::move(problem_stats)},
      {"algorithm_stats", std::move(algorithm_stats)},
      {"cv_gap_abs", cv_gap_abs},
      {"cv_gap_relative", cv_gap_relative},
      {"geometric_mean_ratio", geometric_mean_ratio},
      {"bootstrap_ci", std::move(bootstrap)},
      {"cv_per_problem", std::move(cv_per_problem)},
      {"excluded_problems", excluded},
      {"compatibility_counts", compat.counts},
      {"conditional_entropy_bits", entropy_bits},
      {"per_problem_entropy_bits", std::move(per_problem_entropy)},
      {"ratio_histogram", std::move(histogram)},
      {"aggregation_note",
       "median relative improvement = median over problems of per-problem median-over-folds"},
      {"analysis",
       {{"bootstrap_resamples", options.bootstrap_resamples},
        {"confidence", options.confidence},
        {"bootstrap_seed", options.bootstrap_seed},
        {"runtime_floor_s", kRuntimeFloor},
        {"cv_included", cv_possible}}}};
  return report.dump(2);
}

}  // namespace algoselect
