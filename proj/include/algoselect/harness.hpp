#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "algoselect/comb.hpp"
#include "algoselect/problems.hpp"
#include "algoselect/rng.hpp"

namespace algoselect {

// Thrown on malformed persisted data (JSONL, configs); the CLI maps it to
// exit code 2.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunRecord {
  std::string problem;
  std::string algorithm;
  int rep = 0;
  std::uint64_t seed = 0;
  double runtime_s = 0.0;
  double quality = 0.0;
  FeatureVector features;
  bool flagged = false;
};

// JSONL wire form, keys exactly: problem, algorithm, rep, seed, runtime_s,
// quality, features, flagged.
std::string record_to_jsonl(const RunRecord& record);
RunRecord record_from_jsonl(const std::string& line);
void write_jsonl(std::ostream& os, std::span<const RunRecord> records);
std::vector<RunRecord> read_jsonl(std::istream& is);  // DataError names the bad line

struct MatrixConfig {
  std::vector<std::string> problems;  // empty = full manifest
  int repetitions = 7;
  std::uint64_t base_seed = 42;
  double time_budget_s = 2.0;
  int workers = 1;
  bool extended = false;  // run every algorithm against every problem
};

std::string matrix_config_to_json(const MatrixConfig& config);
MatrixConfig matrix_config_from_json(const std::string& text);

// Derived per-cell seed; stable across runs and platforms.
std::uint64_t cell_seed(std::uint64_t base_seed, const std::string& problem,
                        const std::string& algorithm, int rep);

using RecordSink = std::function<void(const RunRecord&)>;

// Runs the (problems x algorithms x repetitions) grid. Solver exceptions
// never abort the matrix: the cell is recorded flagged with quality 0 and
// runtime = budget. The sink, when given, sees records as they are emitted.
std::vector<RunRecord> run_matrix(const MatrixConfig& config, const RecordSink& sink = nullptr);

struct CvFold {
  int rep = 0;
  std::string predicted;
  std::string best;
  double gap_abs = 0.0;  // seconds, >= 0
  double gap_rel = 0.0;  // fraction of the best runtime
  double ratio = 1.0;    // predicted / best, >= 1
};

struct CvProblem {
  std::string problem;
  std::vector<CvFold> folds;
  double mean_gap_abs = 0.0;
  double median_gap_rel = 0.0;
  double geo_mean_ratio = 1.0;
};

struct CvSummary {
  std::vector<CvProblem> per_problem;
  std::vector<std::string> excluded;  // problems with no compatible algorithm
  double mean_gap_abs = 0.0;
  double median_gap_rel = 0.0;  // median over problems, fraction
  double geometric_mean_ratio = 1.0;
};

// Leave-one-repetition-out gap analysis. The predictor picks the compatible
// algorithm (training mean quality > 0.5) with the lowest training-median
// runtime; the fold gap compares its held-out runtime against the held-out
// best among compatible algorithms.
CvSummary cv_gap_analysis(std::span<const RunRecord> records);

// Percentile bootstrap of the mean gap. Deterministic given the rng.
std::pair<double, double> bootstrap_ci(std::span<const double> gaps, int resamples,
                                       double confidence, Rng& rng);

struct EntropyResult {
  double mean_bits = 0.0;
  std::map<std::string, double> per_problem_bits;
  std::vector<std::string> excluded;
};

// H(A|P): per-repetition runtime winners among compatible algorithms define
// P(a|p); entropy in bits, averaged uniformly over problems.
EntropyResult conditional_entropy(std::span<const RunRecord> records);

struct CompatibilityReport {
  std::map<std::string, int> counts;  // compatible algorithms per problem
  std::vector<double> ratios;         // mean runtime / best mean runtime, compatible only
  // histogram over the fixed bucket edges 1,1.5,2,3,5,10,20,50,100,200,500,1000
  std::vector<std::pair<double, int>> histogram;
};

CompatibilityReport compatibility_and_ratios(std::span<const RunRecord> records);

// CSV heatmap of mean log10 runtimes; rows = problems, cols = algorithms,
// blank cells = never run or failed the quality filter.
void export_heatmap(std::span<const RunRecord> records, std::ostream& os);
void export_ratio_histogram(const CompatibilityReport& report, std::ostream& os);

struct AnalyzeOptions {
  int bootstrap_resamples = 10000;
  double confidence = 0.95;
  std::uint64_t bootstrap_seed = 17;
};

// Full report as a JSON document (string form); field names are stable.
std::string analysis_report(std::span<const RunRecord> records, const AnalyzeOptions& options);

// Runtimes below this floor are clamped before ratios and logs.
constexpr double kRuntimeFloor = 1e-7;

}  // namespace algoselect
