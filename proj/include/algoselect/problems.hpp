#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "algoselect/comb.hpp"
#include "algoselect/rng.hpp"

namespace algoselect {

enum class Category {
  Sorting,
  Graphs,
  LinearOpt,
  NonconvexOpt,
  IntegerOpt,
  SearchSat,
  Numerical,
};
constexpr std::size_t kCategoryCount = 7;

// Fixed feature layout, d = 12:
//   [0..6]  category one-hot
//   [7]     log2(size)
//   [8]     density (graphs) or 0
//   [9]     sortedness: fraction of adjacent non-inversions (arrays) or 0
//   [10]    condition proxy: log10(max/min row norm) (linear systems) or 0
//   [11]    constraint ratio (LP, knapsack, SAT) or 0
constexpr std::size_t kFeatureDim = 12;

enum class Style { Systematic, Randomized };

struct ProblemSpec {
  std::string problem;
  Category category = Category::Sorting;
  std::map<std::string, double> params;  // named size parameters
  std::uint64_t seed = 0;
};

// ---------------- payloads ----------------

struct SortPayload {
  std::vector<std::int64_t> values;
};

struct SelectPayload {
  std::vector<std::int64_t> values;
  std::size_t k = 0;  // 0-based order statistic to find
};

struct WeightedEdge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  double w = 0.0;
};

struct GraphPayload {
  std::size_t n = 0;
  std::vector<WeightedEdge> edges;
  std::uint32_t source = 0;
  std::uint32_t target = 0;  // shortest path only
};

struct LinearSystemPayload {
  std::size_t n = 0;
  std::vector<double> a;  // row-major n x n
  std::vector<double> b;
};

// max c.x subject to A x <= b, x >= 0; entries of A positive, b positive.
struct LpPayload {
  std::size_t nvars = 0;
  std::size_t ncons = 0;
  std::vector<double> c;
  std::vector<double> a;  // row-major ncons x nvars
  std::vector<double> b;
};

// Shifted Rastrigin over [-box, box]^dim; global minimum 0 at the shift.
struct NonconvexPayload {
  std::size_t dim = 0;
  std::vector<double> shift;
  double box = 5.0;
};

struct KnapsackPayload {
  std::vector<std::int64_t> weights;
  std::vector<std::int64_t> values;
  std::int64_t capacity = 0;
};

struct SatPayload {
  std::size_t nvars = 0;
  std::vector<std::array<std::int32_t, 3>> clauses;  // 1-based vars, sign = polarity
};

// integral of exp(-decay x^2) cos(freq x) over [lo, hi]
struct IntegrationPayload {
  double lo = 0.0;
  double hi = 0.0;
  double freq = 1.0;
  double decay = 1.0;
  std::size_t panels = 0;      // systematic solver's Simpson panels
  std::size_t mc_samples = 0;  // randomized solver's sample count
};

using Payload = std::variant<SortPayload, SelectPayload, GraphPayload, LinearSystemPayload,
                             LpPayload, NonconvexPayload, KnapsackPayload, SatPayload,
                             IntegrationPayload>;

struct ProblemInstance {
  std::string problem;
  Category category = Category::Sorting;
  Payload payload;
  FeatureVector features;
};

// ---------------- solutions ----------------

struct SortSolution {
  std::vector<std::int64_t> values;
};
struct SelectSolution {
  std::int64_t value = 0;
};
struct PathSolution {
  bool found = false;
  std::vector<std::uint32_t> nodes;  // source ... target
};
struct TreeSolution {
  std::vector<std::size_t> edge_indices;  // indexes into GraphPayload::edges
};
struct VectorSolution {
  std::vector<double> x;  // linear system / LP / nonconvex point
};
struct KnapsackSolution {
  std::vector<std::uint8_t> take;
};
struct SatSolution {
  std::vector<std::uint8_t> assignment;  // per-variable truth value
};
struct ValueSolution {
  double value = 0.0;
};

using Solution = std::variant<SortSolution, SelectSolution, PathSolution, TreeSolution,
                              VectorSolution, KnapsackSolution, SatSolution, ValueSolution>;

struct SolveOutcome {
  double runtime_s = 0.0;
  double quality = 0.0;
  std::string summary;
  bool flagged = false;
};

struct AlgorithmEntry {
  std::string algorithm;
  std::string problem;
  Style style = Style::Systematic;
};

struct ManifestEntry {
  ProblemSpec spec_template;  // default sizes; seed filled per run
  AlgorithmEntry systematic;
  AlgorithmEntry randomized;
};

// The fixed 10-problem roster with one systematic/randomized pair each.
const std::vector<ManifestEntry>& suite_manifest();

const ManifestEntry& manifest_entry(const std::string& problem);

// Registry addressing: "problem/style" -> entry, e.g. "sorting/systematic".
AlgorithmEntry registry_lookup(const std::string& key);

ProblemInstance generate(const ProblemSpec& spec);

FeatureVector extract_features(const std::string& problem, Category category,
                               const Payload& payload);

// Times the named solver on the instance; runtime covers the solve call only.
// A run past the budget reports quality 0 and runtime = budget.
SolveOutcome solve(const AlgorithmEntry& entry, const ProblemInstance& instance, Rng& rng,
                   double time_budget_s);

// Quality of an arbitrary candidate solution, judged by the problem's own
// checker (independent of any solver).
double solution_quality(const ProblemInstance& instance, const Solution& solution);

// Raw solver access (no timing, no quality) for tests and tooling.
Solution run_solver(const AlgorithmEntry& entry, const ProblemInstance& instance, Rng& rng,
                    double time_budget_s);

std::string category_name(Category c);
std::string payload_to_json(const Payload& payload);  // canonical form, determinism checks

}  // namespace algoselect
