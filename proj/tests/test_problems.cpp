#include <cmath>
#include <set>

#include "algoselect/problems.hpp"
#include "doctest.h"

using namespace algoselect;

namespace {

ProblemSpec spec_of(const std::string& problem, std::uint64_t seed) {
  ProblemSpec s = manifest_entry(problem).spec_template;
  s.seed = seed;
  return s;
}

ProblemSpec small_spec(const std::string& problem, std::uint64_t seed) {
  ProblemSpec s = spec_of(problem, seed);
  // size-minimal-ish instances for smoke runs
  if (s.params.count("n")) s.params["n"] = problem == "shortest_path" || problem == "mst" ? 12 : 16;
  if (s.params.count("density")) s.params["density"] = 0.6;
  if (s.params.count("nvars")) s.params["nvars"] = problem == "sat" ? 12 : 3;
  if (s.params.count("ncons")) s.params["ncons"] = 4;
  if (s.params.count("dim")) s.params["dim"] = 3;
  if (s.params.count("panels")) s.params["panels"] = 64;
  if (s.params.count("mc_samples")) s.params["mc_samples"] = 4000;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("problems");

TEST_CASE("manifest has ten problems with one pair each") {
  const auto& manifest = suite_manifest();
  CHECK(manifest.size() == 10);
  std::set<std::string> problems;
  std::set<std::string> algorithms;
  for (const auto& e : manifest) {
    problems.insert(e.spec_template.problem);
    algorithms.insert(e.systematic.algorithm);
    algorithms.insert(e.randomized.algorithm);
    CHECK(e.systematic.style == Style::Systematic);
    CHECK(e.randomized.style == Style::Randomized);
    CHECK(e.systematic.problem == e.spec_template.problem);
    CHECK(e.randomized.problem == e.spec_template.problem);
  }
  CHECK(problems.size() == 10);
  CHECK(algorithms.size() == 20);
}

TEST_CASE("registry lookups address solvers as problem/style") {
  CHECK(registry_lookup("sorting/systematic").algorithm == "merge_sort");
  CHECK(registry_lookup("sorting/randomized").algorithm == "quicksort_random");
  CHECK(registry_lookup("sat/randomized").algorithm == "walksat");
  CHECK_THROWS_AS(registry_lookup("sorting"), std::invalid_argument);
  CHECK_THROWS_AS(registry_lookup("sorting/other"), std::invalid_argument);
  CHECK_THROWS_AS(registry_lookup("nosuch/systematic"), std::invalid_argument);
}

TEST_CASE("generate validates the problem id and size parameters") {
  CHECK_THROWS_AS(generate(ProblemSpec{"nosuch", Category::Sorting, {}, 1}),
                  std::invalid_argument);
  ProblemSpec bad = spec_of("sorting", 1);
  bad.params["n"] = 0.0;
  CHECK_THROWS_AS(generate(bad), std::invalid_argument);
}

TEST_CASE("degenerate sorting instance has one element") {
  ProblemSpec s = spec_of("sorting", 9);
  s.params["n"] = 1;
  const auto instance = generate(s);
  CHECK(std::get<SortPayload>(instance.payload).values.size() == 1);
  CHECK(instance.features[7] == doctest::Approx(0.0));  // log2(1)
}

TEST_CASE("generation is byte-deterministic per seed") {
  for (const auto& e : suite_manifest()) {
    const auto a = payload_to_json(generate(small_spec(e.spec_template.problem, 77)).payload);
    const auto b = payload_to_json(generate(small_spec(e.spec_template.problem, 77)).payload);
    const auto c = payload_to_json(generate(small_spec(e.spec_template.problem, 77)).payload);
    CHECK(a == b);
    CHECK(b == c);
    const auto other = payload_to_json(generate(small_spec(e.spec_template.problem, 78)).payload);
    CHECK(a != other);
  }
}

TEST_CASE("graph edge count stays within the binomial band") {
  ProblemSpec s = spec_of("shortest_path", 7);
  s.params["n"] = 20;
  s.params["density"] = 0.5;
  const auto instance = generate(s);
  const auto& g = std::get<GraphPayload>(instance.payload);
  // independent recount straight off the payload
  std::size_t recount = 0;
  for (const auto& e : g.edges) {
    CHECK(e.u < e.v);
    ++recount;
  }
  CHECK(recount == g.edges.size());
  const double mean = 0.5 * 190.0;
  const double sigma = std::sqrt(190.0 * 0.25);
  CHECK(std::abs(static_cast<double>(recount) - mean) < 3.0 * sigma);
}

TEST_CASE("sortedness feature matches its definition") {
  ProblemSpec s = spec_of("sorting", 3);
  s.params["n"] = 50;
  auto instance = generate(s);
  auto& values = std::get<SortPayload>(instance.payload).values;

  std::sort(values.begin(), values.end());
  auto f = extract_features("sorting", Category::Sorting, instance.payload);
  CHECK(f[9] == doctest::Approx(1.0));

  std::reverse(values.begin(), values.end());
  f = extract_features("sorting", Category::Sorting, instance.payload);
  CHECK(f[9] == doctest::Approx(0.0));

  // uniform permutations sit near 1/2 in expectation
  double total = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ProblemSpec rs = spec_of("sorting", 1000 + seed);
    rs.params["n"] = 1000;
    const auto ri = generate(rs);
    total += ri.features[9];
  }
  CHECK(std::abs(total / 50.0 - 0.5) < 0.05);
}

TEST_CASE("feature layout: one-hot category plus flat numeric slots") {
  const auto instance = generate(spec_of("sat", 5));
  REQUIRE(instance.features.size() == kFeatureDim);
  double onehot = 0.0;
  for (std::size_t i = 0; i < kCategoryCount; ++i) onehot += instance.features[i];
  CHECK(onehot == doctest::Approx(1.0));
  CHECK(instance.features[static_cast<std::size_t>(Category::SearchSat)] == 1.0);
  CHECK(instance.features[7] == doctest::Approx(std::log2(150.0)));
  CHECK(instance.features[11] == doctest::Approx(3.0));  // clause ratio
  CHECK(instance.features[8] == 0.0);
  CHECK(instance.features[9] == 0.0);
}

TEST_CASE("every pair smoke-runs on a small instance and reports quality") {
  Rng rng(11);
  for (const auto& e : suite_manifest()) {
    const auto instance = generate(small_spec(e.spec_template.problem, 21));
    for (const auto& entry : {e.systematic, e.randomized}) {
      const auto outcome = solve(entry, instance, rng, 5.0);
      CHECK(std::isfinite(outcome.runtime_s));
      CHECK(outcome.runtime_s >= 0.0);
      CHECK(outcome.quality >= 0.0);
      CHECK(outcome.quality <= 1.0);
      CHECK_FALSE(outcome.summary.empty());
    }
  }
}

TEST_CASE("systematic solvers are rng-independent") {
  for (const auto& e : suite_manifest()) {
    const auto instance = generate(small_spec(e.spec_template.problem, 33));
    Rng r1(1);
    Rng r2(999);
    const auto a = run_solver(e.systematic, instance, r1, 5.0);
    const auto b = run_solver(e.systematic, instance, r2, 5.0);
    CHECK(solution_quality(instance, a) == solution_quality(instance, b));
  }
}

TEST_CASE("at least one of each pair is compatible at default sizes") {
  Rng rng(2);
  for (const auto& e : suite_manifest()) {
    const auto instance = generate(spec_of(e.spec_template.problem, 4242));
    const double q_sys = solve(e.systematic, instance, rng, 5.0).quality;
    const double q_ran = solve(e.randomized, instance, rng, 5.0).quality;
    CHECK(std::max(q_sys, q_ran) > 0.5);
  }
}

TEST_CASE("checkers score an injected correct answer as 1") {
  SUBCASE("sorting") {
    const auto instance = generate(small_spec("sorting", 8));
    auto sorted = std::get<SortPayload>(instance.payload).values;
    std::sort(sorted.begin(), sorted.end());
    CHECK(solution_quality(instance, SortSolution{sorted}) == doctest::Approx(1.0));
  }
  SUBCASE("selection") {
    const auto instance = generate(small_spec("selection", 8));
    const auto& p = std::get<SelectPayload>(instance.payload);
    auto copy = p.values;
    std::sort(copy.begin(), copy.end());
    CHECK(solution_quality(instance, SelectSolution{copy[p.k]}) == doctest::Approx(1.0));
  }
  SUBCASE("shortest path via the solver's optimal route") {
    const auto instance = generate(small_spec("shortest_path", 8));
    Rng rng(1);
    const auto sol = run_solver(registry_lookup("shortest_path/systematic"), instance, rng, 5.0);
    CHECK(solution_quality(instance, sol) == doctest::Approx(1.0));
  }
  SUBCASE("mst via the exact solver") {
    const auto instance = generate(small_spec("mst", 8));
    Rng rng(1);
    const auto sol = run_solver(registry_lookup("mst/systematic"), instance, rng, 5.0);
    CHECK(solution_quality(instance, sol) == doctest::Approx(1.0));
  }
  SUBCASE("nonconvex optimum is the shift itself") {
    const auto instance = generate(small_spec("nonconvex_opt", 8));
    const auto& p = std::get<NonconvexPayload>(instance.payload);
    CHECK(solution_quality(instance, VectorSolution{p.shift}) == doctest::Approx(1.0));
  }
  SUBCASE("sat planted assignment satisfies everything") {
    const auto instance = generate(small_spec("sat", 8));
    Rng rng(1);
    // dpll finds a satisfying assignment on the planted instance
    const auto sol = run_solver(registry_lookup("sat/systematic"), instance, rng, 5.0);
    CHECK(solution_quality(instance, sol) == doctest::Approx(1.0));
  }
  SUBCASE("integration true value") {
    const auto instance = generate(small_spec("integration", 8));
    Rng rng(1);
    // a fine Simpson estimate agrees with the checker's reference
    ProblemSpec fine = small_spec("integration", 8);
    fine.params["panels"] = 20000;
    const auto fine_instance = generate(fine);
    const auto est =
        run_solver(registry_lookup("integration/systematic"), fine_instance, rng, 5.0);
    CHECK(solution_quality(instance, est) == doctest::Approx(1.0));
  }
  SUBCASE("wrong-shaped solutions score 0") {
    const auto instance = generate(small_spec("sorting", 8));
    CHECK(solution_quality(instance, ValueSolution{1.0}) == 0.0);
    auto unsorted = std::get<SortPayload>(instance.payload).values;
    unsorted[0] = unsorted[0] + 1;  // breaks the multiset
    std::sort(unsorted.begin(), unsorted.end());
    CHECK(solution_quality(instance, SortSolution{unsorted}) == 0.0);
  }
}

TEST_CASE("knapsack greedy quality is achieved/optimal against brute force") {
  // n = 15 instances; quality oracle cross-checked by exhaustive enumeration
  Rng rng(5);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ProblemSpec s = spec_of("knapsack", 6000 + seed);
    s.params["n"] = 15;
    const auto instance = generate(s);
    const auto& p = std::get<KnapsackPayload>(instance.payload);

    std::int64_t brute_best = 0;
    for (std::uint32_t mask = 0; mask < (1u << 15); ++mask) {
      std::int64_t w = 0;
      std::int64_t v = 0;
      for (int i = 0; i < 15; ++i) {
        if (mask & (1u << i)) {
          w += p.weights[i];
          v += p.values[i];
        }
      }
      if (w <= p.capacity) brute_best = std::max(brute_best, v);
    }

    const auto dp_sol = run_solver(registry_lookup("knapsack/systematic"), instance, rng, 5.0);
    const auto& take = std::get<KnapsackSolution>(dp_sol).take;
    std::int64_t dp_value = 0;
    for (int i = 0; i < 15; ++i) {
      if (take[i]) dp_value += p.values[i];
    }
    CHECK(dp_value == brute_best);
    CHECK(solution_quality(instance, dp_sol) == doctest::Approx(1.0));

    const auto greedy = run_solver(registry_lookup("knapsack/randomized"), instance, rng, 5.0);
    const auto& gtake = std::get<KnapsackSolution>(greedy).take;
    std::int64_t gvalue = 0;
    for (int i = 0; i < 15; ++i) {
      if (gtake[i]) gvalue += p.values[i];
    }
    CHECK(solution_quality(instance, greedy) ==
          doctest::Approx(static_cast<double>(gvalue) / static_cast<double>(brute_best)));
  }
}

TEST_CASE("walksat on a tiny unsatisfiable formula reports a fraction below 1") {
  SatPayload p;
  p.nvars = 1;
  p.clauses = {{1, 1, 1}, {-1, -1, -1}};
  ProblemInstance instance;
  instance.problem = "sat";
  instance.category = Category::SearchSat;
  instance.payload = p;
  instance.features = extract_features("sat", Category::SearchSat, instance.payload);
  Rng rng(3);
  const auto entry = registry_lookup("sat/randomized");
  const auto sol = run_solver(entry, instance, rng, 1.0);
  const double q = solution_quality(instance, sol);
  CHECK(q == doctest::Approx(0.5));
}

TEST_CASE("budget exhaustion reports quality 0 and runtime = budget") {
  const auto instance = generate(spec_of("sorting", 31));
  Rng rng(1);
  const auto outcome = solve(registry_lookup("sorting/systematic"), instance, rng, 1e-9);
  CHECK(outcome.runtime_s == doctest::Approx(1e-9));
  CHECK(outcome.quality == 0.0);
}

TEST_CASE("solving with a mismatched entry is an error") {
  const auto instance = generate(small_spec("sorting", 31));
  Rng rng(1);
  CHECK_THROWS_AS(solve(registry_lookup("sat/systematic"), instance, rng, 1.0),
                  std::invalid_argument);
}

TEST_SUITE_END();
