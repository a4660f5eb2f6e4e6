#include <cmath>
#include <sstream>

#include "algoselect/harness.hpp"
#include "doctest.h"

using namespace algoselect;

namespace {

RunRecord make_record(const std::string& problem, const std::string& algorithm, int rep,
                      double runtime, double quality = 1.0) {
  RunRecord r;
  r.problem = problem;
  r.algorithm = algorithm;
  r.rep = rep;
  r.seed = cell_seed(1, problem, algorithm, rep);
  r.runtime_s = runtime;
  r.quality = quality;
  r.features = FeatureVector(kFeatureDim, 0.0);
  return r;
}

// fixed runtimes per (algorithm, rep): rows of per-rep runtimes
std::vector<RunRecord> synthetic_matrix(const std::string& problem,
                                        const std::vector<std::string>& algorithms,
                                        const std::vector<std::vector<double>>& runtimes,
                                        const std::vector<double>& qualities = {}) {
  std::vector<RunRecord> records;
  for (std::size_t a = 0; a < algorithms.size(); ++a) {
    for (std::size_t rep = 0; rep < runtimes[a].size(); ++rep) {
      const double q = qualities.empty() ? 1.0 : qualities[a];
      records.push_back(
          make_record(problem, algorithms[a], static_cast<int>(rep), runtimes[a][rep], q));
    }
  }
  return records;
}

}  // namespace

TEST_SUITE_BEGIN("harness");

TEST_CASE("run_matrix grid arithmetic") {
  MatrixConfig config;
  config.repetitions = 1;
  config.problems = {"linear_program"};
  config.base_seed = 7;
  const auto two = run_matrix(config);
  CHECK(two.size() == 2);

  config.repetitions = 2;
  config.problems = {"sorting"};
  std::size_t sunk = 0;
  const auto four = run_matrix(config, [&](const RunRecord&) { ++sunk; });
  CHECK(four.size() == 4);
  CHECK(sunk == 4);
  CHECK_THROWS_AS(run_matrix(MatrixConfig{{}, 0, 1, 1.0, 1, false}), std::invalid_argument);
}

TEST_CASE("extended mode crosses every algorithm with every problem") {
  MatrixConfig config;
  config.repetitions = 2;
  config.problems = {"sorting", "knapsack"};
  config.extended = true;
  config.base_seed = 3;
  const auto records = run_matrix(config);
  CHECK(records.size() == 2 * 20 * 2);  // problems x all algorithms x reps
  // mismatched pairs come back incompatible without being flagged
  int mismatched = 0;
  for (const auto& r : records) {
    const auto& home = manifest_entry(r.problem);
    const bool paired = r.algorithm == home.systematic.algorithm ||
                        r.algorithm == home.randomized.algorithm;
    if (!paired) {
      ++mismatched;
      CHECK(r.quality == 0.0);
      CHECK_FALSE(r.flagged);
    }
  }
  CHECK(mismatched == 2 * 18 * 2);
}

TEST_CASE("run_matrix reruns reproduce qualities and instance seeds") {
  MatrixConfig config;
  config.repetitions = 2;
  config.problems = {"knapsack", "integration"};
  config.base_seed = 99;
  const auto a = run_matrix(config);
  const auto b = run_matrix(config);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].seed == b[i].seed);
    CHECK(a[i].quality == b[i].quality);
    CHECK(a[i].problem == b[i].problem);
    CHECK(a[i].algorithm == b[i].algorithm);
  }
}

TEST_CASE("run_matrix with several workers covers the same cells") {
  MatrixConfig config;
  config.repetitions = 2;
  config.problems = {"linear_program", "knapsack"};
  config.base_seed = 5;
  auto serial = run_matrix(config);
  config.workers = 3;
  auto parallel = run_matrix(config);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].seed == parallel[i].seed);
    CHECK(serial[i].quality == parallel[i].quality);
  }
}

TEST_CASE("jsonl round trip preserves records exactly") {
  MatrixConfig config;
  config.repetitions = 2;
  config.problems = {"linear_program"};
  const auto records = run_matrix(config);
  std::stringstream buffer;
  write_jsonl(buffer, records);
  const auto back = read_jsonl(buffer);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].problem == records[i].problem);
    CHECK(back[i].algorithm == records[i].algorithm);
    CHECK(back[i].rep == records[i].rep);
    CHECK(back[i].seed == records[i].seed);
    CHECK(back[i].runtime_s == records[i].runtime_s);  // bit-exact through JSON
    CHECK(back[i].quality == records[i].quality);
    CHECK(back[i].features == records[i].features);
    CHECK(back[i].flagged == records[i].flagged);
  }
}

TEST_CASE("read_jsonl names the offending line") {
  std::stringstream buffer("{\"problem\": \"x\"}\n");
  CHECK_THROWS_WITH_AS(read_jsonl(buffer), doctest::Contains("line 1"), DataError);
  std::stringstream empty("");
  CHECK_THROWS_AS(read_jsonl(empty), DataError);
}

TEST_CASE("perfect selection yields zero gaps and unit ratio") {
  // algorithm a is always fastest; predictor must pick it in every fold
  const auto records = synthetic_matrix(
      "p", {"a", "b"}, {{0.001, 0.0011, 0.0012, 0.001}, {0.01, 0.011, 0.0105, 0.0099}});
  const auto cv = cv_gap_analysis(records);
  REQUIRE(cv.per_problem.size() == 1);
  const auto& p = cv.per_problem[0];
  CHECK(p.folds.size() == 4);
  for (const auto& f : p.folds) {
    CHECK(f.predicted == "a");
    CHECK(f.gap_abs == doctest::Approx(0.0));
    CHECK(f.ratio == doctest::Approx(1.0));
  }
  CHECK(p.median_gap_rel == doctest::Approx(0.0));
  CHECK(cv.geometric_mean_ratio == doctest::Approx(1.0));
  CHECK(cv.mean_gap_abs == doctest::Approx(0.0));
}

TEST_CASE("disjoint-support pair gives 0% median relative improvement") {
  const auto records =
      synthetic_matrix("p", {"fast", "slow"}, {{0.001, 0.001, 0.001}, {0.01, 0.01, 0.01}});
  const auto cv = cv_gap_analysis(records);
  REQUIRE(cv.per_problem.size() == 1);
  CHECK(cv.per_problem[0].median_gap_rel == doctest::Approx(0.0));
  CHECK(cv.median_gap_rel == doctest::Approx(0.0));
}

TEST_CASE("incompatible algorithms never get predicted and problems can be excluded") {
  // algorithm b is faster but fails the quality gate
  const auto records = synthetic_matrix("p", {"a", "b"}, {{0.01, 0.01, 0.01}, {0.001, 0.001, 0.001}},
                                        {1.0, 0.2});
  const auto cv = cv_gap_analysis(records);
  REQUIRE(cv.per_problem.size() == 1);
  for (const auto& f : cv.per_problem[0].folds) CHECK(f.predicted == "a");

  const auto nothing =
      synthetic_matrix("dead", {"a", "b"}, {{0.01, 0.01}, {0.001, 0.001}}, {0.1, 0.2});
  const auto cv2 = cv_gap_analysis(nothing);
  CHECK(cv2.per_problem.empty());
  REQUIRE(cv2.excluded.size() == 1);
  CHECK(cv2.excluded[0] == "dead");
}

TEST_CASE("cv gaps are never negative and need two reps") {
  const auto records = synthetic_matrix(
      "p", {"a", "b"}, {{0.002, 0.004, 0.003, 0.005}, {0.0035, 0.0012, 0.0045, 0.0021}});
  const auto cv = cv_gap_analysis(records);
  for (const auto& f : cv.per_problem[0].folds) {
    CHECK(f.gap_abs >= 0.0);
    CHECK(f.ratio >= 1.0);
  }
  const auto one_rep = synthetic_matrix("p", {"a", "b"}, {{0.002}, {0.0035}});
  CHECK_THROWS_AS(cv_gap_analysis(one_rep), std::invalid_argument);
}

TEST_CASE("bootstrap_ci degenerate and deterministic behavior") {
  Rng rng(1);
  const std::vector<double> same{0.25, 0.25, 0.25, 0.25};
  const auto ci = bootstrap_ci(same, 2000, 0.95, rng);
  CHECK(ci.first == doctest::Approx(0.25));
  CHECK(ci.second == doctest::Approx(0.25));

  const std::vector<double> zeros{0.0, 0.0, 0.0};
  Rng rng2(1);
  const auto zci = bootstrap_ci(zeros, 2000, 0.95, rng2);
  CHECK(zci.first == 0.0);
  CHECK(zci.second == 0.0);

  const std::vector<double> gaps{1.0, 2.0, 3.0, 4.0, 5.0};
  Rng ra(42);
  Rng rb(42);
  const auto a = bootstrap_ci(gaps, 10000, 0.95, ra);
  const auto b = bootstrap_ci(gaps, 10000, 0.95, rb);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);

  CHECK_THROWS_AS(bootstrap_ci(std::vector<double>{1.0}, 2000, 0.95, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_ci(gaps, 10, 0.95, rng), std::invalid_argument);
}

TEST_CASE("bootstrap_ci matches an independent oracle on the same draw convention") {
  const std::vector<double> gaps{1.0, 2.0, 3.0, 4.0, 5.0};
  const int resamples = 10000;
  Rng rng(123);
  const auto ci = bootstrap_ci(gaps, resamples, 0.95, rng);

  // oracle: same rng stream convention, separate implementation
  Rng oracle_rng(123);
  std::vector<double> means;
  means.reserve(resamples);
  for (int b = 0; b < resamples; ++b) {
    double total = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      total += gaps[oracle_rng.uniform_below(gaps.size())];
    }
    means.push_back(total / static_cast<double>(gaps.size()));
  }
  std::sort(means.begin(), means.end());
  const auto pick = [&](double q) {
    const double pos = q * static_cast<double>(means.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    return means[lo] * (1.0 - frac) + means[std::min(lo + 1, means.size() - 1)] * frac;
  };
  const double width = ci.second - ci.first;
  const double oracle_width = pick(0.975) - pick(0.025);
  CHECK(ci.first <= 3.0);
  CHECK(ci.second >= 3.0);
  CHECK(std::abs(width - oracle_width) <= 0.1 * oracle_width);
}

TEST_CASE("conditional entropy on constructed winner patterns") {
  SUBCASE("deterministic winner is zero bits") {
    const auto records = synthetic_matrix(
        "p", {"a", "b"}, {{0.001, 0.001, 0.001, 0.001}, {0.002, 0.002, 0.002, 0.002}});
    const auto h = conditional_entropy(records);
    CHECK(h.mean_bits == doctest::Approx(0.0));
  }
  SUBCASE("fair-coin winner is one bit") {
    const auto records = synthetic_matrix(
        "p", {"a", "b"}, {{0.001, 0.003, 0.001, 0.003}, {0.002, 0.002, 0.002, 0.002}});
    const auto h = conditional_entropy(records);
    CHECK(h.mean_bits == doctest::Approx(1.0).epsilon(0.011));
  }
  SUBCASE("0.9/0.1 winners give the binary entropy value") {
    std::vector<std::vector<double>> rts(2, std::vector<double>(10));
    for (int rep = 0; rep < 10; ++rep) {
      rts[0][rep] = rep == 0 ? 0.003 : 0.001;  // a loses exactly once
      rts[1][rep] = 0.002;
    }
    const auto records = synthetic_matrix("p", {"a", "b"}, rts);
    const auto h = conditional_entropy(records);
    const double expected = -(0.9 * std::log2(0.9) + 0.1 * std::log2(0.1));
    CHECK(h.mean_bits == doctest::Approx(expected).epsilon(1e-3));
    CHECK(h.mean_bits == doctest::Approx(0.469).epsilon(1e-2));
  }
  SUBCASE("problems with no compatible algorithm are excluded with a warning") {
    const auto records =
        synthetic_matrix("dead", {"a", "b"}, {{0.001, 0.001}, {0.002, 0.002}}, {0.0, 0.3});
    const auto h = conditional_entropy(records);
    REQUIRE(h.excluded.size() == 1);
    CHECK(h.excluded[0] == "dead");
    CHECK(h.per_problem_bits.empty());
  }
}

TEST_CASE("entropy stays within [0, log2(compatible count)]") {
  const auto records = synthetic_matrix(
      "p", {"a", "b", "c"},
      {{0.001, 0.004, 0.002, 0.009}, {0.003, 0.001, 0.008, 0.002}, {0.005, 0.005, 0.001, 0.001}});
  const auto h = conditional_entropy(records);
  CHECK(h.per_problem_bits.at("p") >= 0.0);
  CHECK(h.per_problem_bits.at("p") <= std::log2(3.0));
}

TEST_CASE("compatibility counts and runtime ratios") {
  SUBCASE("single compatible algorithm everywhere gives all-unit ratios") {
    const auto records =
        synthetic_matrix("p", {"a", "b"}, {{0.001, 0.001}, {0.01, 0.01}}, {1.0, 0.2});
    const auto report = compatibility_and_ratios(records);
    CHECK(report.counts.at("p") == 1);
    REQUIRE(report.ratios.size() == 1);
    CHECK(report.ratios[0] == doctest::Approx(1.0));
  }
  SUBCASE("a 1ms/10ms compatible pair yields ratios 1 and 10") {
    const auto records = synthetic_matrix("p", {"a", "b"}, {{0.001, 0.001}, {0.01, 0.01}});
    const auto report = compatibility_and_ratios(records);
    CHECK(report.counts.at("p") == 2);
    REQUIRE(report.ratios.size() == 2);
    CHECK(report.ratios[0] == doctest::Approx(1.0));
    CHECK(report.ratios[1] == doctest::Approx(10.0));
    // the 10x ratio falls in the [10, 20) bucket
    int count_at_10 = 0;
    for (const auto& [edge, count] : report.histogram) {
      if (edge == 10.0) count_at_10 = count;
    }
    CHECK(count_at_10 == 1);
  }
}

TEST_CASE("heatmap export layout and blanks") {
  SUBCASE("1x2 matrix with runtimes 0.01 and 0.1 maps to -2 and -1") {
    std::vector<RunRecord> records;
    records.push_back(make_record("p", "a", 0, 0.01));
    records.push_back(make_record("p", "b", 0, 0.1));
    std::ostringstream os;
    export_heatmap(records, os);
    CHECK(os.str() == "problem,a,b\np,-2,-1\n");
  }
  SUBCASE("filtered pairs are blank") {
    std::vector<RunRecord> records;
    records.push_back(make_record("p", "a", 0, 0.01));
    records.push_back(make_record("p", "b", 0, 0.1, 0.2));  // fails the quality gate
    std::ostringstream os;
    export_heatmap(records, os);
    CHECK(os.str() == "problem,a,b\np,-2,\n");
  }
  SUBCASE("paired full matrix is rows x algorithms with one pair filled per row") {
    std::vector<RunRecord> records;
    for (int p = 0; p < 3; ++p) {
      const std::string problem = "p" + std::to_string(p);
      for (int rep = 0; rep < 2; ++rep) {
        records.push_back(make_record(problem, problem + "_sys", rep, 0.001));
        records.push_back(make_record(problem, problem + "_ran", rep, 0.002));
      }
    }
    std::ostringstream os;
    export_heatmap(records, os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(std::count(line.begin(), line.end(), ',') == 6);  // 6 algorithm columns
    int filled = 0;
    int rows = 0;
    while (std::getline(is, line)) {
      ++rows;
      std::size_t pos = 0;
      int cells = 0;
      while ((pos = line.find(',', pos)) != std::string::npos) {
        ++pos;
        if (pos < line.size() && line[pos] != ',') ++cells;
      }
      filled += cells;
    }
    CHECK(rows == 3);
    CHECK(filled == 6);  // exactly the paired cells
  }
}

TEST_CASE("analysis report recomputes identically from persisted records") {
  MatrixConfig config;
  config.repetitions = 3;
  config.problems = {"linear_program", "knapsack", "integration"};
  config.base_seed = 31;
  const auto records = run_matrix(config);

  AnalyzeOptions options;
  const auto report = analysis_report(records, options);

  std::stringstream buffer;
  write_jsonl(buffer, records);
  const auto reloaded = read_jsonl(buffer);
  const auto report2 = analysis_report(reloaded, options);
  CHECK(report == report2);

  // determinism of the bootstrap inside the report
  const auto report3 = analysis_report(records, options);
  CHECK(report == report3);
}

TEST_CASE("analysis report carries the headline metric fields") {
  MatrixConfig config;
  config.repetitions = 2;
  config.problems = {"linear_program", "knapsack"};
  const auto records = run_matrix(config);
  const auto text = analysis_report(records, AnalyzeOptions{});
  for (const char* key :
       {"\"cv_gap_abs\"", "\"cv_gap_relative\"", "\"geometric_mean_ratio\"", "\"bootstrap_ci\"",
        "\"compatibility_counts\"", "\"conditional_entropy_bits\"", "\"problem_stats\"",
        "\"algorithm_stats\"", "\"total_runs\""}) {
    CHECK_MESSAGE(text.find(key) != std::string::npos, key);
  }
}

TEST_SUITE_END();
