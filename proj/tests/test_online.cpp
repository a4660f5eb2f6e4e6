#include <cmath>
#include <sstream>
#include <vector>

#include "algoselect/online.hpp"
#include "algoselect/sim.hpp"
#include "doctest.h"

using namespace algoselect;

TEST_SUITE_BEGIN("online");

TEST_CASE("fpl_choose basics") {
  Rng rng(1);
  SUBCASE("single action is always chosen") {
    FplState s(1);
    for (int i = 0; i < 100; ++i) CHECK(fpl_choose(s, rng) == 0);
  }
  SUBCASE("a huge loss deficit is essentially never overturned") {
    FplState s(2);
    s.cumulative_losses = {0.0, 1e6};
    int zero = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
      if (fpl_choose(s, rng) == 0) ++zero;
    }
    CHECK(static_cast<double>(zero) / n > 0.999);
  }
  SUBCASE("identical cumulative losses spread uniformly") {
    FplState s(4);
    std::vector<int> counts(4, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[fpl_choose(s, rng)];
    for (const int c : counts) {
      CHECK(std::abs(static_cast<double>(c) / n - 0.25) < 0.01);
    }
  }
}

TEST_CASE("fpl_choose is shift-invariant under a shared seed") {
  FplState a(5);
  FplState b(5);
  a.cumulative_losses = {3.0, 1.0, 4.0, 1.0, 5.0};
  for (std::size_t i = 0; i < 5; ++i) b.cumulative_losses[i] = a.cumulative_losses[i] + 123.25;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng ra(seed);
    Rng rb(seed);
    CHECK(fpl_choose(a, ra) == fpl_choose(b, rb));
  }
}

TEST_CASE("fpl_update accumulates and validates") {
  FplState s(2);
  fpl_update(s, std::vector<double>{0.0, 0.0});
  CHECK(s.round == 1);
  CHECK(s.cumulative_losses == std::vector<double>{0.0, 0.0});
  fpl_update(s, std::vector<double>{1.0, 0.0});
  fpl_update(s, std::vector<double>{1.0, 0.0});
  CHECK(s.cumulative_losses == std::vector<double>{2.0, 0.0});
  CHECK(s.round == 3);
  CHECK_THROWS_AS(fpl_update(s, std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(fpl_update(s, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("fpl_update matches an independent column-sum oracle") {
  Rng rng(9);
  FplState s(3);
  std::vector<double> sums(3, 0.0);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> losses(3);
    for (auto& l : losses) l = rng.uniform01();
    for (std::size_t a = 0; a < 3; ++a) sums[a] += losses[a];
    fpl_update(s, losses);
  }
  for (std::size_t a = 0; a < 3; ++a) {
    CHECK(s.cumulative_losses[a] == doctest::Approx(sums[a]).epsilon(1e-12));
  }
}

TEST_CASE("ucb1_choose rules") {
  SUBCASE("unpulled arms first, lowest index") {
    std::vector<UcbArm> arms(2);
    CHECK(ucb1_choose(arms, 1) == 0);
    arms[0].observe(0.5);
    CHECK(ucb1_choose(arms, 2) == 1);
  }
  SUBCASE("clear mean separation with equal bonuses") {
    std::vector<UcbArm> arms(2);
    for (int i = 0; i < 50; ++i) {
      arms[0].observe(0.0);
      arms[1].observe(1.0);
    }
    CHECK(ucb1_choose(arms, 100) == 0);
  }
  SUBCASE("single arm") {
    std::vector<UcbArm> arms(1);
    arms[0].observe(1.0);
    CHECK(ucb1_choose(arms, 5) == 0);
  }
  std::vector<UcbArm> none;
  CHECK_THROWS_AS(ucb1_choose(none, 1), std::invalid_argument);
  std::vector<UcbArm> arms(1);
  CHECK_THROWS_AS(ucb1_choose(arms, 0), std::invalid_argument);
}

TEST_CASE("ucb1 regret is sublinear on a deterministic gap") {
  // losses fixed at (0, 1); regret(T) = number of pulls of the bad arm
  auto wrong_pulls = [](std::size_t horizon) {
    std::vector<UcbArm> arms(2);
    double regret = 0.0;
    for (std::size_t t = 1; t <= horizon; ++t) {
      const std::size_t j = ucb1_choose(arms, t);
      const double loss = j == 0 ? 0.0 : 1.0;
      arms[j].observe(loss);
      regret += loss;
    }
    return regret;
  };
  const double r1 = wrong_pulls(4000);
  const double r2 = wrong_pulls(8000);
  CHECK(r2 / r1 < 2.0);
  CHECK(r1 > 0.0);
}

TEST_CASE("cascade_choose rules") {
  SUBCASE("dominant known arm with equal costs") {
    std::vector<UcbArm> arms(2);
    for (int i = 0; i < 200; ++i) {
      arms[0].observe(0.0);
      arms[1].observe(1.0);
    }
    CHECK(cascade_choose(arms, 400, 1000) == 0);
  }
  SUBCASE("single arm") {
    std::vector<UcbArm> arms(1);
    CHECK(cascade_choose(arms, 1, 100) == 0);
  }
  SUBCASE("unsorted costs rejected") {
    std::vector<UcbArm> arms(2);
    arms[0].cost = 5.0;
    arms[1].cost = 1.0;
    CHECK_THROWS_AS(cascade_choose(arms, 1, 100), std::invalid_argument);
  }
  SUBCASE("every arm is tried at least once") {
    std::vector<UcbArm> arms(3);
    arms[1].cost = 1.0;
    arms[2].cost = 2.0;
    std::vector<bool> tried(3, false);
    for (std::uint64_t t = 1; t <= 3; ++t) {
      const std::size_t j = cascade_choose(arms, t, 100);
      tried[j] = true;
      arms[j].observe(0.5);
    }
    CHECK(tried == std::vector<bool>{true, true, true});
  }
}

TEST_CASE("cascade prefers the cheap arm when losses are equal") {
  // two zero-loss arms, costs 0 and 10: the cheap one wins rounds 100..1000
  std::vector<double> means{0.0, 0.0};
  std::vector<double> costs{0.0, 10.0};
  const auto ledger = cascade_run(means, costs, 1000, 42);
  int cheap = 0;
  int total = 0;
  for (std::size_t t = 99; t < 1000; ++t) {
    ++total;
    if (ledger.chosen_at(t) == 0) ++cheap;
  }
  CHECK(static_cast<double>(cheap) / total > 0.95);
}

TEST_CASE("regret ledger bookkeeping and CSV export") {
  RegretLedger ledger;
  ledger.record(0, std::vector<double>{0.0, 1.0});
  ledger.record(1, std::vector<double>{0.0, 1.0});
  CHECK(ledger.rounds() == 2);
  CHECK(ledger.incurred_total() == doctest::Approx(1.0));
  CHECK(ledger.best_fixed_total() == doctest::Approx(0.0));
  CHECK(ledger.regret() == doctest::Approx(1.0));
  CHECK(ledger.regret_at(1) == doctest::Approx(0.0));
  CHECK(ledger.regret_at(2) == doctest::Approx(1.0));
  std::ostringstream os;
  ledger.write_csv(os);
  CHECK(os.str() ==
        "round,chosen,incurred_loss,best_fixed_cumloss,regret\n"
        "1,0,0,0,0\n"
        "2,1,1,0,1\n");
}

TEST_CASE("single-round stream has regret within [0,1]") {
  const std::vector<std::vector<double>> stream{{0.3, 0.8}};
  const auto ledger = fpl_run(stream, 5);
  CHECK(ledger.regret() >= 0.0);
  CHECK(ledger.regret() <= 1.0);
}

TEST_CASE("selectors replay bit-identically from equal seeds") {
  Rng env(3);
  const auto stream = near_tie_stream(2000, 4, 0.1, env);
  std::ostringstream a;
  std::ostringstream b;
  fpl_run(stream, 77).write_csv(a);
  fpl_run(stream, 77).write_csv(b);
  CHECK(a.str() == b.str());
  const std::size_t starts[] = {0};
  std::ostringstream c;
  std::ostringstream d;
  adaptive_window_run(stream, starts, 123).write_csv(c);
  adaptive_window_run(stream, starts, 123).write_csv(d);
  CHECK(c.str() == d.str());
}

TEST_CASE("adaptive window on a stationary constant stream learns the good arm") {
  std::vector<std::vector<double>> stream(5000, std::vector<double>{0.0, 1.0});
  const std::size_t starts[] = {0};
  const auto ledger = adaptive_window_run(stream, starts, 21);
  CHECK(ledger.regret() / 5000.0 < 0.05);
  REQUIRE(ledger.segments().size() == 1);
  CHECK(ledger.segments()[0].best_action == 0);
  CHECK(ledger.segments()[0].best_action_loss == doctest::Approx(0.0));
  CHECK_THROWS_AS(adaptive_window_run({}, starts, 21), std::invalid_argument);
}

TEST_CASE("adaptive window beats non-restarting FPL after a mid-stream flip") {
  const auto summary = adaptive_window_experiment(2000, 5, 11);
  CHECK(summary.wins >= 4);
  // per-segment best actions flip with the stream
  const auto stream = flip_stream(2000);
  const std::size_t starts[] = {0, 1000};
  const auto ledger = adaptive_window_run(stream, starts, 31);
  REQUIRE(ledger.segments().size() == 2);
  CHECK(ledger.segments()[0].best_action == 0);
  CHECK(ledger.segments()[1].best_action == 1);
}

TEST_CASE("ucb tree routes and updates gates along the path") {
  SUBCASE("depth 0 is a single leaf and never updates") {
    UcbTreeSelector sel(0);
    CHECK(sel.leaves() == 1);
    CHECK(sel.choose() == 0);
    sel.observe(0.5);
  }
  SUBCASE("depth 1 converges to the zero-loss leaf") {
    UcbTreeSelector sel(1);
    std::size_t zero_hits = 0;
    const std::size_t horizon = 2000;
    for (std::size_t t = 0; t < horizon; ++t) {
      const std::size_t leaf = sel.choose();
      if (leaf == 0) ++zero_hits;
      sel.observe(leaf == 0 ? 0.0 : 1.0);
    }
    CHECK(static_cast<double>(zero_hits) / horizon > 0.95);
  }
  SUBCASE("loss validation") {
    UcbTreeSelector sel(1);
    sel.choose();
    CHECK_THROWS_AS(sel.observe(1.5), std::invalid_argument);
  }
}

TEST_CASE("depth-2 ucb tree regret stays under the additive per-gate bound") {
  const auto ledger = ucb_tree_run(2, 0, 2000, 1);
  const double bound = 3.0 * 2.0 * std::sqrt(2000.0 * std::log(2000.0));
  CHECK(ledger.regret() < bound);
}

TEST_SUITE_END();
