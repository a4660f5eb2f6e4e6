#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "algoselect/online.hpp"
#include "algoselect/rng.hpp"

namespace algoselect {

// Oblivious loss streams for the online experiments. Each returns a T x K
// table drawn entirely from the given rng, independent of any learner.

// Near-tied arms: binary losses, arm 0 at mean 0.5 - gap/2, the rest at
// 0.5 + gap/2. The round winner alternates stochastically while cumulative
// losses stay close for ~1/gap^2 rounds.
std::vector<std::vector<double>> near_tie_stream(std::size_t horizon, std::size_t actions,
                                                 double gap, Rng& rng);

// Two actions; loss (0,1) for the first half, (1,0) after the flip.
std::vector<std::vector<double>> flip_stream(std::size_t horizon);

// Independent Bernoulli losses with the given per-arm means.
std::vector<std::vector<double>> bernoulli_stream(std::size_t horizon,
                                                  std::span<const double> means, Rng& rng);

struct FplRegretSummary {
  std::size_t actions = 0;
  double ratio_at_1e3 = 0.0;  // mean over seeds of regret / sqrt(T ln K)
  double ratio_at_1e4 = 0.0;
};

// One T=1e4 trajectory per seed with regret read at both checkpoints.
FplRegretSummary fpl_regret_experiment(std::size_t actions, std::size_t seeds,
                                       std::uint64_t base_seed, double gap = 0.1);

struct CascadeSummary {
  double mean_cost_plus_loss = 0.0;  // time-averaged, mean over seeds
  double optimal_cost_plus_loss = 0.0;
};

CascadeSummary cascade_experiment(std::span<const double> means, std::span<const double> costs,
                                  std::size_t horizon, std::size_t seeds,
                                  std::uint64_t base_seed);
RegretLedger cascade_run(std::span<const double> means, std::span<const double> costs,
                         std::size_t horizon, std::uint64_t seed);

struct UcbTreeSummary {
  double mean_regret = 0.0;  // best leaf has loss 0, so regret = incurred
  double bound = 0.0;        // 3 * depth * sqrt(T ln T)
};

UcbTreeSummary ucb_tree_experiment(std::size_t depth, std::size_t zero_leaf, std::size_t horizon,
                                   std::size_t seeds, std::uint64_t base_seed);
RegretLedger ucb_tree_run(std::size_t depth, std::size_t zero_leaf, std::size_t horizon,
                          std::uint64_t seed);

struct AdaptiveWindowSummary {
  std::size_t wins = 0;  // paired seeds where adaptive total regret < plain FPL's
  std::size_t seeds = 0;
};

AdaptiveWindowSummary adaptive_window_experiment(std::size_t horizon, std::size_t seeds,
                                                 std::uint64_t base_seed);

}  // namespace algoselect
