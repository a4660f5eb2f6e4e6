#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "algoselect/rng.hpp"

namespace algoselect {

// Full-information follow-the-perturbed-leader. Gumbel(0,1) perturbations
// are drawn fresh for every action every round; selection is the argmin of
// cumulative loss minus perturbation (ties to the lowest index).
struct FplState {
  std::vector<double> cumulative_losses;
  std::uint64_t round = 0;
  double perturbation_scale = 1.0;

  explicit FplState(std::size_t actions) : cumulative_losses(actions, 0.0) {}
};

std::size_t fpl_choose(const FplState& state, Rng& rng);
void fpl_update(FplState& state, std::span<const double> losses);

// One bandit arm: pull count, running mean loss in [0,1], fixed execution cost.
struct UcbArm {
  std::uint64_t pulls = 0;
  double mean_loss = 0.0;
  double cost = 0.0;

  void observe(double loss);
};

// Loss-oriented UCB1: any unpulled arm first (lowest index), otherwise
// argmin of mean - sqrt(2 ln t / N). Ties to the lowest index.
std::size_t ucb1_choose(std::span<const UcbArm> arms, std::uint64_t t);

// Cost-aware cascade over arms sorted by nondecreasing cost. Scans cheapest
// first and takes the first arm whose pessimistic total (mean + beta + cost)
// beats every more expensive arm's optimistic total; if none qualifies,
// falls back to the optimistic index argmin. beta = sqrt(ln T / max(N, 1));
// unpulled arms are fully optimistic so each gets tried at least once.
std::size_t cascade_choose(std::span<const UcbArm> arms, std::uint64_t t, std::uint64_t horizon);

// Per-round record of an online run. The full loss vectors are stored, so
// regret is recomputable exactly from the ledger alone.
class RegretLedger {
 public:
  struct Segment {
    std::size_t begin = 0;  // [begin, end) round indexes, 0-based
    std::size_t end = 0;
    std::size_t best_action = 0;
    double best_action_loss = 0.0;
  };

  void record(std::size_t chosen, std::span<const double> losses);

  std::size_t rounds() const { return incurred_.size(); }
  std::size_t actions() const { return cumulative_.size(); }
  double incurred_total() const { return incurred_total_; }
  double best_fixed_total() const;
  double regret() const { return incurred_total() - best_fixed_total(); }
  // Regret of the prefix [0, t).
  double regret_at(std::size_t t) const;

  std::size_t chosen_at(std::size_t t) const { return chosen_[t]; }
  const std::vector<std::vector<double>>& loss_history() const { return loss_history_; }

  // Marks stationary segments and records each segment's best fixed action.
  void annotate_segments(std::span<const std::size_t> segment_starts);
  const std::vector<Segment>& segments() const { return segments_; }

  // CSV columns: round,chosen,incurred_loss,best_fixed_cumloss,regret
  void write_csv(std::ostream& os) const;

 private:
  std::vector<std::vector<double>> loss_history_;
  std::vector<std::size_t> chosen_;
  std::vector<double> incurred_;
  std::vector<double> cumulative_;  // per-action totals
  double incurred_total_ = 0.0;
  std::vector<Segment> segments_;
};

// Doubling-trick adaptive windows: parallel FPL learners on windows of
// lengths 2^0, 2^1, ..., each restarted when its window elapses, with a
// top-level FPL over the learners' recommendations picking the acted choice.
RegretLedger adaptive_window_run(std::span<const std::vector<double>> stream,
                                 std::span<const std::size_t> segment_starts,
                                 std::uint64_t seed);

// Single non-restarting FPL over the same stream, for paired comparisons.
RegretLedger fpl_run(std::span<const std::vector<double>> stream, std::uint64_t seed);

// Complete binary tree of 2-armed UCB1 gates. choose() routes to a leaf and
// remembers the path; observe() credits the leaf loss to every gate on it.
class UcbTreeSelector {
 public:
  explicit UcbTreeSelector(std::size_t depth);

  std::size_t depth() const { return depth_; }
  std::size_t leaves() const { return std::size_t{1} << depth_; }

  std::size_t choose();
  void observe(double leaf_loss);

 private:
  struct Gate {
    UcbArm arms[2];
  };
  std::size_t depth_;
  std::vector<Gate> gates_;  // heap layout: children of i at 2i+1, 2i+2
  std::vector<std::pair<std::size_t, std::size_t>> path_;
  bool pending_ = false;
};

}  // namespace algoselect
