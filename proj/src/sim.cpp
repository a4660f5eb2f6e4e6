#include "algoselect/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace algoselect {

std::vector<std::vector<double>> near_tie_stream(std::size_t horizon, std::size_t actions,
                                                 double gap, Rng& rng) {
  if (actions == 0) throw std::invalid_argument("near_tie_stream: need at least one action");
  std::vector<double> means(actions, 0.5 + gap / 2.0);
  means[0] = 0.5 - gap / 2.0;
  return bernoulli_stream(horizon, means, rng);
}

std::vector<std::vector<double>> flip_stream(std::size_t horizon) {
  std::vector<std::vector<double>> stream(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    stream[t] = (t < horizon / 2) ? std::vector<double>{0.0, 1.0} : std::vector<double>{1.0, 0.0};
  }
  return stream;
}

std::vector<std::vector<double>> bernoulli_stream(std::size_t horizon,
                                                  std::span<const double> means, Rng& rng) {
  std::vector<std::vector<double>> stream(horizon, std::vector<double>(means.size()));
  for (auto& row : stream) {
    for (std::size_t a = 0; a < means.size(); ++a) {
      row[a] = rng.uniform01() < means[a] ? 1.0 : 0.0;
    }
  }
  return stream;
}

FplRegretSummary fpl_regret_experiment(std::size_t actions, std::size_t seeds,
                                       std::uint64_t base_seed, double gap) {
  constexpr std::size_t kHorizon = 10000;
  constexpr std::size_t kCheckpoint = 1000;
  FplRegretSummary out;
  out.actions = actions;
  double sum3 = 0.0;
  double sum4 = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    Rng env_rng(hash_combine(base_seed + s, "env"));
    const auto stream = near_tie_stream(kHorizon, actions, gap, env_rng);
    const auto ledger = fpl_run(stream, hash_combine(base_seed + s, "learner"));
    sum3 += ledger.regret_at(kCheckpoint);
    sum4 += ledger.regret();
  }
  const double logk = std::log(static_cast<double>(actions));
  out.ratio_at_1e3 = (sum3 / static_cast<double>(seeds)) / std::sqrt(kCheckpoint * logk);
  out.ratio_at_1e4 = (sum4 / static_cast<double>(seeds)) / std::sqrt(kHorizon * logk);
  return out;
}

RegretLedger cascade_run(std::span<const double> means, std::span<const double> costs,
                         std::size_t horizon, std::uint64_t seed) {
  if (means.size() != costs.size() || means.empty()) {
    throw std::invalid_argument("cascade_run: means and costs must be nonempty and match");
  }
  Rng env_rng(hash_combine(seed, "env"));
  const auto stream = bernoulli_stream(horizon, means, env_rng);
  std::vector<UcbArm> arms(means.size());
  for (std::size_t j = 0; j < costs.size(); ++j) arms[j].cost = costs[j];
  RegretLedger ledger;
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t j = cascade_choose(arms, t + 1, horizon);
    ledger.record(j, stream[t]);
    arms[j].observe(stream[t][j]);  // bandit feedback: only the chosen arm reveals its loss
  }
  return ledger;
}

CascadeSummary cascade_experiment(std::span<const double> means, std::span<const double> costs,
                                  std::size_t horizon, std::size_t seeds,
                                  std::uint64_t base_seed) {
  CascadeSummary out;
  out.optimal_cost_plus_loss = means[0] + costs[0];
  for (std::size_t j = 1; j < means.size(); ++j) {
    out.optimal_cost_plus_loss = std::min(out.optimal_cost_plus_loss, means[j] + costs[j]);
  }
  double total = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto ledger = cascade_run(means, costs, horizon, base_seed + s);
    double cost_plus_loss = 0.0;
    for (std::size_t t = 0; t < ledger.rounds(); ++t) {
      const std::size_t j = ledger.chosen_at(t);
      cost_plus_loss += ledger.loss_history()[t][j] + costs[j];
    }
    total += cost_plus_loss / static_cast<double>(horizon);
  }
  out.mean_cost_plus_loss = total / static_cast<double>(seeds);
  return out;
}

RegretLedger ucb_tree_run(std::size_t depth, std::size_t zero_leaf, std::size_t horizon,
                          std::uint64_t seed) {
  (void)seed;  // routing is deterministic; seed kept for interface symmetry
  UcbTreeSelector selector(depth);
  if (zero_leaf >= selector.leaves()) throw std::invalid_argument("ucb_tree_run: bad leaf index");
  RegretLedger ledger;
  std::vector<double> losses(selector.leaves(), 1.0);
  losses[zero_leaf] = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const std::size_t leaf = selector.choose();
    ledger.record(leaf, losses);
    selector.observe(losses[leaf]);
  }
  return ledger;
}

UcbTreeSummary ucb_tree_experiment(std::size_t depth, std::size_t zero_leaf, std::size_t horizon,
                                   std::size_t seeds, std::uint64_t base_seed) {
  UcbTreeSummary out;
  const double t = static_cast<double>(horizon);
  out.bound = 3.0 * static_cast<double>(depth) * std::sqrt(t * std::log(t));
  double total = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    total += ucb_tree_run(depth, zero_leaf, horizon, base_seed + s).regret();
  }
  out.mean_regret = total / static_cast<double>(seeds);
  return out;
}

AdaptiveWindowSummary adaptive_window_experiment(std::size_t horizon, std::size_t seeds,
                                                 std::uint64_t base_seed) {
  AdaptiveWindowSummary out;
  out.seeds = seeds;
  const auto stream = flip_stream(horizon);
  const std::size_t starts_arr[] = {0, horizon / 2};
  for (std::size_t s = 0; s < seeds; ++s) {
    const auto adaptive =
        adaptive_window_run(stream, starts_arr, hash_combine(base_seed + s, "adaptive"));
    const auto plain = fpl_run(stream, hash_combine(base_seed + s, "plain"));
    if (adaptive.regret() < plain.regret()) ++out.wins;
  }
  return out;
}

}  // namespace algoselect
