#include "algoselect/online.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace algoselect {

std::size_t fpl_choose(const FplState& state, Rng& rng) {
  const std::size_t k = state.cumulative_losses.size();
  if (k == 0) throw std::invalid_argument("fpl_choose: no actions");
  std::size_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < k; ++a) {
    const double score = state.cumulative_losses[a] - state.perturbation_scale * rng.gumbel();
    if (score < best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

void fpl_update(FplState& state, std::span<const double> losses) {
  if (losses.size() != state.cumulative_losses.size()) {
    throw std::invalid_argument("fpl_update: loss vector length mismatch");
  }
  for (const double l : losses) {
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("fpl_update: loss outside [0, 1]");
  }
  for (std::size_t a = 0; a < losses.size(); ++a) state.cumulative_losses[a] += losses[a];
  ++state.round;
}

void UcbArm::observe(double loss) {
  if (!(loss >= 0.0 && loss <= 1.0)) throw std::invalid_argument("UcbArm: loss outside [0, 1]");
  ++pulls;
  mean_loss += (loss - mean_loss) / static_cast<double>(pulls);
}

std::size_t ucb1_choose(std::span<const UcbArm> arms, std::uint64_t t) {
  if (arms.empty()) throw std::invalid_argument("ucb1_choose: empty arm list");
  if (t < 1) throw std::invalid_argument("ucb1_choose: round must be >= 1");
  for (std::size_t j = 0; j < arms.size(); ++j) {
    if (arms[j].pulls == 0) return j;
  }
  std::size_t best = 0;
  double best_index = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < arms.size(); ++j) {
    const double bonus = std::sqrt(2.0 * std::log(static_cast<double>(t)) /
                                   static_cast<double>(arms[j].pulls));
    const double index = arms[j].mean_loss - bonus;
    if (index < best_index) {
      best_index = index;
      best = j;
    }
  }
  return best;
}

std::size_t cascade_choose(std::span<const UcbArm> arms, std::uint64_t t, std::uint64_t horizon) {
  if (arms.empty()) throw std::invalid_argument("cascade_choose: empty arm list");
  if (t < 1) throw std::invalid_argument("cascade_choose: round must be >= 1");
  for (std::size_t j = 1; j < arms.size(); ++j) {
    if (arms[j].cost < arms[j - 1].cost) {
      throw std::invalid_argument("cascade_choose: arms must be sorted by nondecreasing cost");
    }
  }
  const double log_horizon = std::log(static_cast<double>(std::max<std::uint64_t>(horizon, 2)));
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = arms.size();
  std::vector<double> pessimistic(n), optimistic(n);
  for (std::size_t j = 0; j < n; ++j) {
    if (arms[j].pulls == 0) {
      pessimistic[j] = inf;
      optimistic[j] = -inf;
    } else {
      const double beta = std::sqrt(log_horizon / static_cast<double>(arms[j].pulls));
      pessimistic[j] = arms[j].mean_loss + beta + arms[j].cost;
      optimistic[j] = arms[j].mean_loss - beta + arms[j].cost;
    }
  }
  // suffix_min[j] = min optimistic total among arms beyond j
  std::vector<double> suffix_min(n + 1, inf);
  for (std::size_t j = n; j-- > 0;) suffix_min[j] = std::min(optimistic[j], suffix_min[j + 1]);
  for (std::size_t j = 0; j < n; ++j) {
    if (pessimistic[j] < suffix_min[j + 1]) return j;
  }
  std::size_t best = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (optimistic[j] < optimistic[best]) best = j;
  }
  return best;
}

void RegretLedger::record(std::size_t chosen, std::span<const double> losses) {
  if (losses.empty()) throw std::invalid_argument("RegretLedger: empty loss vector");
  if (cumulative_.empty()) cumulative_.assign(losses.size(), 0.0);
  if (losses.size() != cumulative_.size()) {
    throw std::invalid_argument("RegretLedger: loss vector length changed");
  }
  if (chosen >= losses.size()) throw std::invalid_argument("RegretLedger: chosen out of range");
  loss_history_.emplace_back(losses.begin(), losses.end());
  chosen_.push_back(chosen);
  incurred_.push_back(losses[chosen]);
  incurred_total_ += losses[chosen];
  for (std::size_t a = 0; a < losses.size(); ++a) cumulative_[a] += losses[a];
}

double RegretLedger::best_fixed_total() const {
  if (cumulative_.empty()) return 0.0;
  double best = cumulative_[0];
  for (const double c : cumulative_) best = std::min(best, c);
  return best;
}

double RegretLedger::regret_at(std::size_t t) const {
  if (t > rounds()) throw std::invalid_argument("regret_at: beyond recorded rounds");
  if (t == 0 || cumulative_.empty()) return 0.0;
  std::vector<double> cum(cumulative_.size(), 0.0);
  double incurred = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    incurred += incurred_[i];
    for (std::size_t a = 0; a < cum.size(); ++a) cum[a] += loss_history_[i][a];
  }
  double best = cum[0];
  for (const double c : cum) best = std::min(best, c);
  return incurred - best;
}

void RegretLedger::annotate_segments(std::span<const std::size_t> segment_starts) {
  segments_.clear();
  if (segment_starts.empty() || rounds() == 0) return;
  for (std::size_t s = 0; s < segment_starts.size(); ++s) {
    Segment seg;
    seg.begin = segment_starts[s];
    seg.end = (s + 1 < segment_starts.size()) ? segment_starts[s + 1] : rounds();
    if (seg.begin >= seg.end) continue;
    std::vector<double> totals(cumulative_.size(), 0.0);
    for (std::size_t i = seg.begin; i < seg.end; ++i) {
      for (std::size_t a = 0; a < totals.size(); ++a) totals[a] += loss_history_[i][a];
    }
    seg.best_action = 0;
    for (std::size_t a = 1; a < totals.size(); ++a) {
      if (totals[a] < totals[seg.best_action]) seg.best_action = a;
    }
    seg.best_action_loss = totals[seg.best_action];
    segments_.push_back(seg);
  }
}

void RegretLedger::write_csv(std::ostream& os) const {
  os << "round,chosen,incurred_loss,best_fixed_cumloss,regret\n";
  std::vector<double> cum(cumulative_.size(), 0.0);
  double incurred = 0.0;
  for (std::size_t i = 0; i < rounds(); ++i) {
    incurred += incurred_[i];
    for (std::size_t a = 0; a < cum.size(); ++a) cum[a] += loss_history_[i][a];
    double best = cum.empty() ? 0.0 : cum[0];
    for (const double c : cum) best = std::min(best, c);
    os << (i + 1) << ',' << chosen_[i] << ',' << incurred_[i] << ',' << best << ','
       << (incurred - best) << '\n';
  }
}

RegretLedger fpl_run(std::span<const std::vector<double>> stream, std::uint64_t seed) {
  if (stream.empty()) throw std::invalid_argument("fpl_run: empty stream");
  Rng rng(seed);
  FplState state(stream.front().size());
  RegretLedger ledger;
  for (const auto& losses : stream) {
    const std::size_t a = fpl_choose(state, rng);
    ledger.record(a, losses);
    fpl_update(state, losses);
  }
  return ledger;
}

RegretLedger adaptive_window_run(std::span<const std::vector<double>> stream,
                                 std::span<const std::size_t> segment_starts,
                                 std::uint64_t seed) {
  if (stream.empty()) throw std::invalid_argument("adaptive_window_run: empty stream");
  const std::size_t horizon = stream.size();
  const std::size_t actions = stream.front().size();

  std::size_t windows = 1;
  while ((std::size_t{1} << windows) <= horizon) ++windows;

  Rng rng(seed);
  std::vector<FplState> learners(windows, FplState(actions));
  FplState meta(windows);
  RegretLedger ledger;

  std::vector<std::size_t> recommendations(windows);
  std::vector<double> expert_losses(windows);
  for (std::size_t t = 0; t < horizon; ++t) {
    const auto& losses = stream[t];
    for (std::size_t w = 0; w < windows; ++w) {
      recommendations[w] = fpl_choose(learners[w], rng);
    }
    const std::size_t expert = fpl_choose(meta, rng);
    const std::size_t acted = recommendations[expert];
    ledger.record(acted, losses);

    for (std::size_t w = 0; w < windows; ++w) {
      fpl_update(learners[w], losses);
      expert_losses[w] = losses[recommendations[w]];
      // restart when this learner's window elapses
      if ((t + 1) % (std::size_t{1} << w) == 0) {
        learners[w].cumulative_losses.assign(actions, 0.0);
      }
    }
    fpl_update(meta, expert_losses);
  }
  ledger.annotate_segments(segment_starts);
  return ledger;
}

UcbTreeSelector::UcbTreeSelector(std::size_t depth)
    : depth_(depth), gates_(depth == 0 ? 0 : (std::size_t{1} << depth) - 1) {}

std::size_t UcbTreeSelector::choose() {
  path_.clear();
  std::size_t node = 0;
  for (std::size_t level = 0; level < depth_; ++level) {
    Gate& g = gates_[node];
    const std::uint64_t visits = g.arms[0].pulls + g.arms[1].pulls + 1;
    const std::size_t arm = ucb1_choose(std::span<const UcbArm>(g.arms, 2), visits);
    path_.emplace_back(node, arm);
    node = 2 * node + 1 + arm;
  }
  pending_ = true;
  return depth_ == 0 ? 0 : node - gates_.size();
}

void UcbTreeSelector::observe(double leaf_loss) {
  if (!(leaf_loss >= 0.0 && leaf_loss <= 1.0)) {
    throw std::invalid_argument("UcbTreeSelector: loss outside [0, 1]");
  }
  if (!pending_) throw std::logic_error("UcbTreeSelector: observe without a pending choice");
  for (const auto& [gate, arm] : path_) gates_[gate].arms[arm].observe(leaf_loss);
  pending_ = false;
}

}  // namespace algoselect
