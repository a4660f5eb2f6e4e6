#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "algoselect/comb.hpp"
#include "algoselect/rng.hpp"

namespace algoselect {

// One runtime comparison r = ln(t_sys) - ln(t_ran); negative means the
// systematic endpoint was faster.
struct LogRatioSample {
  double r = 0.0;
  std::string instance_id;
};

// Throws unless both runtimes are strictly positive and finite. Zero timings
// must be clamped to a floor by the caller first (the harness uses 1e-7 s).
double log_ratio(double t_sys_seconds, double t_ran_seconds);

// Sample median of the values seen so far, with the half-width obtained by
// inverting the DKW tail 2e^{-2k eps^2} = delta.
struct ThresholdEstimate {
  double theta_k = 0.0;
  std::size_t k = 0;

  double epsilon_band(double delta) const {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must be in (0, 1)");
    return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(k)));
  }
};

// Even-count convention: mean of the two middle order statistics.
double median_of(std::vector<double> values);

ThresholdEstimate empirical_median(std::span<const double> samples);
ThresholdEstimate empirical_median(std::span<const LogRatioSample> samples);

// Finite hypothesis class: one bounded-loss functional per hypothesis.
template <typename Datum>
using HypothesisClass = std::vector<std::function<double(const Datum&)>>;

struct MoMEstimate {
  std::size_t chosen = 0;
  std::vector<double> mom_risk;
  std::size_t k_blocks = 0;
  std::size_t block_size = 0;
};

namespace detail {

inline double checked_loss(double value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw std::invalid_argument("loss evaluation outside [0, 1]");
  }
  return value;
}

}  // namespace detail

// Median-of-means ERM over a finite class. Blocks are consecutive runs of
// the data in the given order (pass shuffle = true to permute with rng
// first); k = min(ceil(8 ln(2|H|/delta)), floor(n/2)) and the trailing
// n mod k data are discarded. Ties in the argmin go to the lowest index.
template <typename Datum>
MoMEstimate mom_erm(std::span<const Datum> data, const HypothesisClass<Datum>& hypotheses,
                    double delta, Rng& rng, bool shuffle = false) {
  const std::size_t n = data.size();
  if (n < 2) throw std::invalid_argument("mom_erm: need at least 2 data");
  if (hypotheses.empty()) throw std::invalid_argument("mom_erm: empty hypothesis class");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("mom_erm: delta must be in (0, 1)");

  const double k_raw = std::ceil(8.0 * std::log(2.0 * static_cast<double>(hypotheses.size()) / delta));
  const std::size_t k = std::max<std::size_t>(
      1, std::min<std::size_t>(static_cast<std::size_t>(k_raw), n / 2));
  const std::size_t m = n / k;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (shuffle) {
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(order[i], order[rng.uniform_below(i + 1)]);
    }
  }

  MoMEstimate out;
  out.k_blocks = k;
  out.block_size = m;
  out.mom_risk.reserve(hypotheses.size());
  for (const auto& h : hypotheses) {
    std::vector<double> block_means(k);
    for (std::size_t j = 0; j < k; ++j) {
      double sum = 0.0;
      for (std::size_t i = j * m; i < (j + 1) * m; ++i) {
        sum += detail::checked_loss(h(data[order[i]]));
      }
      block_means[j] = sum / static_cast<double>(m);
    }
    out.mom_risk.push_back(median_of(std::move(block_means)));
  }
  out.chosen = static_cast<std::size_t>(
      std::min_element(out.mom_risk.begin(), out.mom_risk.end()) - out.mom_risk.begin());
  return out;
}

// Plain mean ERM, the non-robust baseline recorded alongside MoM in the
// corruption experiments.
template <typename Datum>
std::size_t mean_erm(std::span<const Datum> data, const HypothesisClass<Datum>& hypotheses) {
  if (data.empty()) throw std::invalid_argument("mean_erm: empty data");
  if (hypotheses.empty()) throw std::invalid_argument("mean_erm: empty hypothesis class");
  std::vector<double> risk(hypotheses.size(), 0.0);
  for (std::size_t h = 0; h < hypotheses.size(); ++h) {
    for (const auto& z : data) risk[h] += detail::checked_loss(hypotheses[h](z));
  }
  return static_cast<std::size_t>(std::min_element(risk.begin(), risk.end()) - risk.begin());
}

// Bridges a learned threshold into seeding form: weight = slope at the
// feature slot that carries the predicted log-ratio, bias = -slope * theta,
// so t crosses 0.5 exactly at R = theta_k. dimension defaults to the
// smallest vector that holds the indexed slot.
SeedingFunction threshold_to_seeding(const ThresholdEstimate& theta,
                                     std::size_t ratio_feature_index, double slope,
                                     std::size_t dimension = 0);

// JSON wire forms for the analysis report; keys match the field names.
std::string threshold_estimate_to_json(const ThresholdEstimate& estimate);
ThresholdEstimate threshold_estimate_from_json(const std::string& text);
std::string mom_estimate_to_json(const MoMEstimate& estimate);
MoMEstimate mom_estimate_from_json(const std::string& text);

}  // namespace algoselect
