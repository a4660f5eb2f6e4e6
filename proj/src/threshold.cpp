#include "algoselect/threshold.hpp"

#include "json.hpp"

namespace algoselect {

double log_ratio(double t_sys_seconds, double t_ran_seconds) {
  if (!(t_sys_seconds > 0.0) || !std::isfinite(t_sys_seconds) ||
      !(t_ran_seconds > 0.0) || !std::isfinite(t_ran_seconds)) {
    throw std::invalid_argument("log_ratio: runtimes must be strictly positive and finite");
  }
  return std::log(t_sys_seconds) - std::log(t_ran_seconds);
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

ThresholdEstimate empirical_median(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("empirical_median: empty sample list");
  for (const double r : samples) {
    if (!std::isfinite(r)) throw std::invalid_argument("empirical_median: non-finite sample");
  }
  ThresholdEstimate est;
  est.k = samples.size();
  est.theta_k = median_of(std::vector<double>(samples.begin(), samples.end()));
  return est;
}

ThresholdEstimate empirical_median(std::span<const LogRatioSample> samples) {
  std::vector<double> values;
  values.reserve(samples.size());
  for (const auto& s : samples) values.push_back(s.r);
  return empirical_median(values);
}

SeedingFunction threshold_to_seeding(const ThresholdEstimate& theta,
                                     std::size_t ratio_feature_index, double slope,
                                     std::size_t dimension) {
  if (!(slope > 0.0)) throw std::invalid_argument("threshold_to_seeding: slope must be positive");
  if (dimension == 0) dimension = ratio_feature_index + 1;
  if (dimension <= ratio_feature_index) {
    throw std::invalid_argument("threshold_to_seeding: dimension does not cover the ratio index");
  }
  SeedingFunction s;
  s.weights.assign(dimension, 0.0);
  s.weights[ratio_feature_index] = slope;
  s.bias = -slope * theta.theta_k;
  return s;
}

std::string threshold_estimate_to_json(const ThresholdEstimate& estimate) {
  return nlohmann::json{{"theta_k", estimate.theta_k}, {"k", estimate.k}}.dump();
}

ThresholdEstimate threshold_estimate_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ThresholdEstimate est;
  est.theta_k = j.at("theta_k").get<double>();
  est.k = j.at("k").get<std::size_t>();
  return est;
}

std::string mom_estimate_to_json(const MoMEstimate& estimate) {
  return nlohmann::json{{"chosen", estimate.chosen},
                        {"mom_risk", estimate.mom_risk},
                        {"k_blocks", estimate.k_blocks},
                        {"block_size", estimate.block_size}}
      .dump();
}

MoMEstimate mom_estimate_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  MoMEstimate est;
  est.chosen = j.at("chosen").get<std::size_t>();
  est.mom_risk = j.at("mom_risk").get<std::vector<double>>();
  est.k_blocks = j.at("k_blocks").get<std::size_t>();
  est.block_size = j.at("block_size").get<std::size_t>();
  return est;
}

}  // namespace algoselect
