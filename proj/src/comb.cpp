#include "algoselect/comb.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace algoselect {

double logistic(double x) {
  const double clamped = std::clamp(x, -40.0, 40.0);
  double v = 1.0 / (1.0 + std::exp(-clamped));
  // at the clamp bound the quotient can round to an endpoint; keep (0,1) open
  if (v >= 1.0) v = std::nextafter(1.0, 0.0);
  if (v <= 0.0) v = std::numeric_limits<double>::min();
  return v;
}

void validate_features(std::span<const double> phi) {
  for (const double v : phi) {
    if (!std::isfinite(v)) throw std::invalid_argument("feature vector has a non-finite entry");
  }
}

double seed(const SeedingFunction& s, std::span<const double> phi) {
  if (s.weights.size() != phi.size()) {
    throw std::invalid_argument("seeding function dimension " + std::to_string(s.weights.size()) +
                                " does not match feature dimension " + std::to_string(phi.size()));
  }
  validate_features(phi);
  double score = s.bias;
  for (std::size_t i = 0; i < phi.size(); ++i) score += s.weights[i] * phi[i];
  return logistic(score);
}

Endpoint comb_select(double t, Rng& rng) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("comb parameter t must be in [0, 1]");
  return rng.uniform01() < (1.0 - t) ? Endpoint::Systematic : Endpoint::Random;
}

std::vector<double> n_path_distribution(std::span<const double> scores) {
  if (scores.empty()) throw std::invalid_argument("n_path_distribution: empty score vector");
  for (const double s : scores) {
    if (!std::isfinite(s)) throw std::invalid_argument("n_path_distribution: non-finite score");
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - top);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

void validate_path_distribution(std::span<const double> p) {
  if (p.empty()) throw std::invalid_argument("path distribution is empty");
  double total = 0.0;
  for (const double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument("path distribution has a negative entry");
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("path distribution sums to " + std::to_string(total));
  }
}

std::size_t sample_path(std::span<const double> probabilities, Rng& rng) {
  validate_path_distribution(probabilities);
  const double u = rng.uniform01();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    cumulative += probabilities[i];
    if (u < cumulative) return i;
  }
  return probabilities.size() - 1;  // u landed on accumulated rounding slack
}

std::string seeding_to_json(const SeedingFunction& s) {
  nlohmann::json j{{"weights", s.weights}, {"bias", s.bias}};
  return j.dump();
}

SeedingFunction seeding_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SeedingFunction s;
  s.weights = j.at("weights").get<std::vector<double>>();
  s.bias = j.at("bias").get<double>();
  return s;
}

}  // namespace algoselect
