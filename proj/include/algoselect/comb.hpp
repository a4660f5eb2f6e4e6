#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "algoselect/rng.hpp"

namespace algoselect {

// Problem features phi(omega). Fixed dimension within an experiment; every
// entry must be finite.
using FeatureVector = std::vector<double>;

enum class Endpoint { Systematic, Random };

// Logistic gate t = sigma(weights . phi + bias). Evaluation always lands
// strictly inside (0, 1): the argument is clamped to [-40, 40] before
// exponentiation so the output saturates but never reaches an endpoint.
struct SeedingFunction {
  std::vector<double> weights;
  double bias = 0.0;
};

double logistic(double x);

// t = sigma(weights . phi + bias). Throws std::invalid_argument on dimension
// mismatch or non-finite features.
double seed(const SeedingFunction& s, std::span<const double> phi);

// Basic comb dispatch: systematic with probability (1 - t), random with
// probability t. t = 0 and t = 1 are exact point masses.
Endpoint comb_select(double t, Rng& rng);

// Softmax over scores with max-subtraction. One probability per algorithm;
// the result sums to 1 within 1e-9.
std::vector<double> n_path_distribution(std::span<const double> scores);

// Inverse-CDF sample: index i with probability p[i].
std::size_t sample_path(std::span<const double> probabilities, Rng& rng);

void validate_features(std::span<const double> phi);
void validate_path_distribution(std::span<const double> p);

// JSON wire form: {"weights": [...], "bias": x}. Dimension is implicit in
// the array length.
std::string seeding_to_json(const SeedingFunction& s);
SeedingFunction seeding_from_json(const std::string& text);

}  // namespace algoselect
