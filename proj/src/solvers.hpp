#pragma once

#include <chrono>
#include <span>

#include "algoselect/problems.hpp"
#include "algoselect/rng.hpp"

// Solver implementations behind the registry. Systematic solvers never touch
// an rng; search-style solvers honor a wall-clock deadline and return their
// best-so-far when it passes.

namespace algoselect::solvers {

using Deadline = std::chrono::steady_clock::time_point;

SortSolution merge_sort(const SortPayload& p);
SortSolution quicksort_random(const SortPayload& p, Rng& rng);

SelectSolution select_median_of_medians(const SelectPayload& p);
SelectSolution quickselect_random(const SelectPayload& p, Rng& rng);

PathSolution dijkstra(const GraphPayload& p);
PathSolution greedy_walk_random(const GraphPayload& p, Rng& rng);

TreeSolution kruskal(const GraphPayload& p);
TreeSolution random_edge_greedy(const GraphPayload& p, Rng& rng);

VectorSolution gaussian_elimination(const LinearSystemPayload& p);
VectorSolution kaczmarz_random(const LinearSystemPayload& p, Rng& rng);

VectorSolution simplex_dense(const LpPayload& p);
VectorSolution random_interior_sampling(const LpPayload& p, Rng& rng);

VectorSolution grid_coordinate_descent(const NonconvexPayload& p);
VectorSolution simulated_annealing(const NonconvexPayload& p, Rng& rng);
double rastrigin_shifted(const NonconvexPayload& p, std::span<const double> x);

KnapsackSolution knapsack_dp(const KnapsackPayload& p);
KnapsackSolution greedy_random_knapsack(const KnapsackPayload& p, Rng& rng);

SatSolution dpll(const SatPayload& p, Deadline deadline);
SatSolution walksat(const SatPayload& p, Rng& rng, Deadline deadline);

ValueSolution simpson_composite(const IntegrationPayload& p);
ValueSolution monte_carlo_integration(const IntegrationPayload& p, Rng& rng);

double integrand(const IntegrationPayload& p, double x);

}  // namespace algoselect::solvers
