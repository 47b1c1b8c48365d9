#pragma once

// Real-coded variation operators shared by the GA family and the MOEAs.

#include "evobench/core.hpp"

#include <vector>

namespace evobench {

struct SbxParams {
    double eta_c = 20.0;
    double pc = 1.0; // probability that a pair is recombined at all
};

struct PolynomialMutationParams {
    double eta_m = 20.0;
    double pm = -1.0; // per-gene probability; negative means 1/D
};

/// Simulated binary crossover of two parent rows. Each coordinate is
/// recombined with probability 0.5; children are clamped.
Matrix sbx_crossover(const Matrix& parents, double eta_c, const Bounds& b, Rng& r);
Matrix sbx_crossover(const Matrix& parents, const SbxParams& params, const Bounds& b, Rng& r);

/// Bounded polynomial mutation, each gene mutated with probability pm.
RowVector polynomial_mutation(const RowVector& x, double eta_m, double pm, const Bounds& b, Rng& r);

/// With probability pc, swaps each gene between the two parents with probability 0.5.
Matrix uniform_crossover(const Matrix& parents, double pc, Rng& r);

/// Adds N(0, sigma_j) to each gene with probability pm, then clamps.
RowVector gaussian_mutation(const RowVector& x, const Vector& sigma, double pm, const Bounds& b, Rng& r);

/// Binary tournament: lower key wins, ties go to the first drawn.
std::vector<std::size_t> binary_tournament(const std::vector<double>& key, std::size_t count, Rng& r);

/// Binary tournament on (rank ascending, crowding descending).
std::vector<std::size_t> crowded_tournament(const std::vector<std::size_t>& rank,
                                            const std::vector<double>& crowding, std::size_t count, Rng& r);

/// Offspring for consecutive pairs of the mating pool via SBX + polynomial
/// mutation; returns exactly `count` rows.
Matrix sbx_pm_offspring(const Matrix& x, const std::vector<std::size_t>& mating_pool, std::size_t count,
                        const SbxParams& sbx, const PolynomialMutationParams& pm, const Bounds& b, Rng& r);

double resolve_pm(double pm, std::size_t dim);

} // namespace evobench
