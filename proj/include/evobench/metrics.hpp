#pragma once

// Solution-quality and efficiency indicators.

#include "evobench/core.hpp"

namespace evobench {

/// Minimum of objective column 0.
double best_fitness(const Population& pop);
double best_fitness(const Matrix& f);

/// Inverted generational distance: mean over reference rows of the Euclidean
/// distance to the nearest solution row.
double igd(const Matrix& solutions, const Matrix& reference);

/// Exact dominated hypervolume bounded by `ref` (minimization), by sweep for
/// M <= 3. Points not strictly better than `ref` in every objective contribute
/// nothing. M >= 4 is rejected.
double hypervolume(const Matrix& points, const RowVector& ref);

/// Monte Carlo estimate over the box [min(points), ref].
double hypervolume_mc(const Matrix& points, const RowVector& ref, std::size_t samples, Rng& rng);

/// Mean Euclidean distance over all unordered pairs of rows of x.
double diversity(const Matrix& x);
double diversity(const Population& pop);

/// t_ref / t_test.
double speedup(double t_ref, double t_test);

struct Throughput {
    std::uint64_t nfe = 0;
    double per_second = 0;
};
Throughput throughput(std::uint64_t nfe, double window_s);

} // namespace evobench
