#pragma once

// Pareto dominance machinery shared by the multi-objective algorithms and metrics.

#include "evobench/core.hpp"

#include <span>
#include <vector>

namespace evobench {

using Front = std::vector<std::size_t>;

/// a <= b everywhere and a < b somewhere (minimization).
bool dominates(std::span<const double> a, std::span<const double> b) noexcept;
bool dominates(const Matrix& f, Eigen::Index a, Eigen::Index b) noexcept;

/// Successive non-dominated fronts. Every row index appears exactly once;
/// indices inside a front are ascending.
std::vector<Front> non_dominated_sort(const Matrix& f);

/// Rank of every row (0 = first front).
std::vector<std::size_t> front_ranks(const std::vector<Front>& fronts, std::size_t n);

Front first_front(const Matrix& f);

/// Crowding distance of the rows of `f` (one front). Boundary rows get +inf;
/// an objective with max == min contributes 0.
std::vector<double> crowding_distance(const Matrix& f);

} // namespace evobench
