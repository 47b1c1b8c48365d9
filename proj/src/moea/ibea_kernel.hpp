#pragma once

// Inner loops of the epsilon-indicator IBEA fitness, kept in their own
// translation unit so they can be built with aggressive optimization.
//
// With s the indicator scale, exp(-s * I(j, i)) = exp(-s * max_k (f_jk - f_ik))
// = min_k down[k][j] * up[k][i], where down = exp(-s f) and up = exp(s f).
// The exponentials are taken once per entry rather than once per pair.

#include <cstddef>

namespace evobench::detail {

// `down` and `up` hold m pointers to n contiguous values each.
// fit[i] = sum over j != i of -exp(-I(j, i) * s).
void epsilon_fitness(const double* const* down, const double* const* up, std::size_t m, std::size_t n, double* fit,
                     double* scratch);

// fit[k] += exp(-I(w, k) * s) for every k; the caller ignores removed rows.
void epsilon_remove(const double* const* down, const double* const* up, std::size_t m, std::size_t n, std::size_t w,
                    double* fit, double* scratch);

} // namespace evobench::detail
