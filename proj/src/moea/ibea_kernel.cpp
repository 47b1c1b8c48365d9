#include "ibea_kernel.hpp"

#include <algorithm>

namespace evobench::detail {

void epsilon_fitness(const double* const* down, const double* const* up, std::size_t m, std::size_t n, double* fit,
                     double* scratch) {
    for (std::size_t i = 0; i < n; ++i) {
        const double u0 = up[0][i];
        const double* d0 = down[0];
        double acc = 0;
        if (m == 1) {
            for (std::size_t j = 0; j < n; ++j) acc += d0[j] * u0;
            fit[i] = -(acc - d0[i] * u0);
            continue;
        }
        for (std::size_t j = 0; j < n; ++j) scratch[j] = d0[j] * u0;
        for (std::size_t k = 1; k + 1 < m; ++k) {
            const double uk = up[k][i];
            const double* dk = down[k];
            for (std::size_t j = 0; j < n; ++j) scratch[j] = std::min(scratch[j], dk[j] * uk);
        }
        const double ul = up[m - 1][i];
        const double* dl = down[m - 1];
        for (std::size_t j = 0; j < n; ++j) acc += std::min(scratch[j], dl[j] * ul);
        fit[i] = -(acc - std::min(scratch[i], dl[i] * ul));
    }
}

void epsilon_remove(const double* const* down, const double* const* up, std::size_t m, std::size_t n, std::size_t w,
                    double* fit, double* scratch) {
    const double d0 = down[0][w];
    const double* u0 = up[0];
    if (m == 1) {
        for (std::size_t k = 0; k < n; ++k) fit[k] += d0 * u0[k];
        return;
    }
    for (std::size_t k = 0; k < n; ++k) scratch[k] = d0 * u0[k];
    for (std::size_t q = 1; q + 1 < m; ++q) {
        const double dq = down[q][w];
        const double* uq = up[q];
        for (std::size_t k = 0; k < n; ++k) scratch[k] = std::min(scratch[k], dq * uq[k]);
    }
    const double dl = down[m - 1][w];
    const double* ul = up[m - 1];
    for (std::size_t k = 0; k < n; ++k) fit[k] += std::min(scratch[k], dl * ul[k]);
}

} // namespace evobench::detail
