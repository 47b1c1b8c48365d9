#include "evobench/operators.hpp"

#include <algorithm>
#include <cmath>

namespace evobench {

double resolve_pm(double pm, std::size_t dim) {
    return pm < 0 ? 1.0 / static_cast<double>(std::max<std::size_t>(1, dim)) : pm;
}

Matrix sbx_crossover(const Matrix& parents, double eta_c, const Bounds& b, Rng& r) {
    return sbx_crossover(parents, SbxParams{eta_c, 1.0}, b, r);
}

Matrix sbx_crossover(const Matrix& parents, const SbxParams& params, const Bounds& b, Rng& r) {
    if (parents.rows() != 2) throw ContractViolation("sbx_crossover: expects exactly two parents");
    if (static_cast<std::size_t>(parents.cols()) != b.dim()) throw ContractViolation("sbx_crossover: dimension mismatch");
    Matrix children = parents;
    if (r.uniform() >= params.pc) return children;
    const double expo = 1.0 / (params.eta_c + 1.0);
    for (Eigen::Index j = 0; j < parents.cols(); ++j) {
        const double u = r.uniform();
        if (r.uniform() >= 0.5) continue;
        const double p1 = parents(0, j);
        const double p2 = parents(1, j);
        if (std::abs(p1 - p2) <= 1e-14) continue;
        const double beta = u <= 0.5 ? std::pow(2.0 * u, expo) : std::pow(1.0 / (2.0 * (1.0 - u)), expo);
        children(0, j) = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2);
        children(1, j) = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2);
    }
    clamp_in_place(children, b);
    return children;
}

RowVector polynomial_mutation(const RowVector& x, double eta_m, double pm, const Bounds& b, Rng& r) {
    RowVector y = x;
    const double expo = 1.0 / (eta_m + 1.0);
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (r.uniform() >= pm) continue;
        const double lo = b.lower[j];
        const double hi = b.upper[j];
        const double span = hi - lo;
        const double v = std::clamp(y[j], lo, hi);
        const double mu = r.uniform();
        double delta = 0;
        if (mu <= 0.5) {
            const double d1 = (v - lo) / span;
            const double t = 2.0 * mu + (1.0 - 2.0 * mu) * std::pow(1.0 - d1, eta_m + 1.0);
            delta = std::pow(t, expo) - 1.0;
        } else {
            const double d2 = (hi - v) / span;
            const double t = 2.0 * (1.0 - mu) + 2.0 * (mu - 0.5) * std::pow(1.0 - d2, eta_m + 1.0);
            delta = 1.0 - std::pow(t, expo);
        }
        y[j] = std::clamp(v + delta * span, lo, hi);
    }
    return y;
}

Matrix uniform_crossover(const Matrix& parents, double pc, Rng& r) {
    if (parents.rows() != 2) throw ContractViolation("uniform_crossover: expects exactly two parents");
    Matrix children = parents;
    if (r.uniform() >= pc) return children;
    for (Eigen::Index j = 0; j < parents.cols(); ++j) {
        if (r.uniform() < 0.5) std::swap(children(0, j), children(1, j));
    }
    return children;
}

RowVector gaussian_mutation(const RowVector& x, const Vector& sigma, double pm, const Bounds& b, Rng& r) {
    RowVector y = x;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        if (r.uniform() >= pm) continue;
        y[j] = std::clamp(y[j] + r.normal(0.0, sigma[j]), b.lower[j], b.upper[j]);
    }
    return y;
}

std::vector<std::size_t> binary_tournament(const std::vector<double>& key, std::size_t count, Rng& r) {
    std::vector<std::size_t> out(count);
    const std::size_t n = key.size();
    for (auto& o : out) {
        const std::size_t a = r.index(n);
        const std::size_t c = r.index(n);
        o = key[c] < key[a] ? c : a;
    }
    return out;
}

std::vector<std::size_t> crowded_tournament(const std::vector<std::size_t>& rank,
                                            const std::vector<double>& crowding, std::size_t count, Rng& r) {
    std::vector<std::size_t> out(count);
    const std::size_t n = rank.size();
    for (auto& o : out) {
        const std::size_t a = r.index(n);
        const std::size_t c = r.index(n);
        const bool c_better = rank[c] < rank[a] || (rank[c] == rank[a] && crowding[c] > crowding[a]);
        o = c_better ? c : a;
    }
    return out;
}

Matrix sbx_pm_offspring(const Matrix& x, const std::vector<std::size_t>& mating_pool, std::size_t count,
                        const SbxParams& sbx, const PolynomialMutationParams& pm, const Bounds& b, Rng& r) {
    if (mating_pool.empty()) throw ContractViolation("sbx_pm_offspring: empty mating pool");
    const double pm_gene = resolve_pm(pm.pm, b.dim());
    Matrix out(count, x.cols());
    Matrix parents(2, x.cols());
    std::size_t produced = 0;
    std::size_t cursor = 0;
    while (produced < count) {
        parents.row(0) = x.row(static_cast<Eigen::Index>(mating_pool[cursor++ % mating_pool.size()]));
        parents.row(1) = x.row(static_cast<Eigen::Index>(mating_pool[cursor++ % mating_pool.size()]));
        const Matrix kids = sbx_crossover(parents, sbx, b, r);
        for (Eigen::Index k = 0; k < 2 && produced < count; ++k) {
            out.row(static_cast<Eigen::Index>(produced++)) = polynomial_mutation(kids.row(k), pm.eta_m, pm_gene, b, r);
        }
    }
    return out;
}

} // namespace evobench
