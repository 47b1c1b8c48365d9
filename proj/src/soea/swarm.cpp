#include "evobench/soea.hpp"

#include <algorithm>

namespace evobench {

Population initial_population(const Problem& p, std::size_t n, Backend& backend, Rng& r) {
    if (n < 1) throw ContractViolation("population size must be >= 1");
    Population pop;
    pop.x = r.uniform_matrix(n, p.bounds());
    pop.f = backend.evaluate(p, pop.x);
    pop.nfe_stamp = n;
    return pop;
}

PsoState pso_init(const Population& pop, const PsoParams& params) {
    PsoState s;
    s.params = params;
    s.v = Matrix::Zero(pop.x.rows(), pop.x.cols());
    s.pbest_x = pop.x;
    s.pbest_f = pop.f.col(0);
    Eigen::Index best = 0;
    s.gbest_f = s.pbest_f.minCoeff(&best);
    s.gbest_x = pop.x.row(best);
    return s;
}

std::size_t pso_step(PsoState& s, Population& pop, const Problem& p, Backend& backend, Rng& r) {
    const Bounds& b = p.bounds();
    const Eigen::Index n = pop.x.rows();
    const Eigen::Index d = pop.x.cols();
    const Vector vmax = s.params.vmax_fraction * b.range();
    const auto& [w, c1, c2, vfrac] = s.params;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const double r1 = r.uniform();
            const double r2 = r.uniform();
            const double x = pop.x(i, j);
            double v = w * s.v(i, j) + c1 * r1 * (s.pbest_x(i, j) - x) + c2 * r2 * (s.gbest_x[j] - x);
            v = std::clamp(v, -vmax[j], vmax[j]);
            s.v(i, j) = v;
            pop.x(i, j) = std::clamp(x + v, b.lower[j], b.upper[j]);
        }
    }
    pop.f = backend.evaluate(p, pop.x);
    pop.nfe_stamp += static_cast<std::uint64_t>(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (pop.f(i, 0) <= s.pbest_f[i]) {
            s.pbest_f[i] = pop.f(i, 0);
            s.pbest_x.row(i) = pop.x.row(i);
        }
        if (s.pbest_f[i] <= s.gbest_f) {
            s.gbest_f = s.pbest_f[i];
            s.gbest_x = s.pbest_x.row(i);
        }
    }
    return static_cast<std::size_t>(n);
}

CsoState cso_init(const Population& pop, double phi) {
    return {Matrix::Zero(pop.x.rows(), pop.x.cols()), phi};
}

std::size_t cso_step(CsoState& s, Population& pop, const Problem& p, Backend& backend, Rng& r) {
    const Bounds& b = p.bounds();
    const std::size_t n = pop.size();
    const std::size_t pairs = n / 2;
    if (pairs == 0) return 0;
    const RowVector mean = pop.x.colwise().mean();
    const auto perm = r.permutation(n);

    std::vector<Eigen::Index> losers(pairs);
    Matrix moved(static_cast<Eigen::Index>(pairs), pop.x.cols());
    for (std::size_t k = 0; k < pairs; ++k) {
        auto a = static_cast<Eigen::Index>(perm[2 * k]);
        auto c = static_cast<Eigen::Index>(perm[2 * k + 1]);
        if (pop.f(c, 0) < pop.f(a, 0)) std::swap(a, c); // a wins
        losers[k] = c;
        for (Eigen::Index j = 0; j < pop.x.cols(); ++j) {
            const double r1 = r.uniform();
            const double r2 = r.uniform();
            const double r3 = r.uniform();
            const double xl = pop.x(c, j);
            const double v = r1 * s.v(c, j) + r2 * (pop.x(a, j) - xl) + s.phi * r3 * (mean[j] - xl);
            s.v(c, j) = v;
            moved(static_cast<Eigen::Index>(k), j) = std::clamp(xl + v, b.lower[j], b.upper[j]);
        }
    }
    const Matrix f = backend.evaluate(p, moved);
    for (std::size_t k = 0; k < pairs; ++k) {
        pop.x.row(losers[k]) = moved.row(static_cast<Eigen::Index>(k));
        pop.f.row(losers[k]) = f.row(static_cast<Eigen::Index>(k));
    }
    pop.nfe_stamp += pairs;
    return pairs;
}

} // namespace evobench
