#include "evobench/soea.hpp"

#include <algorithm>
#include <numeric>

namespace evobench {

Matrix ga_offspring(const GaConfig& cfg, const Population& pop, const Bounds& b, Rng& r) {
    const std::size_t n = pop.size();
    if (n == 0) throw ContractViolation("ga_offspring: empty population");
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) key[i] = pop.f(static_cast<Eigen::Index>(i), 0);
    const auto mates = binary_tournament(key, n + (n % 2), r);
    const double pm = resolve_pm(cfg.pm, b.dim());
    const Vector sigma = cfg.sigma_fraction * b.range();

    Matrix out(pop.x.rows(), pop.x.cols());
    Matrix parents(2, pop.x.cols());
    std::size_t produced = 0;
    for (std::size_t k = 0; produced < n; k += 2) {
        parents.row(0) = pop.x.row(static_cast<Eigen::Index>(mates[k]));
        parents.row(1) = pop.x.row(static_cast<Eigen::Index>(mates[k + 1]));
        const Matrix kids = cfg.crossover == CrossoverKind::Sbx ? sbx_crossover(parents, SbxParams{cfg.eta_c, cfg.pc}, b, r)
                                                                 : uniform_crossover(parents, cfg.pc, r);
        for (Eigen::Index c = 0; c < 2 && produced < n; ++c) {
            RowVector child = cfg.mutation == MutationKind::Polynomial
                                  ? polynomial_mutation(kids.row(c), cfg.eta_m, pm, b, r)
                                  : gaussian_mutation(kids.row(c), sigma, pm, b, r);
            out.row(static_cast<Eigen::Index>(produced++)) = child;
        }
    }
    return out;
}

std::size_t ga_step(const GaConfig& cfg, Population& pop, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t n = pop.size();
    const Matrix kids = ga_offspring(cfg, pop, p.bounds(), r);
    const Matrix fk = backend.evaluate(p, kids);

    // Parents precede offspring, so the stable sort favours incumbents on ties.
    std::vector<double> key(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        key[i] = pop.f(static_cast<Eigen::Index>(i), 0);
        key[n + i] = fk(static_cast<Eigen::Index>(i), 0);
    }
    std::vector<std::size_t> order(2 * n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return key[a] < key[c]; });

    Population next{Matrix(pop.x.rows(), pop.x.cols()), Matrix(pop.f.rows(), pop.f.cols()), pop.nfe_stamp + n};
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t src = order[i];
        const auto row = static_cast<Eigen::Index>(i);
        if (src < n) {
            next.x.row(row) = pop.x.row(static_cast<Eigen::Index>(src));
            next.f.row(row) = pop.f.row(static_cast<Eigen::Index>(src));
        } else {
            next.x.row(row) = kids.row(static_cast<Eigen::Index>(src - n));
            next.f.row(row) = fk.row(static_cast<Eigen::Index>(src - n));
        }
    }
    pop = std::move(next);
    return n;
}

} // namespace evobench
