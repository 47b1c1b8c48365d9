#include "evobench/moea.hpp"

#include <fmt/core.h>

#include <algorithm>

namespace evobench {

std::size_t moead_lattice_size(std::size_t m, std::size_t n) {
    return simplex_lattice_size(m, lattice_h_for(m, n));
}

MoeadState moead_init(Population pop, std::size_t m, const Variation& v) {
    const std::size_t h = lattice_h_for(m, pop.size());
    const std::size_t k = simplex_lattice_size(m, h);
    if (pop.size() < k) {
        throw InsufficientPopulation(fmt::format("MOEA/D needs at least {} individuals for {} objectives", k, m));
    }
    MoeadState s;
    s.weights = das_dennis_vectors(m, h);
    s.weights.neighbors = neighbor_table(s.weights.v, std::min<std::size_t>(s.T, k));
    s.T = std::min<std::size_t>(s.T, k);
    s.pop = Population{pop.x.topRows(static_cast<Eigen::Index>(k)), pop.f.topRows(static_cast<Eigen::Index>(k)),
                       pop.nfe_stamp};
    s.z_star = s.pop.f.colwise().minCoeff();
    s.variation = v;
    return s;
}

std::size_t moead_update(MoeadState& s, const Matrix& kids, const Matrix& fk, Rng& r) {
    const std::size_t k = s.pop.size();
    if (static_cast<std::size_t>(kids.rows()) != k || fk.rows() != kids.rows()) {
        throw ContractViolation("moead_update: expects one child per subproblem");
    }
    const auto row_span = [](const auto& m, Eigen::Index i) {
        return std::span<const double>(m.row(i).data(), static_cast<std::size_t>(m.cols()));
    };
    const std::span<const double> z(s.z_star.data(), static_cast<std::size_t>(s.z_star.size()));
    s.last_replacements = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const auto ci = static_cast<Eigen::Index>(i);
        s.z_star = s.z_star.cwiseMin(fk.row(ci));
        const auto& nb = s.weights.neighbors[i];
        const auto order = r.permutation(nb.size());
        std::size_t replaced = 0;
        for (std::size_t o : order) {
            if (replaced >= s.n_r) break;
            const auto j = static_cast<Eigen::Index>(nb[o]);
            const auto w = row_span(s.weights.v, j);
            const double child = pbi_scalarize(row_span(fk, ci), w, z, s.theta);
            const double incumbent = pbi_scalarize(row_span(s.pop.f, j), w, z, s.theta);
            if (child < incumbent) {
                s.pop.x.row(j) = kids.row(ci);
                s.pop.f.row(j) = fk.row(ci);
                ++replaced;
            }
        }
        s.last_replacements += replaced;
    }
    return s.last_replacements;
}

std::size_t moead_step(MoeadState& s, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t k = s.pop.size();
    const Bounds& b = p.bounds();
    const double pm = resolve_pm(s.variation.pm.pm, b.dim());

    Matrix kids(s.pop.x.rows(), s.pop.x.cols());
    Matrix parents(2, s.pop.x.cols());
    for (std::size_t i = 0; i < k; ++i) {
        const auto& nb = s.weights.neighbors[i];
        std::size_t a = nb[0], c = nb[0];
        if (nb.size() >= 2) {
            const auto pick = r.distinct(nb.size(), 2, nb.size());
            a = nb[pick[0]];
            c = nb[pick[1]];
        }
        parents.row(0) = s.pop.x.row(static_cast<Eigen::Index>(a));
        parents.row(1) = s.pop.x.row(static_cast<Eigen::Index>(c));
        const Matrix two = sbx_crossover(parents, s.variation.sbx, b, r);
        kids.row(static_cast<Eigen::Index>(i)) = polynomial_mutation(two.row(0), s.variation.pm.eta_m, pm, b, r);
    }
    const Matrix fk = backend.evaluate(p, kids);
    moead_update(s, kids, fk, r);
    s.pop.nfe_stamp += k;
    return k;
}

} // namespace evobench
