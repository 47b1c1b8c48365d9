#include "evobench/moea.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evobench {

ReferenceVectors das_dennis_vectors(std::size_t m, std::size_t h) {
    return ReferenceVectors{simplex_lattice(m, h), {}};
}

std::size_t lattice_h_for(std::size_t m, std::size_t n) {
    if (m < 1) throw ContractViolation("lattice_h_for: m must be >= 1");
    if (m == 1) return 1;
    std::size_t h = 1;
    while (simplex_lattice_size(m, h + 1) <= n) ++h;
    return h;
}

Matrix unit_rows(const Matrix& v) {
    Matrix out = v;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        const double n = out.row(i).norm();
        if (n > 0) out.row(i) /= n;
    }
    return out;
}

std::vector<std::vector<std::size_t>> neighbor_table(const Matrix& v, std::size_t t) {
    const auto k = static_cast<std::size_t>(v.rows());
    t = std::min(t, k);
    std::vector<std::vector<std::size_t>> out(k);
    std::vector<double> d(k);
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            d[j] = (v.row(static_cast<Eigen::Index>(i)) - v.row(static_cast<Eigen::Index>(j))).squaredNorm();
        }
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });
        out[i].assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(t));
    }
    return out;
}

Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& idx) {
    Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
    }
    return out;
}

Population take(const Population& pop, const std::vector<std::size_t>& idx) {
    return Population{take_rows(pop.x, idx), take_rows(pop.f, idx), pop.nfe_stamp};
}

Population merge(const Population& a, const Population& b) {
    Population out;
    out.x.resize(a.x.rows() + b.x.rows(), a.x.cols());
    out.f.resize(a.f.rows() + b.f.rows(), a.f.cols());
    out.x.topRows(a.x.rows()) = a.x;
    out.x.bottomRows(b.x.rows()) = b.x;
    out.f.topRows(a.f.rows()) = a.f;
    out.f.bottomRows(b.f.rows()) = b.f;
    out.nfe_stamp = std::max(a.nfe_stamp, b.nfe_stamp);
    return out;
}

Population evaluate_offspring(const Matrix& x, const Population& parents, const Problem& p, Backend& backend) {
    Population out{x, backend.evaluate(p, x), parents.nfe_stamp + static_cast<std::uint64_t>(x.rows())};
    return out;
}

double pbi_scalarize(std::span<const double> fv, std::span<const double> lambda, std::span<const double> z_star,
                     double theta) {
    if (fv.size() != lambda.size() || fv.size() != z_star.size()) {
        throw ContractViolation("pbi_scalarize: length mismatch");
    }
    double norm = 0;
    for (double l : lambda) norm += l * l;
    norm = std::sqrt(norm);
    if (norm == 0) throw ContractViolation("pbi_scalarize: zero weight vector");
    double d1 = 0;
    for (std::size_t i = 0; i < fv.size(); ++i) d1 += (fv[i] - z_star[i]) * lambda[i];
    d1 = std::abs(d1) / norm;
    double d2 = 0;
    for (std::size_t i = 0; i < fv.size(); ++i) {
        const double e = fv[i] - z_star[i] - d1 * lambda[i] / norm;
        d2 += e * e;
    }
    return d1 + theta * std::sqrt(d2);
}

} // namespace evobench
