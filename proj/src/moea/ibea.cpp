#include "evobench/moea.hpp"

#include "ibea_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace evobench {

double epsilon_indicator(const Matrix& f, Eigen::Index a, Eigen::Index b) {
    return (f.row(a) - f.row(b)).maxCoeff();
}

namespace {

Matrix normalize_unit(const Matrix& f) {
    const RowVector lo = f.colwise().minCoeff();
    RowVector span = f.colwise().maxCoeff() - lo;
    for (Eigen::Index j = 0; j < span.size(); ++j) {
        if (!(span[j] > 0)) span[j] = 1.0;
    }
    Matrix out = f.rowwise() - lo;
    for (Eigen::Index i = 0; i < out.rows(); ++i) out.row(i).array() /= span.array();
    return out;
}

// Hypervolume-difference indicator on [0, 1]-scaled objectives with reference 1.1.
double hv_indicator(const Matrix& fn, Eigen::Index a, Eigen::Index b) {
    constexpr double ref = 1.1;
    const auto vol = [&](Eigen::Index i) { return (ref - fn.row(i).array()).prod(); };
    if (dominates(fn, a, b) || fn.row(a) == fn.row(b)) return vol(b) - vol(a);
    const double both = (ref - fn.row(a).cwiseMax(fn.row(b)).array()).prod();
    return vol(b) - both;
}

struct EpsilonColumns {
    std::vector<std::vector<double>> data;
    std::vector<const double*> ptr;
};

// Column-major exp(factor * fn).
EpsilonColumns exp_columns(const Matrix& fn, double factor) {
    EpsilonColumns c;
    c.data.resize(static_cast<std::size_t>(fn.cols()));
    for (Eigen::Index j = 0; j < fn.cols(); ++j) {
        auto& col = c.data[static_cast<std::size_t>(j)];
        col.resize(static_cast<std::size_t>(fn.rows()));
        for (Eigen::Index i = 0; i < fn.rows(); ++i) col[static_cast<std::size_t>(i)] = std::exp(factor * fn(i, j));
        c.ptr.push_back(col.data());
    }
    return c;
}

double hv_scale(const Matrix& fn, double kappa) {
    double c = 0;
    for (Eigen::Index i = 0; i < fn.rows(); ++i) {
        for (Eigen::Index j = 0; j < fn.rows(); ++j) {
            if (i != j) c = std::max(c, std::abs(hv_indicator(fn, j, i)));
        }
    }
    return 1.0 / ((c > 0 ? c : 1.0) * kappa);
}

// On [0, 1]-scaled objectives max |I_eps| equals the largest objective range,
// which is 1 unless every row is identical.
double epsilon_scale(const Matrix& fn, double kappa) {
    const double c = fn.rows() > 0 ? (fn.colwise().maxCoeff() - fn.colwise().minCoeff()).maxCoeff() : 0.0;
    return 1.0 / ((c > 0 ? c : 1.0) * kappa);
}

} // namespace

std::vector<double> ibea_fitness(const Matrix& f, double kappa, IbeaIndicator ind) {
    if (!(kappa > 0)) throw ContractViolation("ibea_fitness: kappa must be positive");
    const auto n = static_cast<std::size_t>(f.rows());
    std::vector<double> fit(n, 0.0);
    if (n == 0) return fit;
    const Matrix fn = normalize_unit(f);
    if (ind == IbeaIndicator::AdditiveEpsilon) {
        const double scale = epsilon_scale(fn, kappa);
        const auto down = exp_columns(fn, -scale), up = exp_columns(fn, scale);
        std::vector<double> scratch(n);
        detail::epsilon_fitness(down.ptr.data(), up.ptr.data(), down.ptr.size(), n, fit.data(), scratch.data());
        return fit;
    }
    const double scale = hv_scale(fn, kappa);
    for (Eigen::Index i = 0; i < fn.rows(); ++i) {
        for (Eigen::Index j = 0; j < fn.rows(); ++j) {
            if (i != j) fit[static_cast<std::size_t>(i)] -= std::exp(-hv_indicator(fn, j, i) * scale);
        }
    }
    return fit;
}

std::vector<std::size_t> ibea_select(const Matrix& f, std::size_t n, double kappa, IbeaIndicator ind,
                                     std::vector<double>* fitness_out) {
    if (!(kappa > 0)) throw ContractViolation("ibea_select: kappa must be positive");
    const auto total = static_cast<std::size_t>(f.rows());
    std::vector<double> fit(total, 0.0);
    std::vector<char> removed(total, 0);
    const Matrix fn = normalize_unit(f);

    if (ind == IbeaIndicator::AdditiveEpsilon) {
        const double scale = epsilon_scale(fn, kappa);
        const auto down = exp_columns(fn, -scale), up = exp_columns(fn, scale);
        const std::size_t m = down.ptr.size();
        std::vector<double> scratch(total);
        detail::epsilon_fitness(down.ptr.data(), up.ptr.data(), m, total, fit.data(), scratch.data());
        // Removed rows hold +inf so the argmin needs no mask.
        for (std::size_t left = total; left > n; --left) {
            const auto worst = static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
            removed[worst] = 1;
            fit[worst] = kInf;
            detail::epsilon_remove(down.ptr.data(), up.ptr.data(), m, total, worst, fit.data(), scratch.data());
        }
    } else {
        const double scale = hv_scale(fn, kappa);
        for (Eigen::Index i = 0; i < fn.rows(); ++i) {
            for (Eigen::Index j = 0; j < fn.rows(); ++j) {
                if (i != j) fit[static_cast<std::size_t>(i)] -= std::exp(-hv_indicator(fn, j, i) * scale);
            }
        }
        for (std::size_t left = total; left > n; --left) {
            std::size_t worst = total;
            for (std::size_t i = 0; i < total; ++i) {
                if (!removed[i] && (worst == total || fit[i] < fit[worst])) worst = i;
            }
            removed[worst] = 1;
            for (std::size_t k = 0; k < total; ++k) {
                if (!removed[k]) {
                    fit[k] += std::exp(-hv_indicator(fn, static_cast<Eigen::Index>(worst), static_cast<Eigen::Index>(k)) *
                                       scale);
                }
            }
        }
    }

    std::vector<std::size_t> keep;
    keep.reserve(n);
    if (fitness_out) fitness_out->clear();
    for (std::size_t i = 0; i < total; ++i) {
        if (removed[i]) continue;
        keep.push_back(i);
        if (fitness_out) fitness_out->push_back(fit[i]);
    }
    return keep;
}

IbeaState ibea_init(Population pop, double kappa, IbeaIndicator ind, const Variation& v) {
    IbeaState s;
    s.fitness = ibea_fitness(pop.f, kappa, ind);
    s.pop = std::move(pop);
    s.kappa = kappa;
    s.indicator = ind;
    s.variation = v;
    return s;
}

std::size_t ibea_step(IbeaState& s, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t n = s.pop.size();
    // Higher fitness is better; the tournament keeps the lower key.
    std::vector<double> key(s.fitness.size());
    for (std::size_t i = 0; i < key.size(); ++i) key[i] = -s.fitness[i];
    const auto mates = binary_tournament(key, n, r);
    const Matrix kids = sbx_pm_offspring(s.pop.x, mates, n, s.variation.sbx, s.variation.pm, p.bounds(), r);
    const Population off = evaluate_offspring(kids, s.pop, p, backend);
    const Population pool = merge(s.pop, off);
    const auto keep = ibea_select(pool.f, n, s.kappa, s.indicator, &s.fitness);
    s.pop = take(pool, keep);
    return n;
}

} // namespace evobench
