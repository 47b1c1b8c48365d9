#include "evobench/moea.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace evobench {

AngleAssociation associate_angle(const Matrix& ft, const Matrix& unit_v) {
    const auto n = static_cast<std::size_t>(ft.rows());
    AngleAssociation a{std::vector<std::size_t>(n, 0), std::vector<double>(n, 0.0)};
    for (Eigen::Index i = 0; i < ft.rows(); ++i) {
        const double norm = ft.row(i).norm();
        if (norm == 0) continue;
        double best = -kInf;
        for (Eigen::Index k = 0; k < unit_v.rows(); ++k) {
            const double c = ft.row(i).dot(unit_v.row(k)) / norm;
            if (c > best) {
                best = c;
                a.vector[static_cast<std::size_t>(i)] = static_cast<std::size_t>(k);
            }
        }
        a.angle[static_cast<std::size_t>(i)] = std::acos(std::clamp(best, -1.0, 1.0));
    }
    return a;
}

std::vector<double> vector_gammas(const Matrix& unit_v) {
    const auto k = static_cast<std::size_t>(unit_v.rows());
    std::vector<double> g(k, std::numbers::pi / 2);
    if (k < 2) return g;
    for (Eigen::Index i = 0; i < unit_v.rows(); ++i) {
        double best = -kInf;
        for (Eigen::Index j = 0; j < unit_v.rows(); ++j) {
            if (i != j) best = std::max(best, unit_v.row(i).dot(unit_v.row(j)));
        }
        const double angle = std::acos(std::clamp(best, -1.0, 1.0));
        g[static_cast<std::size_t>(i)] = angle > 0 ? angle : 1e-12;
    }
    return g;
}

std::vector<std::size_t> apd_select(const Matrix& f, const Matrix& unit_v, double progress, double alpha,
                                    std::size_t n) {
    const auto rows = static_cast<std::size_t>(f.rows());
    if (rows == 0) return {};
    const Matrix ft = f.rowwise() - f.colwise().minCoeff();
    const AngleAssociation assoc = associate_angle(ft, unit_v);
    const auto gamma = vector_gammas(unit_v);
    const double penalty = static_cast<double>(f.cols()) * std::pow(std::clamp(progress, 0.0, 1.0), alpha);

    std::vector<double> apd(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        const double theta = assoc.angle[i] / gamma[assoc.vector[i]];
        apd[i] = (1.0 + penalty * theta) * ft.row(static_cast<Eigen::Index>(i)).norm();
    }

    const auto k = static_cast<std::size_t>(unit_v.rows());
    std::vector<std::size_t> best(k, rows);
    for (std::size_t i = 0; i < rows; ++i) {
        std::size_t& b = best[assoc.vector[i]];
        if (b == rows || apd[i] < apd[b]) b = i;
    }
    std::vector<std::size_t> chosen;
    std::vector<char> taken(rows, 0);
    for (std::size_t b : best) {
        if (b == rows) continue;
        chosen.push_back(b);
        taken[b] = 1;
    }
    const auto by_apd = [&](std::size_t a, std::size_t b) { return apd[a] < apd[b]; };
    if (chosen.size() > n) {
        std::stable_sort(chosen.begin(), chosen.end(), by_apd);
        chosen.resize(n);
    } else if (chosen.size() < n) {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < rows; ++i) {
            if (!taken[i]) rest.push_back(i);
        }
        std::stable_sort(rest.begin(), rest.end(), by_apd);
        for (std::size_t i = 0; i < rest.size() && chosen.size() < n; ++i) chosen.push_back(rest[i]);
    }
    return chosen;
}

RveaState rvea_init(Population pop, std::size_t m, const Variation& v) {
    RveaState s;
    s.v0 = unit_rows(simplex_lattice(m, lattice_h_for(m, pop.size())));
    s.v = s.v0;
    s.pop = std::move(pop);
    s.variation = v;
    return s;
}

std::size_t rvea_step(RveaState& s, double progress, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t n = s.pop.size();
    std::vector<std::size_t> mates(n);
    for (auto& m : mates) m = r.index(n);
    const Matrix kids = sbx_pm_offspring(s.pop.x, mates, n, s.variation.sbx, s.variation.pm, p.bounds(), r);
    const Population off = evaluate_offspring(kids, s.pop, p, backend);
    const Population pool = merge(s.pop, off);
    s.pop = take(pool, apd_select(pool.f, s.v, progress, s.alpha, n));

    const auto bucket = static_cast<long long>(std::floor(std::clamp(progress, 0.0, 1.0) / s.fr));
    if (bucket > s.last_adapt_bucket) {
        s.last_adapt_bucket = bucket;
        RowVector range = s.pop.f.colwise().maxCoeff() - s.pop.f.colwise().minCoeff();
        for (Eigen::Index j = 0; j < range.size(); ++j) {
            if (!(range[j] > 0)) range[j] = 1e-12;
        }
        Matrix scaled = s.v0;
        for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i).array() *= range.array();
        s.v = unit_rows(scaled);
    }
    return n;
}

// ---------------------------------------------------------------------------

std::vector<double> lmocso_scores(const Matrix& f, const Matrix& unit_refs, double theta) {
    const auto n = static_cast<std::size_t>(f.rows());
    std::vector<double> score(n, 0.0);
    if (n == 0) return score;
    const RowVector lo = f.colwise().minCoeff();
    RowVector span = f.colwise().maxCoeff() - lo;
    for (Eigen::Index j = 0; j < span.size(); ++j) {
        if (!(span[j] > 0)) span[j] = 1.0;
    }
    RowVector fn(f.cols());
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        fn = (f.row(i) - lo).cwiseQuotient(span);
        const double norm = fn.norm();
        Eigen::Index nearest = 0;
        double best = -kInf;
        for (Eigen::Index k = 0; k < unit_refs.rows(); ++k) {
            const double c = fn.dot(unit_refs.row(k));
            if (c > best) {
                best = c;
                nearest = k;
            }
        }
        const double d1 = fn.dot(unit_refs.row(nearest));
        const double d2 = norm > 0 ? (fn - d1 * unit_refs.row(nearest)).norm() : 0.0;
        score[static_cast<std::size_t>(i)] = d1 + theta * d2;
    }
    return score;
}

std::vector<std::size_t> archive_truncate(const Matrix& f, const Matrix& unit_refs, std::size_t capacity,
                                          double theta) {
    std::vector<std::size_t> nd = first_front(f);
    // Drop exact duplicates so the archive holds distinct objective vectors.
    const auto lex_less = [&](std::size_t a, std::size_t b) {
        for (Eigen::Index j = 0; j < f.cols(); ++j) {
            const double fa = f(static_cast<Eigen::Index>(a), j);
            const double fb = f(static_cast<Eigen::Index>(b), j);
            if (fa != fb) return fa < fb;
        }
        return false;
    };
    std::stable_sort(nd.begin(), nd.end(), lex_less);
    std::vector<std::size_t> distinct;
    for (std::size_t i : nd) {
        if (distinct.empty() || lex_less(distinct.back(), i)) distinct.push_back(i);
    }
    std::sort(distinct.begin(), distinct.end());
    if (distinct.size() <= capacity) return distinct;

    const Matrix sub = take_rows(f, distinct);
    const auto score = lmocso_scores(sub, unit_refs, theta);
    const Matrix ft = sub.rowwise() - sub.colwise().minCoeff();
    const AngleAssociation assoc = associate_angle(ft, unit_refs);

    const auto k = static_cast<std::size_t>(unit_refs.rows());
    const std::size_t rows = distinct.size();
    std::vector<std::size_t> best(k, rows);
    for (std::size_t i = 0; i < rows; ++i) {
        std::size_t& b = best[assoc.vector[i]];
        if (b == rows || score[i] < score[b]) b = i;
    }
    std::vector<std::size_t> chosen;
    std::vector<char> taken(rows, 0);
    for (std::size_t b : best) {
        if (b == rows) continue;
        chosen.push_back(b);
        taken[b] = 1;
    }
    const auto by_score = [&](std::size_t a, std::size_t b) { return score[a] < score[b]; };
    if (chosen.size() > capacity) {
        std::stable_sort(chosen.begin(), chosen.end(), by_score);
        chosen.resize(capacity);
    } else {
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < rows; ++i) {
            if (!taken[i]) rest.push_back(i);
        }
        std::stable_sort(rest.begin(), rest.end(), by_score);
        for (std::size_t i = 0; i < rest.size() && chosen.size() < capacity; ++i) chosen.push_back(rest[i]);
    }
    std::sort(chosen.begin(), chosen.end());
    for (auto& c : chosen) c = distinct[c];
    return chosen;
}

LmocsoState lmocso_init(Population pop, std::size_t m, const PolynomialMutationParams& pm) {
    LmocsoState s;
    s.refs = unit_rows(simplex_lattice(m, lattice_h_for(m, pop.size())));
    s.v = Matrix::Zero(pop.x.rows(), pop.x.cols());
    s.archive = take(pop, archive_truncate(pop.f, s.refs, pop.size(), s.theta));
    s.swarm = std::move(pop);
    s.pm = pm;
    return s;
}

std::size_t lmocso_step(LmocsoState& s, double progress, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t n = s.swarm.size();
    const std::size_t pairs = n / 2;
    const Bounds& b = p.bounds();
    const auto d = s.swarm.x.cols();
    const double pm = resolve_pm(s.pm.pm, b.dim());
    const auto score = lmocso_scores(s.swarm.f, s.refs, s.theta);
    const auto perm = r.permutation(n);

    Matrix moved(static_cast<Eigen::Index>(pairs), d);
    Matrix moved_v(static_cast<Eigen::Index>(pairs), d);
    for (std::size_t k = 0; k < pairs; ++k) {
        std::size_t w = perm[2 * k];
        std::size_t l = perm[2 * k + 1];
        if (score[l] < score[w]) std::swap(w, l);
        const auto wi = static_cast<Eigen::Index>(w);
        const auto li = static_cast<Eigen::Index>(l);
        const auto row = static_cast<Eigen::Index>(k);
        RowVector x(d);
        for (Eigen::Index j = 0; j < d; ++j) {
            const double r0 = r.uniform();
            const double r1 = r.uniform();
            const double v_old = s.v(li, j);
            const double v_new = r0 * v_old + r1 * (s.swarm.x(wi, j) - s.swarm.x(li, j));
            moved_v(row, j) = v_new;
            x[j] = s.swarm.x(li, j) + v_new + r0 * (v_new - v_old);
        }
        clamp_row(x, b);
        moved.row(row) = pm > 0 ? polynomial_mutation(x, s.pm.eta_m, pm, b, r) : x;
    }
    const Population off = evaluate_offspring(moved, s.swarm, p, backend);

    const Population pool = merge(s.swarm, off);
    Matrix pool_v(pool.x.rows(), d);
    pool_v.topRows(s.v.rows()) = s.v;
    pool_v.bottomRows(moved_v.rows()) = moved_v;
    const auto keep = apd_select(pool.f, s.refs, progress, s.alpha, n);
    s.swarm = take(pool, keep);
    s.v = take_rows(pool_v, keep);

    const Population arch_pool = merge(s.archive, off);
    s.archive = take(arch_pool, archive_truncate(arch_pool.f, s.refs, n, s.theta));
    s.archive.nfe_stamp = s.swarm.nfe_stamp;
    return pairs;
}

} // namespace evobench
