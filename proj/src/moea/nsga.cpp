#include "evobench/moea.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evobench {

Nsga2Selection nsga2_select(const Matrix& f, std::size_t n) {
    const auto fronts = non_dominated_sort(f);
    Nsga2Selection out;
    out.survivors.reserve(n);
    for (std::size_t r = 0; r < fronts.size() && out.survivors.size() < n; ++r) {
        const Front& front = fronts[r];
        const auto cd = crowding_distance(take_rows(f, front));
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), 0);
        const std::size_t room = n - out.survivors.size();
        if (front.size() > room) {
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
            order.resize(room);
        }
        for (std::size_t k : order) {
            out.survivors.push_back(front[k]);
            out.rank.push_back(r);
            out.crowding.push_back(cd[k]);
        }
    }
    return out;
}

Nsga2State nsga2_init(Population pop, const Variation& v) {
    Nsga2State s;
    const auto sel = nsga2_select(pop.f, pop.size());
    s.pop = take(pop, sel.survivors);
    s.rank = sel.rank;
    s.crowding = sel.crowding;
    s.variation = v;
    return s;
}

std::size_t nsga2_step(Nsga2State& s, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t n = s.pop.size();
    const auto mates = crowded_tournament(s.rank, s.crowding, n, r);
    const Matrix kids = sbx_pm_offspring(s.pop.x, mates, n, s.variation.sbx, s.variation.pm, p.bounds(), r);
    const Population off = evaluate_offspring(kids, s.pop, p, backend);
    const Population pool = merge(s.pop, off);
    const auto sel = nsga2_select(pool.f, n);
    s.pop = take(pool, sel.survivors);
    s.rank = sel.rank;
    s.crowding = sel.crowding;
    return n;
}

// ---------------------------------------------------------------------------

Association associate_perpendicular(const Matrix& fn, const Matrix& refs) {
    const Matrix u = unit_rows(refs);
    const auto n = static_cast<std::size_t>(fn.rows());
    Association a{std::vector<std::size_t>(n, 0), std::vector<double>(n, kInf)};
    for (Eigen::Index i = 0; i < fn.rows(); ++i) {
        const double sq = fn.row(i).squaredNorm();
        for (Eigen::Index k = 0; k < u.rows(); ++k) {
            const double proj = fn.row(i).dot(u.row(k));
            const double d = std::sqrt(std::max(0.0, sq - proj * proj));
            if (d < a.distance[static_cast<std::size_t>(i)]) {
                a.distance[static_cast<std::size_t>(i)] = d;
                a.vector[static_cast<std::size_t>(i)] = static_cast<std::size_t>(k);
            }
        }
    }
    return a;
}

Matrix nsga3_normalize(const Matrix& f) {
    const Eigen::Index m = f.cols();
    const RowVector ideal = f.colwise().minCoeff();
    Matrix ft = f.rowwise() - ideal;

    Eigen::MatrixXd extremes(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::Index best = 0;
        double best_asf = kInf;
        for (Eigen::Index i = 0; i < ft.rows(); ++i) {
            double asf = 0;
            for (Eigen::Index c = 0; c < m; ++c) asf = std::max(asf, ft(i, c) / (c == j ? 1.0 : 1e-6));
            if (asf < best_asf) {
                best_asf = asf;
                best = i;
            }
        }
        extremes.row(j) = ft.row(best);
    }

    RowVector intercept(m);
    bool ok = false;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(extremes);
    if (lu.rank() == m) {
        const Eigen::VectorXd a = lu.solve(Eigen::VectorXd::Ones(m));
        ok = true;
        for (Eigen::Index j = 0; j < m; ++j) {
            intercept[j] = 1.0 / a[j];
            if (!std::isfinite(intercept[j]) || intercept[j] <= 1e-10) ok = false;
        }
    }
    if (!ok) intercept = ft.colwise().maxCoeff();
    for (Eigen::Index j = 0; j < m; ++j) {
        if (!(intercept[j] > 1e-10)) intercept[j] = 1.0;
    }
    for (Eigen::Index i = 0; i < ft.rows(); ++i) ft.row(i).array() /= intercept.array();
    return ft;
}

std::vector<std::size_t> nsga3_select(const Matrix& f, std::size_t n, const Matrix& refs, Rng& r) {
    const auto fronts = non_dominated_sort(f);
    std::vector<std::size_t> chosen;
    std::size_t last = 0;
    for (; last < fronts.size(); ++last) {
        if (chosen.size() + fronts[last].size() > n) break;
        chosen.insert(chosen.end(), fronts[last].begin(), fronts[last].end());
        if (chosen.size() == n) return chosen;
    }
    if (last == fronts.size()) return chosen;

    const Front& lf = fronts[last];
    std::vector<std::size_t> st = chosen;
    st.insert(st.end(), lf.begin(), lf.end());
    const Association assoc = associate_perpendicular(nsga3_normalize(take_rows(f, st)), refs);

    const auto k = static_cast<std::size_t>(refs.rows());
    std::vector<std::size_t> rho(k, 0);
    for (std::size_t i = 0; i < chosen.size(); ++i) ++rho[assoc.vector[i]];
    // Last-front members per niche, nearest first.
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < lf.size(); ++i) members[assoc.vector[chosen.size() + i]].push_back(i);
    for (auto& mem : members) {
        std::stable_sort(mem.begin(), mem.end(), [&](std::size_t a, std::size_t b) {
            return assoc.distance[chosen.size() + a] < assoc.distance[chosen.size() + b];
        });
    }

    std::vector<std::size_t> active;
    for (std::size_t j = 0; j < k; ++j) {
        if (!members[j].empty()) active.push_back(j);
    }
    std::vector<std::size_t> ties;
    while (chosen.size() < n && !active.empty()) {
        std::size_t lowest = std::numeric_limits<std::size_t>::max();
        ties.clear();
        for (std::size_t j : active) {
            if (rho[j] < lowest) {
                lowest = rho[j];
                ties.clear();
            }
            if (rho[j] == lowest) ties.push_back(j);
        }
        const std::size_t j = ties[ties.size() == 1 ? 0 : r.index(ties.size())];
        auto& mem = members[j];
        const std::size_t pick = rho[j] == 0 ? 0 : (mem.size() == 1 ? 0 : r.index(mem.size()));
        chosen.push_back(lf[mem[pick]]);
        mem.erase(mem.begin() + static_cast<std::ptrdiff_t>(pick));
        ++rho[j];
        if (mem.empty()) active.erase(std::find(active.begin(), active.end(), j));
    }
    return chosen;
}

Nsga3State nsga3_init(Population pop, std::size_t m, const Variation& v) {
    Nsga3State s;
    s.refs = das_dennis_vectors(m, lattice_h_for(m, pop.size()));
    s.pop = std::move(pop);
    s.variation = v;
    return s;
}

std::size_t nsga3_step(Nsga3State& s, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t n = s.pop.size();
    std::vector<std::size_t> mates(n);
    for (auto& m : mates) m = r.index(n);
    const Matrix kids = sbx_pm_offspring(s.pop.x, mates, n, s.variation.sbx, s.variation.pm, p.bounds(), r);
    const Population off = evaluate_offspring(kids, s.pop, p, backend);
    const Population pool = merge(s.pop, off);
    s.pop = take(pool, nsga3_select(pool.f, n, s.refs.v, r));
    return n;
}

} // namespace evobench
