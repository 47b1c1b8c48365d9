#include "evobench/moea.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace evobench {

Spea2Fitness spea2_fitness(const Matrix& f) {
    const auto n = static_cast<std::size_t>(f.rows());
    Spea2Fitness out;
    out.strength.assign(n, 0.0);
    out.raw.assign(n, 0.0);
    out.density.assign(n, 0.0);
    out.fitness.assign(n, 0.0);
    if (n == 0) return out;

    std::vector<std::vector<std::uint32_t>> dominators(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto a = static_cast<Eigen::Index>(i);
            const auto b = static_cast<Eigen::Index>(j);
            if (dominates(f, a, b)) {
                out.strength[i] += 1;
                dominators[j].push_back(static_cast<std::uint32_t>(i));
            } else if (dominates(f, b, a)) {
                out.strength[j] += 1;
                dominators[i].push_back(static_cast<std::uint32_t>(j));
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (auto j : dominators[i]) out.raw[i] += out.strength[j];
    }

    const std::size_t k = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))));
    std::vector<double> d;
    d.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.clear();
        for (std::size_t j = 0; j < n; ++j) {
            if (j != i) d.push_back((f.row(static_cast<Eigen::Index>(i)) - f.row(static_cast<Eigen::Index>(j))).norm());
        }
        double sigma = 0;
        if (!d.empty()) {
            const std::size_t pos = std::min(k, d.size()) - 1;
            std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(pos), d.end());
            sigma = d[pos];
        }
        out.density[i] = 1.0 / (sigma + 2.0);
        out.fitness[i] = out.raw[i] + out.density[i];
    }
    return out;
}

std::vector<std::size_t> spea2_truncate(const Matrix& f, std::vector<std::size_t> candidates, std::size_t n) {
    const std::size_t len = candidates.size();
    if (len <= n) return candidates;

    std::vector<double> dist(len * len);
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t j = 0; j < len; ++j) {
            dist[i * len + j] = i == j ? kInf
                                       : (f.row(static_cast<Eigen::Index>(candidates[i])) -
                                          f.row(static_cast<Eigen::Index>(candidates[j])))
                                             .norm();
        }
    }
    // Per row, neighbours in ascending distance (self last, at +inf).
    std::vector<std::uint32_t> nb(len * len);
    for (std::size_t i = 0; i < len; ++i) {
        auto* row = nb.data() + i * len;
        std::iota(row, row + len, 0u);
        const double* di = dist.data() + i * len;
        std::stable_sort(row, row + len, [di](std::uint32_t a, std::uint32_t b) { return di[a] < di[b]; });
    }

    std::vector<char> removed(len, 0);
    std::vector<std::size_t> head(len, 0);
    auto advance = [&](std::size_t i, std::size_t pos) {
        const auto* row = nb.data() + i * len;
        while (pos < len && removed[row[pos]]) ++pos;
        return pos;
    };
    // a sorts before b when its alive-neighbour distance list is lexicographically smaller.
    auto smaller = [&](std::size_t a, std::size_t b) {
        std::size_t pa = head[a], pb = head[b];
        const auto* ra = nb.data() + a * len;
        const auto* rb = nb.data() + b * len;
        while (true) {
            pa = advance(a, pa);
            pb = advance(b, pb);
            if (pa >= len || pb >= len) return false;
            const double da = dist[a * len + ra[pa]];
            const double db = dist[b * len + rb[pb]];
            if (da != db) return da < db;
            if (!std::isfinite(da)) return false;
            ++pa;
            ++pb;
        }
    };

    for (std::size_t left = len; left > n; --left) {
        for (std::size_t i = 0; i < len; ++i) {
            if (!removed[i]) head[i] = advance(i, head[i]);
        }
        std::size_t worst = len;
        for (std::size_t i = 0; i < len; ++i) {
            if (removed[i]) continue;
            if (worst == len || smaller(i, worst)) worst = i;
        }
        removed[worst] = 1;
    }

    std::vector<std::size_t> out;
    out.reserve(n);
    for (std::size_t i = 0; i < len; ++i) {
        if (!removed[i]) out.push_back(candidates[i]);
    }
    return out;
}

namespace {

std::vector<std::size_t> spea2_select_with(const Matrix& f, std::size_t n, const Spea2Fitness& fit) {
    const auto total = static_cast<std::size_t>(f.rows());
    std::vector<std::size_t> nd;
    for (std::size_t i = 0; i < total; ++i) {
        if (fit.fitness[i] < 1.0) nd.push_back(i);
    }
    if (nd.size() > n) return spea2_truncate(f, std::move(nd), n);
    if (nd.size() == n) return nd;
    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fit.fitness[a] < fit.fitness[b]; });
    order.resize(std::min(n, total));
    return order;
}

} // namespace

std::vector<std::size_t> spea2_select(const Matrix& f, std::size_t n) {
    return spea2_select_with(f, n, spea2_fitness(f));
}

Spea2State spea2_init(Population pop, const Variation& v) {
    Spea2State s;
    s.fitness = spea2_fitness(pop.f).fitness;
    s.pop = std::move(pop);
    s.variation = v;
    return s;
}

std::size_t spea2_step(Spea2State& s, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t n = s.pop.size();
    const auto mates = binary_tournament(s.fitness, n, r);
    const Matrix kids = sbx_pm_offspring(s.pop.x, mates, n, s.variation.sbx, s.variation.pm, p.bounds(), r);
    const Population off = evaluate_offspring(kids, s.pop, p, backend);
    const Population pool = merge(s.pop, off);
    const Spea2Fitness fit = spea2_fitness(pool.f);
    const auto keep = spea2_select_with(pool.f, n, fit);
    s.pop = take(pool, keep);
    s.fitness.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) s.fitness[i] = fit.fitness[keep[i]];
    return n;
}

} // namespace evobench
