#include "evobench/dominance.hpp"

#include <algorithm>
#include <numeric>

namespace evobench {

bool dominates(std::span<const double> a, std::span<const double> b) noexcept {
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strict = true;
    }
    return strict;
}

bool dominates(const Matrix& f, Eigen::Index a, Eigen::Index b) noexcept {
    bool strict = false;
    const double* pa = f.row(a).data();
    const double* pb = f.row(b).data();
    for (Eigen::Index k = 0; k < f.cols(); ++k) {
        if (pa[k] > pb[k]) return false;
        if (pa[k] < pb[k]) strict = true;
    }
    return strict;
}

namespace {

std::vector<std::size_t> lexicographic_order(const Matrix& f) {
    std::vector<std::size_t> order(static_cast<std::size_t>(f.rows()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    const Eigen::Index m = f.cols();
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double* pa = f.row(static_cast<Eigen::Index>(a)).data();
        const double* pb = f.row(static_cast<Eigen::Index>(b)).data();
        for (Eigen::Index k = 0; k < m; ++k) {
            if (pa[k] != pb[k]) return pa[k] < pb[k];
        }
        return false;
    });
    return order;
}

// Two objectives: in lexicographic order a front is dominated-checked by its
// most recently added member alone, and that check is monotone over fronts.
std::vector<Front> sort_two_objectives(const Matrix& f, const std::vector<std::size_t>& order) {
    std::vector<Front> fronts;
    for (std::size_t idx : order) {
        const auto p = static_cast<Eigen::Index>(idx);
        std::size_t lo = 0, hi = fronts.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (dominates(f, static_cast<Eigen::Index>(fronts[mid].back()), p)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if (lo == fronts.size()) fronts.emplace_back();
        fronts[lo].push_back(idx);
    }
    return fronts;
}

// Efficient non-dominated sort, sequential search over fronts.
std::vector<Front> sort_general(const Matrix& f, const std::vector<std::size_t>& order) {
    std::vector<Front> fronts;
    for (std::size_t idx : order) {
        const auto p = static_cast<Eigen::Index>(idx);
        std::size_t k = 0;
        for (; k < fronts.size(); ++k) {
            const Front& front = fronts[k];
            bool dominated = false;
            for (auto it = front.rbegin(); it != front.rend(); ++it) {
                if (dominates(f, static_cast<Eigen::Index>(*it), p)) {
                    dominated = true;
                    break;
                }
            }
            if (!dominated) break;
        }
        if (k == fronts.size()) fronts.emplace_back();
        fronts[k].push_back(idx);
    }
    return fronts;
}

} // namespace

std::vector<Front> non_dominated_sort(const Matrix& f) {
    if (f.rows() == 0) return {};
    const auto order = lexicographic_order(f);
    auto fronts = f.cols() == 2 ? sort_two_objectives(f, order) : sort_general(f, order);
    for (auto& front : fronts) std::sort(front.begin(), front.end());
    return fronts;
}

std::vector<std::size_t> front_ranks(const std::vector<Front>& fronts, std::size_t n) {
    std::vector<std::size_t> rank(n, 0);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        for (std::size_t i : fronts[k]) rank[i] = k;
    }
    return rank;
}

Front first_front(const Matrix& f) {
    auto fronts = non_dominated_sort(f);
    return fronts.empty() ? Front{} : std::move(fronts.front());
}

std::vector<double> crowding_distance(const Matrix& f) {
    const auto n = static_cast<std::size_t>(f.rows());
    std::vector<double> d(n, 0.0);
    if (n <= 2) {
        std::fill(d.begin(), d.end(), kInf);
        return d;
    }
    std::vector<std::size_t> order(n);
    for (Eigen::Index k = 0; k < f.cols(); ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return f(static_cast<Eigen::Index>(a), k) < f(static_cast<Eigen::Index>(b), k);
        });
        const double lo = f(static_cast<Eigen::Index>(order.front()), k);
        const double hi = f(static_cast<Eigen::Index>(order.back()), k);
        if (!(hi > lo)) continue;
        d[order.front()] = kInf;
        d[order.back()] = kInf;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double gap = f(static_cast<Eigen::Index>(order[i + 1]), k) - f(static_cast<Eigen::Index>(order[i - 1]), k);
            d[order[i]] += gap / (hi - lo);
        }
    }
    return d;
}

} // namespace evobench
