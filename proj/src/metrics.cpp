#include "evobench/metrics.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <map>
#include <numeric>

namespace evobench {

double best_fitness(const Matrix& f) {
    if (f.rows() == 0) throw ContractViolation("best_fitness: empty population");
    return f.col(0).minCoeff();
}

double best_fitness(const Population& pop) { return best_fitness(pop.f); }

double igd(const Matrix& solutions, const Matrix& reference) {
    if (reference.rows() == 0) throw ContractViolation("igd: empty reference set");
    if (solutions.rows() == 0) return kInf;
    if (solutions.cols() != reference.cols()) throw ContractViolation("igd: objective count mismatch");
    double total = 0;
    for (Eigen::Index r = 0; r < reference.rows(); ++r) {
        double best = kInf;
        for (Eigen::Index s = 0; s < solutions.rows(); ++s) {
            best = std::min(best, (solutions.row(s) - reference.row(r)).squaredNorm());
        }
        total += std::sqrt(best);
    }
    return total / static_cast<double>(reference.rows());
}

namespace {

std::vector<Eigen::Index> inside_reference(const Matrix& points, const RowVector& ref) {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        if ((points.row(i).array() < ref.array()).all()) keep.push_back(i);
    }
    return keep;
}

double hv2(std::vector<std::array<double, 2>> pts, double r0, double r1) {
    std::sort(pts.begin(), pts.end());
    double hv = 0;
    double last = r1;
    for (const auto& p : pts) {
        if (p[1] < last) {
            hv += (r0 - p[0]) * (last - p[1]);
            last = p[1];
        }
    }
    return hv;
}

// Sweep along the third objective while maintaining the 2-D staircase of the
// points seen so far and its area.
double hv3(std::vector<std::array<double, 3>> pts, const RowVector& ref) {
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a[2] < b[2]; });
    const double rx = ref[0], ry = ref[1], rz = ref[2];
    std::map<double, double> stair; // x ascending, y strictly descending
    double area = 0;
    double volume = 0;

    auto contribution = [&](std::map<double, double>::iterator it) {
        const double right_x = std::next(it) == stair.end() ? rx : std::next(it)->first;
        const double left_y = it == stair.begin() ? ry : std::prev(it)->second;
        return (right_x - it->first) * (left_y - it->second);
    };

    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double x = pts[i][0], y = pts[i][1];
        auto up = stair.upper_bound(x);
        const bool dominated = up != stair.begin() && std::prev(up)->second <= y;
        if (!dominated) {
            auto it = stair.lower_bound(x);
            while (it != stair.end() && it->second >= y) {
                area -= contribution(it);
                it = stair.erase(it);
            }
            auto ins = stair.emplace(x, y).first;
            area += contribution(ins);
        }
        const double next_z = i + 1 < pts.size() ? pts[i + 1][2] : rz;
        volume += area * (next_z - pts[i][2]);
    }
    return volume;
}

} // namespace

double hypervolume(const Matrix& points, const RowVector& ref) {
    if (points.rows() > 0 && points.cols() != ref.size()) {
        throw ContractViolation("hypervolume: reference point dimension mismatch");
    }
    const auto keep = inside_reference(points, ref);
    if (keep.empty()) return 0.0;
    switch (ref.size()) {
    case 1: {
        double lo = kInf;
        for (auto i : keep) lo = std::min(lo, points(i, 0));
        return ref[0] - lo;
    }
    case 2: {
        std::vector<std::array<double, 2>> pts;
        for (auto i : keep) pts.push_back({points(i, 0), points(i, 1)});
        return hv2(std::move(pts), ref[0], ref[1]);
    }
    case 3: {
        std::vector<std::array<double, 3>> pts;
        for (auto i : keep) pts.push_back({points(i, 0), points(i, 1), points(i, 2)});
        return hv3(std::move(pts), ref);
    }
    default: break;
    }
    throw ContractViolation(fmt::format("hypervolume: exact computation supports M <= 3, got {}", ref.size()));
}

double hypervolume_mc(const Matrix& points, const RowVector& ref, std::size_t samples, Rng& rng) {
    const auto keep = inside_reference(points, ref);
    if (keep.empty() || samples == 0) return 0.0;
    const Eigen::Index m = ref.size();
    RowVector lo = ref;
    for (auto i : keep) lo = lo.cwiseMin(points.row(i));
    const double box = (ref - lo).prod();

    std::vector<double> s(static_cast<std::size_t>(m));
    std::size_t hits = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        for (Eigen::Index j = 0; j < m; ++j) s[j] = rng.uniform(lo[j], ref[j]);
        for (auto i : keep) {
            bool covers = true;
            for (Eigen::Index j = 0; j < m && covers; ++j) covers = points(i, j) <= s[j];
            if (covers) {
                ++hits;
                break;
            }
        }
    }
    return box * static_cast<double>(hits) / static_cast<double>(samples);
}

double diversity(const Matrix& x) {
    const Eigen::Index n = x.rows();
    if (n < 2) return 0.0;
    const Eigen::Index d = x.cols();
    double total = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double* a = x.row(i).data();
        double row_sum = 0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double* b = x.row(j).data();
            double s = 0;
            for (Eigen::Index k = 0; k < d; ++k) {
                const double t = a[k] - b[k];
                s += t * t;
            }
            row_sum += std::sqrt(s);
        }
        total += row_sum;
    }
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return total / pairs;
}

double diversity(const Population& pop) { return diversity(pop.x); }

double speedup(double t_ref, double t_test) {
    if (!(t_test > 0)) throw ContractViolation("speedup: test time must be positive");
    return t_ref / t_test;
}

Throughput throughput(std::uint64_t nfe, double window_s) {
    if (!(window_s > 0)) throw ContractViolation("throughput: window must be positive");
    return {nfe, static_cast<double>(nfe) / window_s};
}

} // namespace evobench
