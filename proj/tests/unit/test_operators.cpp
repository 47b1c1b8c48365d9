#include "evobench/operators.hpp"

#include <doctest.h>

#include <cmath>

using namespace evobench;

namespace {

Matrix pair_of(const RowVector& a, const RowVector& b) {
    Matrix p(2, a.size());
    p.row(0) = a;
    p.row(1) = b;
    return p;
}

bool inside(const RowVector& x, const Bounds& b) {
    for (Eigen::Index j = 0; j < x.size(); ++j)
        if (x[j] < b.lower[j] || x[j] > b.upper[j]) return false;
    return true;
}

double binomial_3sigma(double p, double n) { return 3 * std::sqrt(p * (1 - p) / n); }

} // namespace

TEST_SUITE("operators") {

TEST_CASE("SBX keeps identical parents identical") {
    Rng r({20, 0});
    const Bounds b = Bounds::uniform(6, -1, 1);
    const RowVector a = RowVector::Constant(6, 0.3);
    for (int t = 0; t < 50; ++t) {
        const Matrix c = sbx_crossover(pair_of(a, a), 20.0, b, r);
        CHECK(c.row(0) == a);
        CHECK(c.row(1) == a);
    }
}

TEST_CASE("SBX preserves the parent mean per coordinate") {
    Rng r({20, 1});
    const Bounds b = Bounds::uniform(8, -100, 100);
    for (int t = 0; t < 200; ++t) {
        RowVector a(8), c(8);
        for (Eigen::Index j = 0; j < 8; ++j) {
            a[j] = r.uniform(-1, 1);
            c[j] = r.uniform(-1, 1);
        }
        const Matrix kids = sbx_crossover(pair_of(a, c), 2.0, b, r);
        for (Eigen::Index j = 0; j < 8; ++j)
            CHECK(kids(0, j) + kids(1, j) == doctest::Approx(a[j] + c[j]).epsilon(1e-12));
    }
}

TEST_CASE("SBX spread shrinks as eta_c grows") {
    const Bounds b = Bounds::uniform(1, -100, 100);
    RowVector a(1), c(1);
    a << -1;
    c << 1;
    double var[2] = {0, 0};
    const double etas[2] = {2.0, 20.0};
    for (int e = 0; e < 2; ++e) {
        Rng r({20, 2});
        double s = 0, s2 = 0;
        const int n = 10000;
        for (int t = 0; t < n; ++t) {
            const double v = sbx_crossover(pair_of(a, c), etas[e], b, r)(0, 0);
            s += v;
            s2 += v * v;
        }
        var[e] = s2 / n - (s / n) * (s / n);
    }
    CHECK(var[1] < var[0]);
}

TEST_CASE("SBX output is clamped and pc gates recombination") {
    Rng r({20, 3});
    const Bounds b = Bounds::uniform(4, 0, 1);
    RowVector a(4), c(4);
    a << 0, 0.01, 0.99, 1;
    c << 1, 0.99, 0.01, 0;
    for (int t = 0; t < 500; ++t) {
        const Matrix k = sbx_crossover(pair_of(a, c), 1.0, b, r);
        CHECK(inside(k.row(0), b));
        CHECK(inside(k.row(1), b));
    }
    const Matrix untouched = sbx_crossover(pair_of(a, c), SbxParams{20.0, 0.0}, b, r);
    CHECK(untouched.row(0) == a);
    CHECK(untouched.row(1) == c);
}

TEST_CASE("mutation with pm = 0 is the identity") {
    Rng r({20, 4});
    const Bounds b = Bounds::uniform(5, -2, 2);
    RowVector x(5);
    x << -2, -1, 0, 1, 2;
    Vector sigma = Vector::Constant(5, 0.4);
    for (int t = 0; t < 20; ++t) {
        CHECK(polynomial_mutation(x, 20, 0.0, b, r) == x);
        CHECK(gaussian_mutation(x, sigma, 0.0, b, r) == x);
    }
    CHECK(uniform_crossover(pair_of(x, -x), 0.0, r).row(0) == x);
}

TEST_CASE("mutation outputs stay in bounds") {
    Rng r({20, 5});
    const Bounds b = Bounds::uniform(10, -1, 1);
    Vector sigma = Vector::Constant(10, 5.0);
    for (int t = 0; t < 300; ++t) {
        RowVector x(10);
        for (Eigen::Index j = 0; j < 10; ++j) x[j] = r.uniform(-1, 1);
        CHECK(inside(polynomial_mutation(x, 1.0, 1.0, b, r), b));
        CHECK(inside(gaussian_mutation(x, sigma, 1.0, b, r), b));
    }
}

TEST_CASE("per-gene mutation rates match pm") {
    Rng r({20, 6});
    const std::size_t d = 100;
    const Bounds b = Bounds::uniform(d, -1, 1);
    const RowVector x = RowVector::Zero(static_cast<Eigen::Index>(d));
    const Vector sigma = Vector::Constant(static_cast<Eigen::Index>(d), 0.1);
    const double pm = 0.2;
    const int rounds = 1000; // 1e5 genes
    std::size_t poly = 0, gauss = 0;
    for (int t = 0; t < rounds; ++t) {
        poly += (polynomial_mutation(x, 20, pm, b, r).array() != 0.0).count();
        gauss += (gaussian_mutation(x, sigma, pm, b, r).array() != 0.0).count();
    }
    const double n = static_cast<double>(rounds * d);
    CHECK(std::abs(static_cast<double>(poly) / n - pm) <= binomial_3sigma(pm, n));
    CHECK(std::abs(static_cast<double>(gauss) / n - pm) <= binomial_3sigma(pm, n));
}

TEST_CASE("uniform crossover takes each gene from either parent at rate one half") {
    Rng r({20, 7});
    const Eigen::Index d = 100;
    const RowVector a = RowVector::Zero(d), c = RowVector::Ones(d);
    std::size_t swapped = 0;
    const int rounds = 1000;
    for (int t = 0; t < rounds; ++t) {
        const Matrix k = uniform_crossover(pair_of(a, c), 1.0, r);
        CHECK((k.row(0) + k.row(1)).isApprox(RowVector::Ones(d)));
        swapped += (k.row(0).array() == 1.0).count();
    }
    const double n = static_cast<double>(rounds * d);
    CHECK(std::abs(static_cast<double>(swapped) / n - 0.5) <= binomial_3sigma(0.5, n));
}

TEST_CASE("tournaments prefer the better key") {
    Rng r({20, 8});
    const std::vector<double> key{5, 1, 3, 4};
    std::vector<std::size_t> count(4, 0);
    for (auto i : binary_tournament(key, 40000, r)) ++count[i];
    // Winning probabilities with replacement: (2(n - rank) - 1) / n^2.
    CHECK(count[1] > count[2]);
    CHECK(count[2] > count[3]);
    CHECK(count[3] > count[0]);
    CHECK(static_cast<double>(count[1]) / 40000 == doctest::Approx(7.0 / 16).epsilon(0.05));
    const std::vector<std::size_t> rank{1, 0, 0, 1};
    const std::vector<double> crowd{9, 1, 2, 9};
    std::fill(count.begin(), count.end(), 0);
    for (auto i : crowded_tournament(rank, crowd, 40000, r)) ++count[i];
    CHECK(count[2] > count[1]);
    CHECK(count[1] > count[0]);
    CHECK(resolve_pm(-1, 50) == doctest::Approx(0.02));
    CHECK(resolve_pm(0.3, 50) == 0.3);
}

} // TEST_SUITE
