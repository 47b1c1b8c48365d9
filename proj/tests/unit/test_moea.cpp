#include "evobench/dominance.hpp"
#include "evobench/metrics.hpp"
#include "evobench/moea.hpp"
#include "evobench/soea.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace evobench;

namespace {

Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
    Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : r) {
        Eigen::Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

bool dom_ref(const RowVector& a, const RowVector& b) {
    return (a.array() <= b.array()).all() && (a.array() < b.array()).any();
}

Matrix random_matrix(Rng& r, Eigen::Index n, Eigen::Index m) {
    Matrix f(n, m);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < m; ++j) f(i, j) = r.uniform();
    return f;
}

// Random pool plus one row strictly better than every other in every objective.
Matrix pool_with_champion(Rng& r, Eigen::Index n, Eigen::Index m, Eigen::Index at) {
    Matrix f = random_matrix(r, n, m);
    f.array() += 0.1;
    f.row(at).setZero();
    return f;
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

std::vector<double> ibea_fitness_ref(const Matrix& f, double kappa) {
    const Eigen::Index n = f.rows();
    Matrix fn = f;
    for (Eigen::Index j = 0; j < f.cols(); ++j) {
        const double lo = f.col(j).minCoeff(), hi = f.col(j).maxCoeff();
        for (Eigen::Index i = 0; i < n; ++i) fn(i, j) = hi > lo ? (f(i, j) - lo) / (hi - lo) : 0.0;
    }
    const auto ind = [&](Eigen::Index a, Eigen::Index b) { return (fn.row(a) - fn.row(b)).maxCoeff(); };
    double c = 0;
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) c = std::max(c, std::abs(ind(a, b)));
    if (c == 0) c = 1;
    std::vector<double> fit(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) fit[static_cast<std::size_t>(i)] -= std::exp(-ind(j, i) / (c * kappa));
    return fit;
}

double pbi_ref(const RowVector& f, const RowVector& w, const RowVector& z, double theta) {
    // Project onto the line through z with direction w.
    const RowVector d = f - z;
    const RowVector unit = w / w.norm();
    const double along = d.dot(unit);
    const RowVector foot = along * unit;
    return std::abs(along) + theta * (d - foot).norm();
}

Population initial(const Problem& p, std::size_t n, Backend& be, Rng& r) { return initial_population(p, n, be, r); }

double front_igd(const Population& pop, const Problem& p) {
    const Front nd = first_front(pop.f);
    return igd(take_rows(pop.f, nd), pareto_front_reference(p, 200));
}

} // namespace

TEST_SUITE("moea") {

TEST_CASE("Das-Dennis lattices") {
    const auto two = das_dennis_vectors(2, 4);
    CHECK(two.size() == 5);
    std::set<std::pair<double, double>> pts;
    for (Eigen::Index i = 0; i < two.v.rows(); ++i) pts.insert({two.v(i, 0), two.v(i, 1)});
    CHECK(pts.count({0.0, 1.0}) == 1);
    CHECK(pts.count({0.25, 0.75}) == 1);
    const auto three = das_dennis_vectors(3, 12);
    CHECK(three.size() == 91);
    for (Eigen::Index i = 0; i < three.v.rows(); ++i) {
        CHECK(std::abs(three.v.row(i).sum() - 1) <= 1e-12);
        CHECK(three.v.row(i).minCoeff() >= 0);
    }
    CHECK(lattice_h_for(3, 91) == 12);
    CHECK(lattice_h_for(3, 90) == 11);
    CHECK(moead_lattice_size(2, 100) == 100);
    CHECK(moead_lattice_size(3, 100) == 91);
    const Matrix u = unit_rows(three.v);
    for (Eigen::Index i = 0; i < u.rows(); ++i) CHECK(std::abs(u.row(i).norm() - 1) <= 1e-12);
}

TEST_CASE("neighbour table holds the T nearest vectors") {
    const auto dd = das_dennis_vectors(3, 6);
    const auto nb = neighbor_table(dd.v, 5);
    for (std::size_t i = 0; i < dd.size(); ++i) {
        REQUIRE(nb[i].size() == 5);
        CHECK(contains(nb[i], i));
        double worst_in = 0;
        for (auto j : nb[i]) worst_in = std::max(worst_in, (dd.v.row(static_cast<Eigen::Index>(i)) - dd.v.row(static_cast<Eigen::Index>(j))).norm());
        for (std::size_t j = 0; j < dd.size(); ++j) {
            if (contains(nb[i], j)) continue;
            CHECK((dd.v.row(static_cast<Eigen::Index>(i)) - dd.v.row(static_cast<Eigen::Index>(j))).norm() >= worst_in - 1e-12);
        }
    }
}

TEST_CASE("selections keep a globally dominating individual") {
    Rng r({40, 0});
    for (int t = 0; t < 20; ++t) {
        const Eigen::Index m = 2 + t % 2;
        const Eigen::Index champ = static_cast<Eigen::Index>(r.index(40));
        const Matrix f = pool_with_champion(r, 40, m, champ);
        const auto c = static_cast<std::size_t>(champ);
        CHECK(contains(nsga2_select(f, 20).survivors, c));
        CHECK(contains(nsga3_select(f, 20, das_dennis_vectors(static_cast<std::size_t>(m), 4).v, r), c));
        CHECK(contains(spea2_select(f, 20), c));
        CHECK(contains(ibea_select(f, 20, 0.05), c));
        CHECK(contains(hype_select(f, 20, 2000, r), c));
    }
}

TEST_CASE("selections return exactly n distinct survivors") {
    Rng r({40, 1});
    for (int t = 0; t < 10; ++t) {
        const Matrix f = random_matrix(r, 30, 3);
        const auto check = [](std::vector<std::size_t> v, std::size_t n) {
            CHECK(v.size() == n);
            std::sort(v.begin(), v.end());
            CHECK(std::unique(v.begin(), v.end()) == v.end());
        };
        check(nsga2_select(f, 13).survivors, 13);
        check(nsga3_select(f, 13, das_dennis_vectors(3, 3).v, r), 13);
        check(spea2_select(f, 13), 13);
        check(ibea_select(f, 13, 0.05), 13);
        check(ibea_select(f, 13, 0.05, IbeaIndicator::Hypervolume), 13);
        check(hype_select(f, 13, 1000, r), 13);
        check(apd_select(f, unit_rows(das_dennis_vectors(3, 3).v), 0.5, 2.0, 13), 13);
    }
}

TEST_CASE("NSGA-II selection fills by fronts and cuts by crowding") {
    const Matrix f = rows({{0, 4}, {1, 3}, {2.5, 1.5}, {3, 1}, {4, 0}, {5, 5}});
    const auto sel = nsga2_select(f, 3);
    std::vector<std::size_t> s = sel.survivors;
    std::sort(s.begin(), s.end());
    // Boundary points have infinite crowding; interior crowding is 1.25, 1.0, 0.75.
    CHECK(s == std::vector<std::size_t>{0, 1, 4});
}

TEST_CASE("NSGA-II improves IGD on ZDT1") {
    const Problem p(ProblemId::Zdt1, 10);
    Backend be;
    Rng r({40, 2});
    Nsga2State s = nsga2_init(initial(p, 50, be, r));
    const double start = front_igd(s.pop, p);
    for (int g = 0; g < 100; ++g) {
        CHECK(nsga2_step(s, p, be, r) == 50);
        CHECK(s.pop.size() == 50);
    }
    CHECK(front_igd(s.pop, p) < 0.25 * start);
}

TEST_CASE("perpendicular association matches brute force") {
    Rng r({40, 3});
    const Matrix refs = das_dennis_vectors(3, 5).v;
    const Matrix fn = random_matrix(r, 60, 3);
    const Association a = associate_perpendicular(fn, refs);
    for (Eigen::Index i = 0; i < fn.rows(); ++i) {
        double best = kInf;
        for (Eigen::Index k = 0; k < refs.rows(); ++k) {
            const RowVector w = refs.row(k) / refs.row(k).norm();
            best = std::min(best, (fn.row(i) - fn.row(i).dot(w) * w).norm());
        }
        const auto k = static_cast<Eigen::Index>(a.vector[static_cast<std::size_t>(i)]);
        const RowVector w = refs.row(k) / refs.row(k).norm();
        CHECK((fn.row(i) - fn.row(i).dot(w) * w).norm() == doctest::Approx(best).epsilon(1e-12));
        CHECK(a.distance[static_cast<std::size_t>(i)] == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("NSGA-III niching spreads over reference lines first") {
    // Nine mutually non-dominated points on the unit simplex, three per line,
    // for three lines; picking three must take one per line.
    const Matrix refs = rows({{1, 0}, {0.5, 0.5}, {0, 1}});
    Matrix f(9, 2);
    const double shares[3] = {0.0, 0.5, 1.0};
    Eigen::Index i = 0;
    for (double s : shares)
        for (double eps : {0.0, 0.01, 0.02}) {
            const double a = std::clamp(s + (s < 0.5 ? eps : -eps), 0.0, 1.0);
            f(i, 0) = a;
            f(i, 1) = 1 - a;
            ++i;
        }
    Rng r({40, 4});
    for (int t = 0; t < 10; ++t) {
        const auto keep = nsga3_select(f, 3, refs, r);
        REQUIRE(keep.size() == 3);
        const Matrix fn = nsga3_normalize(f);
        const auto assoc = associate_perpendicular(fn, refs);
        std::set<std::size_t> lines;
        for (auto k : keep) lines.insert(assoc.vector[k]);
        CHECK(lines.size() == 3);
    }
}

TEST_CASE("NSGA-III runs with exact population size") {
    const Problem p(ProblemId::Dtlz2, 12, 3);
    Backend be;
    Rng r({40, 5});
    Nsga3State s = nsga3_init(initial(p, 40, be, r), 3);
    for (int g = 0; g < 20; ++g) {
        CHECK(nsga3_step(s, p, be, r) == 40);
        CHECK(s.pop.size() == 40);
    }
}

TEST_CASE("SPEA2 fitness on a chain and on a non-dominated set") {
    const Matrix chain = rows({{1, 1}, {2, 2}, {3, 3}});
    const auto sf = spea2_fitness(chain);
    CHECK(sf.strength == std::vector<double>{2, 1, 0});
    CHECK(sf.raw == std::vector<double>{0, 2, 3});
    Rng r({40, 6});
    Matrix f = random_matrix(r, 30, 3);
    const auto fit = spea2_fitness(f);
    const Front nd = first_front(f);
    for (std::size_t i = 0; i < 30; ++i) {
        const bool is_nd = contains(nd, i);
        CHECK((fit.fitness[i] < 1.0) == is_nd);
        CHECK(fit.fitness[i] == doctest::Approx(fit.raw[i] + fit.density[i]));
        CHECK(fit.density[i] > 0);
        CHECK(fit.density[i] <= 0.5);
    }
}

TEST_CASE("SPEA2 density uses the k-th nearest neighbour") {
    Rng r({40, 7});
    const Matrix f = random_matrix(r, 16, 2);
    const auto fit = spea2_fitness(f);
    const std::size_t k = 4; // floor(sqrt(16))
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        std::vector<double> d;
        for (Eigen::Index j = 0; j < f.rows(); ++j)
            if (j != i) d.push_back((f.row(i) - f.row(j)).norm());
        std::sort(d.begin(), d.end());
        CHECK(fit.density[static_cast<std::size_t>(i)] == doctest::Approx(1.0 / (d[k - 1] + 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("SPEA2 truncation removes duplicates first") {
    const Matrix f = rows({{0, 1}, {0.5, 0.5}, {0.5, 0.5}, {1, 0}, {0.2, 0.8}, {0.2, 0.8}});
    const auto keep = spea2_truncate(f, {0, 1, 2, 3, 4, 5}, 4);
    REQUIRE(keep.size() == 4);
    std::set<std::pair<double, double>> seen;
    for (auto i : keep) seen.insert({f(static_cast<Eigen::Index>(i), 0), f(static_cast<Eigen::Index>(i), 1)});
    CHECK(seen.size() == 4);
}

TEST_CASE("IBEA fitness matches the direct formula") {
    Rng r({40, 8});
    for (int t = 0; t < 20; ++t) {
        const Matrix f = random_matrix(r, 5 + static_cast<Eigen::Index>(t % 7), 2 + t % 2);
        const auto got = ibea_fitness(f, 0.05);
        const auto want = ibea_fitness_ref(f, 0.05);
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-9));
    }
}

TEST_CASE("IBEA symmetry and removal order") {
    const Matrix twins = rows({{0.2, 0.7}, {0.6, 0.1}, {0.2, 0.7}, {0.9, 0.9}});
    const auto fit = ibea_fitness(twins, 0.05);
    CHECK(fit[0] == fit[2]);
    Rng r({40, 9});
    for (int t = 0; t < 50; ++t) {
        const Eigen::Index champ = static_cast<Eigen::Index>(r.index(5));
        const Matrix f = pool_with_champion(r, 5, 2, champ);
        const auto ref = ibea_fitness_ref(f, 0.05);
        const auto first_removed = static_cast<Eigen::Index>(std::min_element(ref.begin(), ref.end()) - ref.begin());
        CHECK(first_removed != champ);
        const auto keep = ibea_select(f, 4, 0.05);
        CHECK(keep.size() == 4);
        CHECK_FALSE(contains(keep, static_cast<std::size_t>(first_removed)));
    }
}

TEST_CASE("IBEA selection returns the survivors' fitness") {
    Rng r({40, 10});
    const Matrix f = random_matrix(r, 20, 2);
    std::vector<double> fit;
    const auto keep = ibea_select(f, 8, 0.05, IbeaIndicator::AdditiveEpsilon, &fit);
    REQUIRE(fit.size() == 8);
    // Survivor fitness is over survivors only, with scaling fixed on the full pool (c = 1).
    const Matrix sub = take_rows(f, keep);
    const RowVector lo = f.colwise().minCoeff(), span = f.colwise().maxCoeff() - lo;
    Matrix fn = sub;
    for (Eigen::Index i = 0; i < fn.rows(); ++i) fn.row(i) = (sub.row(i) - lo).cwiseQuotient(span);
    for (Eigen::Index i = 0; i < fn.rows(); ++i) {
        double want = 0;
        for (Eigen::Index j = 0; j < fn.rows(); ++j)
            if (i != j) want -= std::exp(-(fn.row(j) - fn.row(i)).maxCoeff() / 0.05);
        CHECK(fit[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("HypE fitness") {
    Rng r({40, 11});
    RowVector ref(2);
    ref << 1, 1;
    const Matrix one = rows({{0.2, 0.5}});
    const double exact = 0.8 * 0.5;
    // The sampling box is the dominated box itself, so every sample counts.
    CHECK(hype_fitness(one, ref, 1, 10000, r)[0] == doctest::Approx(exact).epsilon(1e-12));

    const Matrix outside = rows({{0.2, 0.5}, {1.5, 0.1}});
    CHECK(hype_fitness(outside, ref, 2, 10000, r)[1] == 0.0);

    // Duplicates share their region: each copy gets half the singleton's value.
    const Matrix dup = rows({{0.2, 0.5}, {0.2, 0.5}});
    const auto fd = hype_fitness(dup, ref, 2, 10000, r);
    CHECK(fd[0] == doctest::Approx(exact / 2).epsilon(1e-12));
    CHECK(fd[1] == doctest::Approx(exact / 2).epsilon(1e-12));

    // Two overlapping boxes with k = 2: exclusive parts count fully, the shared part half each.
    const Matrix pair = rows({{0.2, 0.6}, {0.6, 0.2}});
    const auto fp = hype_fitness(pair, ref, 2, 200000, r);
    // Box [0.2, 1] x [0.2, 1] has volume 0.64; exclusive 0.4 * 0.4 = 0.16 each, shared 0.16.
    const double want = 0.16 + 0.08;
    const double se = 0.64 * std::sqrt(0.5 * 0.5 / 200000.0);
    CHECK(std::abs(fp[0] - want) <= 3 * se + 1e-3);
    Rng a({1, 1}), b({1, 1});
    CHECK(hype_fitness(pair, ref, 1, 500, a) == hype_fitness(pair, ref, 1, 500, b));
}

TEST_CASE("HypE reference point") {
    const RowVector pos = hype_reference(rows({{1, 2}, {3, 0.5}}));
    CHECK(pos[0] == doctest::Approx(3.3));
    CHECK(pos[1] == doctest::Approx(2.2));
    const RowVector neg = hype_reference(rows({{-1, 0}, {-3, -0.5}}));
    CHECK(neg[0] == doctest::Approx(-0.9));
    CHECK(neg[1] == doctest::Approx(0.1));
}

TEST_CASE("PBI") {
    const std::vector<double> fv{1, 1}, lam{1, 0}, z{0, 0};
    CHECK(pbi_scalarize(fv, lam, z, 5.0) == doctest::Approx(6.0));
    const std::vector<double> on{2, 2}, diag{1, 1};
    CHECK(pbi_scalarize(on, diag, z, 5.0) == doctest::Approx(std::sqrt(8.0)));
    Rng r({40, 12});
    for (int t = 0; t < 100; ++t) {
        RowVector f(3), w(3), zz(3);
        for (int j = 0; j < 3; ++j) {
            f[j] = r.uniform(0, 2); // z* is an ideal point, so f >= z*
            w[j] = r.uniform(0.01, 1);
            zz[j] = r.uniform(-1, 0);
        }
        const double got = pbi_scalarize({f.data(), 3}, {w.data(), 3}, {zz.data(), 3}, 5.0);
        CHECK(got == doctest::Approx(pbi_ref(f, w, zz, 5.0)).epsilon(1e-12));
    }
}

TEST_CASE("MOEA/D keeps K subproblems and a running ideal point") {
    const Problem p(ProblemId::Zdt1, 10);
    Backend be;
    Rng r({40, 13});
    CHECK_THROWS_AS(moead_init(Population{Matrix::Zero(1, 10), Matrix::Zero(1, 2), 1}, 2), InsufficientPopulation);
    MoeadState s = moead_init(initial(p, 30, be, r), 2);
    CHECK(s.pop.size() == 30);
    CHECK(s.T == 20);
    const Problem p3(ProblemId::Dtlz2, 12, 3);
    MoeadState s3 = moead_init(initial(p3, 50, be, r), 3);
    CHECK(s3.pop.size() == 45); // h = 8
    for (int g = 0; g < 30; ++g) {
        const RowVector z = s.z_star;
        CHECK(moead_step(s, p, be, r) == 30);
        CHECK((s.z_star.array() <= z.array()).all());
        CHECK(s.z_star == s.z_star.cwiseMin(s.pop.f.colwise().minCoeff()));
    }
}

TEST_CASE("MOEA/D replaces only on strict PBI improvement") {
    const Problem p(ProblemId::Zdt1, 10);
    Backend be;
    Rng r({40, 14});
    MoeadState s = moead_init(initial(p, 21, be, r), 2);
    s.z_star.setZero(); // below every ZDT objective, so it stays fixed
    s.n_r = 21;

    // Identical children of identical incumbents never replace.
    MoeadState same = s;
    for (Eigen::Index i = 1; i < same.pop.x.rows(); ++i) {
        same.pop.x.row(i) = same.pop.x.row(0);
        same.pop.f.row(i) = same.pop.f.row(0);
    }
    CHECK(moead_update(same, same.pop.x, same.pop.f, r) == 0);

    for (int t = 0; t < 10; ++t) {
        const Matrix kids = r.uniform_matrix(21, p.bounds());
        const Matrix fk = evaluate_batch(p, kids);
        const Population before = s.pop;
        moead_update(s, kids, fk, r);
        CHECK(s.z_star.isZero());
        for (Eigen::Index j = 0; j < before.f.rows(); ++j) {
            if (s.pop.f.row(j) == before.f.row(j)) continue;
            const RowVector w = s.weights.v.row(j);
            CHECK(pbi_ref(s.pop.f.row(j), w, s.z_star, 5.0) < pbi_ref(before.f.row(j), w, s.z_star, 5.0));
        }
    }
}

TEST_CASE("angle association matches brute force") {
    Rng r({40, 15});
    const Matrix v = unit_rows(das_dennis_vectors(3, 4).v);
    const Matrix f = random_matrix(r, 40, 3);
    const auto a = associate_angle(f, v);
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        double best = kInf;
        for (Eigen::Index k = 0; k < v.rows(); ++k) {
            const double c = std::clamp(f.row(i).dot(v.row(k)) / f.row(i).norm(), -1.0, 1.0);
            best = std::min(best, std::acos(c));
        }
        CHECK(a.angle[static_cast<std::size_t>(i)] == doctest::Approx(best).epsilon(1e-9));
    }
    const auto g = vector_gammas(v);
    for (Eigen::Index k = 0; k < v.rows(); ++k) {
        double best = kInf;
        for (Eigen::Index q = 0; q < v.rows(); ++q)
            if (q != k) best = std::min(best, std::acos(std::clamp(v.row(k).dot(v.row(q)), -1.0, 1.0)));
        CHECK(g[static_cast<std::size_t>(k)] == doctest::Approx(best).epsilon(1e-9));
    }
}

TEST_CASE("APD at t = 0 picks the closest point of each niche") {
    Rng r({40, 16});
    const Matrix v = unit_rows(das_dennis_vectors(2, 5).v);
    const Matrix f = random_matrix(r, 30, 2);
    const auto keep = apd_select(f, v, 0.0, 2.0, 1000);
    const Matrix ft = f.rowwise() - f.colwise().minCoeff();
    const auto assoc = associate_angle(ft, v);
    // The first entries are one winner per non-empty niche.
    std::set<std::size_t> niches;
    for (std::size_t i = 0; i < 30; ++i) niches.insert(assoc.vector[i]);
    for (std::size_t q = 0; q < niches.size(); ++q) {
        const std::size_t w = keep[q];
        for (std::size_t i = 0; i < 30; ++i) {
            if (assoc.vector[i] != assoc.vector[w]) continue;
            CHECK(ft.row(static_cast<Eigen::Index>(w)).norm() <= ft.row(static_cast<Eigen::Index>(i)).norm());
        }
    }
    CHECK(keep.size() == 30);
}

TEST_CASE("RVEA keeps N and adapts vectors on schedule") {
    const Problem p(ProblemId::Dtlz2, 12, 3);
    Backend be;
    Rng r({40, 17});
    RveaState s = rvea_init(initial(p, 28, be, r), 3);
    CHECK(s.v0.rows() == 28);
    for (int g = 0; g < 20; ++g) {
        CHECK(rvea_step(s, (g + 1) / 20.0, p, be, r) == 28);
        CHECK(s.pop.size() == 28);
    }
    CHECK(s.last_adapt_bucket == 10);
    for (Eigen::Index k = 0; k < s.v.rows(); ++k) CHECK(std::abs(s.v.row(k).norm() - 1) <= 1e-12);
}

TEST_CASE("LMOCSO identical pair stays put without mutation") {
    const Problem p(ProblemId::Zdt1, 6);
    Backend be;
    Population pop;
    pop.x = Matrix::Constant(2, 6, 0.3);
    pop.f = be.evaluate(p, pop.x);
    pop.nfe_stamp = 2;
    LmocsoState s = lmocso_init(pop, 2, PolynomialMutationParams{20.0, 0.0});
    Rng r({40, 18});
    CHECK(lmocso_step(s, 0.5, p, be, r) == 1);
    CHECK((s.swarm.x.array() == 0.3).all());
}

TEST_CASE("LMOCSO spends floor(N/2) evaluations and keeps a non-dominated archive") {
    const Problem p(ProblemId::Zdt2, 10);
    Backend be;
    Rng r({40, 19});
    LmocsoState s = lmocso_init(initial(p, 25, be, r), 2);
    for (int g = 0; g < 40; ++g) {
        const auto before = be.rows_evaluated();
        CHECK(lmocso_step(s, (g + 1) / 40.0, p, be, r) == 12);
        CHECK(be.rows_evaluated() - before == 12);
        CHECK(s.swarm.size() == 25);
        CHECK(s.archive.size() <= 25);
        for (Eigen::Index a = 0; a < s.archive.f.rows(); ++a)
            for (Eigen::Index b = 0; b < s.archive.f.rows(); ++b)
                CHECK_FALSE(dom_ref(s.archive.f.row(a), s.archive.f.row(b)));
    }
}

TEST_CASE("archive truncation respects capacity") {
    Rng r({40, 20});
    Matrix f(60, 2);
    for (Eigen::Index i = 0; i < 60; ++i) {
        f(i, 0) = r.uniform();
        f(i, 1) = 1 - std::sqrt(f(i, 0));
    }
    const Matrix v = unit_rows(das_dennis_vectors(2, 9).v);
    const auto keep = archive_truncate(f, v, 10, 5.0);
    CHECK(keep.size() == 10);
    CHECK(archive_truncate(f, v, 100, 5.0).size() == 60);
}

TEST_CASE("multi-objective steps are deterministic") {
    const Problem p(ProblemId::Dtlz1, 10, 3);
    const auto run = [&](int which) {
        Backend be;
        Rng r({40, 21});
        Population pop = initial(p, 24, be, r);
        switch (which) {
        case 0: { auto s = spea2_init(pop); for (int g = 0; g < 5; ++g) spea2_step(s, p, be, r); return s.pop.f; }
        case 1: { auto s = ibea_init(pop); for (int g = 0; g < 5; ++g) ibea_step(s, p, be, r); return s.pop.f; }
        case 2: { auto s = hype_init(pop, 500); for (int g = 0; g < 5; ++g) hype_step(s, p, be, r); return s.pop.f; }
        case 3: { auto s = moead_init(pop, 3); for (int g = 0; g < 5; ++g) moead_step(s, p, be, r); return s.pop.f; }
        default: { auto s = lmocso_init(pop, 3); for (int g = 0; g < 5; ++g) lmocso_step(s, 0.1 * g, p, be, r); return s.archive.f; }
        }
    };
    for (int w = 0; w < 5; ++w) CHECK(run(w) == run(w));
}

} // TEST_SUITE
