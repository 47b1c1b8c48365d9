#include "evobench/backend.hpp"

#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <thread>

using namespace evobench;

TEST_SUITE("backend") {

TEST_CASE("parallel evaluation is bit-identical to serial") {
    for (ProblemId id : {ProblemId::Ackley, ProblemId::Rosenbrock, ProblemId::Dtlz2, ProblemId::Zdt3,
                         ProblemId::Cec2022F4}) {
        const Problem p(id, 12);
        Rng r({50, 0});
        const Matrix x = r.uniform_matrix(257, p.bounds());
        Backend serial;
        const Matrix want = serial.evaluate(p, x);
        for (std::size_t k : {1u, 2u, 3u, 8u}) {
            for (std::size_t chunk : {0u, 1u, 7u, 64u, 1000u}) {
                Backend par(BackendSpec::parallel(k, chunk));
                CHECK(par.evaluate(p, x) == want);
            }
        }
    }
}

TEST_CASE("chunk sizing") {
    CHECK(BackendSpec::parallel(4).chunk_for(100) == 7);
    CHECK(BackendSpec::parallel(4, 10).chunk_for(100) == 10);
    CHECK(BackendSpec::parallel(4).chunk_for(1) == 1);
    CHECK_THROWS_AS(BackendSpec::parallel(0), ContractViolation);
}

TEST_CASE("for_rows covers every row exactly once") {
    for (std::size_t rows : {0u, 1u, 5u, 100u, 1001u}) {
        Backend par(BackendSpec::parallel(3, 4));
        std::vector<std::atomic<int>> hits(rows);
        par.for_rows(rows, [&](std::size_t a, std::size_t b) {
            for (std::size_t i = a; i < b; ++i) ++hits[i];
        });
        for (auto& h : hits) CHECK(h.load() == 1);
    }
}

TEST_CASE("a failing chunk becomes an evaluation error naming its rows") {
    for (std::size_t k : {1u, 4u}) {
        Backend be(BackendSpec::parallel(k, 10));
        try {
            be.map_rows(100, 1, [](std::size_t first, std::size_t last, Matrix& out) {
                if (first <= 42 && 42 < last) throw std::runtime_error("boom");
                if (first <= 77 && 77 < last) throw std::runtime_error("late");
                for (std::size_t i = first; i < last; ++i) out(static_cast<Eigen::Index>(i), 0) = 1.0;
            });
            FAIL("expected EvaluationError");
        } catch (const EvaluationError& e) {
            CHECK(e.first_row() == 40);
            CHECK(e.last_row() == 50);
            CHECK(std::string(e.what()).find("boom") != std::string::npos);
            CHECK(std::string(e.what()).find("[40, 50)") != std::string::npos);
        }
        // The pool is still usable afterwards.
        const Problem p(ProblemId::Sphere, 3);
        CHECK(be.evaluate(p, Matrix::Ones(20, 3)).sum() == doctest::Approx(60.0));
    }
    Backend serial;
    CHECK_THROWS_AS(serial.map_rows(5, 1, [](std::size_t, std::size_t, Matrix&) { throw std::runtime_error("x"); }),
                    EvaluationError);
}

TEST_CASE("dimension mismatch is a contract violation") {
    Backend be;
    CHECK_THROWS_AS(be.evaluate(Problem(ProblemId::Sphere, 4), Matrix::Zero(2, 3)), ContractViolation);
}

TEST_CASE("rows_evaluated counts every evaluated row") {
    Backend be(BackendSpec::parallel(2));
    const Problem p(ProblemId::Sphere, 3);
    be.evaluate(p, Matrix::Zero(10, 3));
    be.evaluate(p, Matrix::Zero(0, 3));
    be.evaluate(p, Matrix::Zero(5, 3));
    CHECK(be.rows_evaluated() == 15);
}

TEST_CASE("empty batches") {
    Backend be(BackendSpec::parallel(2));
    const Matrix f = be.evaluate(Problem(ProblemId::Zdt1, 4), Matrix::Zero(0, 4));
    CHECK(f.rows() == 0);
    CHECK(f.cols() == 2);
}

TEST_CASE("profile_backend") {
    VirtualClock clock(0.5);
    CHECK(profile_backend(BackendSpec::serial(), ProblemId::Sphere, {}, 3, clock).empty());
    CHECK_THROWS_AS(profile_backend(BackendSpec::serial(), ProblemId::Sphere, {{4, 4}}, 0, clock), ContractViolation);

    VirtualClock a(0.5), b(0.5);
    const auto ta = profile_backend(BackendSpec::parallel(2), ProblemId::Ackley, {{16, 8}, {64, 32}}, 4, a);
    const auto tb = profile_backend(BackendSpec::parallel(2), ProblemId::Ackley, {{16, 8}, {64, 32}}, 4, b);
    REQUIRE(ta.size() == 2);
    CHECK(ta[0].n == 16);
    CHECK(ta[1].d == 32);
    for (std::size_t i = 0; i < 2; ++i) {
        // Each repetition reads the clock twice, one tick apart.
        CHECK(ta[i].mean_s == 0.5);
        CHECK(ta[i].std_s == 0.0);
        CHECK(ta[i].mean_s == tb[i].mean_s);
    }
}

TEST_CASE("EVOBENCH_WORKERS overrides the parallel worker count") {
    ::setenv("EVOBENCH_WORKERS", "3", 1);
    CHECK(BackendSpec::parallel(8).effective_workers() == 3);
    CHECK(Backend(BackendSpec::parallel(8)).workers() == 3);
    ::setenv("EVOBENCH_WORKERS", "zero", 1);
    CHECK_THROWS_AS(BackendSpec::parallel(8).effective_workers(), ContractViolation);
    ::unsetenv("EVOBENCH_WORKERS");
    CHECK(BackendSpec::parallel(8).effective_workers() == 8);
    CHECK(Backend().workers() == 1);
}

TEST_CASE("eight workers speed up a heavy batch") {
    if (std::thread::hardware_concurrency() < 8) {
        MESSAGE("skipped: fewer than 8 hardware threads");
        return;
    }
    SteadyClock clock;
    const auto serial = profile_backend(BackendSpec::serial(), ProblemId::Ackley, {{8192, 512}}, 3, clock);
    const auto par = profile_backend(BackendSpec::parallel(8), ProblemId::Ackley, {{8192, 512}}, 3, clock);
    CHECK(serial[0].mean_s / par[0].mean_s >= 2.0);
}

} // TEST_SUITE
