#include "evobench/core.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace evobench {

EvaluationError::EvaluationError(std::size_t first_row, std::size_t last_row, const std::string& what)
    : std::runtime_error(fmt::format("evaluation failed for rows [{}, {}): {}", first_row, last_row, what)),
      first_(first_row), last_(last_row) {}

Bounds::Bounds(Vector lo, Vector hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size()) {
        throw ContractViolation("bounds: lower and upper differ in length");
    }
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!(lower[i] < upper[i])) {
            throw ContractViolation(fmt::format("bounds: lower[{}] must be < upper[{}]", i, i));
        }
    }
}

Bounds Bounds::uniform(std::size_t dim, double lo, double hi) {
    return Bounds(Vector::Constant(static_cast<Eigen::Index>(dim), lo),
                  Vector::Constant(static_cast<Eigen::Index>(dim), hi));
}

void clamp_row(Eigen::Ref<RowVector> row, const Bounds& b) {
    for (Eigen::Index j = 0; j < row.size(); ++j) {
        row[j] = std::clamp(row[j], b.lower[j], b.upper[j]);
    }
}

void clamp_in_place(Matrix& x, const Bounds& b) {
    if (static_cast<std::size_t>(x.cols()) != b.dim()) {
        throw ContractViolation(fmt::format("clamp: matrix has {} columns, bounds have {}", x.cols(), b.dim()));
    }
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        double* row = x.row(i).data();
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            row[j] = std::clamp(row[j], b.lower[j], b.upper[j]);
        }
    }
}

Matrix clamp_to_bounds(const Matrix& x, const Bounds& b) {
    Matrix out = x;
    clamp_in_place(out, b);
    return out;
}

// ---------------------------------------------------------------------------

Budget Budget::generations(std::uint64_t n) { return {BudgetKind::Generations, static_cast<double>(n)}; }
Budget Budget::evaluations(std::uint64_t n) { return {BudgetKind::Evaluations, static_cast<double>(n)}; }
Budget Budget::wall_time(double seconds) { return {BudgetKind::WallTime, seconds}; }

Budget Budget::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ContractViolation(fmt::format("budget '{}' must look like gen:N, fe:N or time:S", text));
    }
    const auto kind = text.substr(0, colon);
    const std::string value(text.substr(colon + 1));
    double limit = 0;
    try {
        std::size_t used = 0;
        limit = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw ContractViolation(fmt::format("budget '{}': bad limit", text));
    }
    Budget b;
    if (kind == "gen") {
        b.kind = BudgetKind::Generations;
    } else if (kind == "fe") {
        b.kind = BudgetKind::Evaluations;
    } else if (kind == "time") {
        b.kind = BudgetKind::WallTime;
    } else {
        throw ContractViolation(fmt::format("budget '{}': unknown axis '{}'", text, kind));
    }
    // gen:0 is accepted; it runs initialization only.
    if (limit < 0 || (b.kind == BudgetKind::WallTime && limit <= 0)) {
        throw ContractViolation(fmt::format("budget '{}': limit must be positive", text));
    }
    b.limit = limit;
    return b;
}

std::string Budget::to_string() const {
    switch (kind) {
    case BudgetKind::Generations: return fmt::format("gen:{}", static_cast<std::uint64_t>(limit));
    case BudgetKind::Evaluations: return fmt::format("fe:{}", static_cast<std::uint64_t>(limit));
    case BudgetKind::WallTime: return fmt::format("time:{}", limit);
    }
    return {};
}

bool budget_exhausted(const Budget& b, std::uint64_t gen, std::uint64_t nfe, double elapsed_s) {
    switch (b.kind) {
    case BudgetKind::Generations: return static_cast<double>(gen) >= b.limit;
    case BudgetKind::Evaluations: return static_cast<double>(nfe) >= b.limit;
    case BudgetKind::WallTime: return elapsed_s >= b.limit;
    }
    return true;
}

double SteadyClock::now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - origin_).count();
}

double VirtualClock::now() {
    const double t = t_;
    t_ += tick_;
    return t;
}

// ---------------------------------------------------------------------------

std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<RngStream> split_stream(const RngStream& r, std::size_t n) {
    std::vector<RngStream> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({r.seed, mix64(r.stream_id ^ mix64(0x5851f42d4c957f2dULL + i))});
    }
    return out;
}

Rng::Rng(const RngStream& s)
    : stream_(s), key_a_(mix64(s.seed ^ mix64(s.stream_id))), key_b_(mix64(key_a_ ^ 0xd1b54a32d192ed03ULL)) {}

Rng::result_type Rng::operator()() noexcept {
    const std::uint64_t c = counter_++;
    return mix64(mix64(c + key_a_) ^ key_b_);
}

double Rng::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Rng::normal(double mean, double stddev) { return mean + stddev * normal_(*this); }

std::size_t Rng::index(std::size_t n) {
    // Lemire's multiply-shift with rejection.
    const std::uint64_t range = n;
    __uint128_t m = static_cast<__uint128_t>((*this)()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            m = static_cast<__uint128_t>((*this)()) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::size_t>(m >> 64);
}

std::vector<std::size_t> Rng::distinct(std::size_t n, std::size_t k, std::size_t exclude) {
    const std::size_t available = exclude < n ? n - 1 : n;
    if (k > available) {
        throw InsufficientPopulation(fmt::format("need {} distinct indices out of {}", k, available));
    }
    std::vector<std::size_t> out;
    out.reserve(k);
    while (out.size() < k) {
        const std::size_t c = index(n);
        if (c == exclude || std::find(out.begin(), out.end(), c) != out.end()) continue;
        out.push_back(c);
    }
    return out;
}

std::vector<std::size_t> Rng::permutation(std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) {
        std::swap(p[i - 1], p[index(i)]);
    }
    return p;
}

Matrix Rng::uniform_matrix(std::size_t rows, const Bounds& b) {
    Matrix x(rows, b.dim());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            x(i, j) = uniform(b.lower[j], b.upper[j]);
        }
    }
    return x;
}

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h) noexcept {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) { return fmt::format("{:016x}", v); }

} // namespace evobench

namespace evobench {

std::size_t simplex_lattice_size(std::size_t m, std::size_t h) {
    // C(h + m - 1, m - 1)
    std::size_t r = 1;
    for (std::size_t i = 1; i < m; ++i) {
        r = r * (h + i) / i;
    }
    return r;
}

Matrix simplex_lattice(std::size_t m, std::size_t h) {
    if (m < 1 || h < 1) {
        throw ContractViolation("simplex_lattice: m and h must be >= 1");
    }
    Matrix out(simplex_lattice_size(m, h), m);
    std::vector<std::size_t> counts(m, 0);
    std::size_t row = 0;
    // Enumerate compositions of h into m non-negative parts in lexicographic order.
    auto rec = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
        if (pos + 1 == m) {
            counts[pos] = left;
            for (std::size_t j = 0; j < m; ++j) {
                out(row, j) = static_cast<double>(counts[j]) / static_cast<double>(h);
            }
            ++row;
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            counts[pos] = c;
            self(self, pos + 1, left - c);
        }
    };
    rec(rec, 0, h);
    return out;
}

} // namespace evobench
