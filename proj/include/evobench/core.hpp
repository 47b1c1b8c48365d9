#pragma once

// Shared data model: population matrices, bounds, budgets, clocks and
// counter-addressed random streams.

#include <Eigen/Core>

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evobench {

// Row-major so that one individual is one contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Errors

class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InsufficientPopulation : public ContractViolation {
public:
    using ContractViolation::ContractViolation;
};

class IncompatibleArity : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownId : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EvaluationError : public std::runtime_error {
public:
    EvaluationError(std::size_t first_row, std::size_t last_row, const std::string& what);
    std::size_t first_row() const noexcept { return first_; }
    std::size_t last_row() const noexcept { return last_; }

private:
    std::size_t first_;
    std::size_t last_;
};

// ---------------------------------------------------------------------------
// Bounds and populations

struct Bounds {
    Vector lower;
    Vector upper;

    Bounds() = default;
    Bounds(Vector lo, Vector hi);
    static Bounds uniform(std::size_t dim, double lo, double hi);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(lower.size()); }
    Vector range() const { return upper - lower; }
    Vector midpoint() const { return 0.5 * (lower + upper); }
};

struct Population {
    Matrix x;                    // N x D, problem units
    Matrix f;                    // N x M
    std::uint64_t nfe_stamp = 0; // cumulative FEs when f was computed

    std::size_t size() const noexcept { return static_cast<std::size_t>(x.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(x.cols()); }
    std::size_t objectives() const noexcept { return static_cast<std::size_t>(f.cols()); }
};

/// Clips every entry into its coordinate's box. In-bounds entries are untouched.
Matrix clamp_to_bounds(const Matrix& x, const Bounds& b);
void clamp_in_place(Matrix& x, const Bounds& b);
void clamp_row(Eigen::Ref<RowVector> row, const Bounds& b);

// ---------------------------------------------------------------------------
// Budgets and clocks

enum class BudgetKind { Generations, Evaluations, WallTime };

struct Budget {
    BudgetKind kind = BudgetKind::Generations;
    double limit = 100;

    static Budget generations(std::uint64_t n);
    static Budget evaluations(std::uint64_t n);
    static Budget wall_time(double seconds);

    /// Accepts "gen:100", "fe:1000000" or "time:30".
    static Budget parse(std::string_view text);
    std::string to_string() const;
};

/// True iff the budget's own axis has reached its limit. WallTime is inclusive.
bool budget_exhausted(const Budget& b, std::uint64_t gen, std::uint64_t nfe, double elapsed_s);

class Clock {
public:
    virtual ~Clock() = default;
    virtual double now() = 0;
};

class SteadyClock final : public Clock {
public:
    double now() override;

private:
    std::chrono::steady_clock::time_point origin_ = std::chrono::steady_clock::now();
};

/// Deterministic clock. Each call to now() returns the current reading and
/// then advances it by `tick` seconds.
class VirtualClock final : public Clock {
public:
    explicit VirtualClock(double tick = 0.0, double start = 0.0) : t_(start), tick_(tick) {}
    double now() override;
    void advance(double dt) { t_ += dt; }

private:
    double t_;
    double tick_;
};

// ---------------------------------------------------------------------------
// Randomness

struct RngStream {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;

    friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Child streams are a pure function of (seed, stream_id, child index).
std::vector<RngStream> split_stream(const RngStream& r, std::size_t n);

std::uint64_t mix64(std::uint64_t z) noexcept;

/// Counter-based generator: draw k of a stream is a pure function of
/// (seed, stream_id, k), independent of any other stream's consumption.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(const RngStream& s);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept;

    double uniform() noexcept; // [0, 1)
    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
    double normal(double mean = 0.0, double stddev = 1.0);
    std::size_t index(std::size_t n); // uniform in [0, n)

    /// k distinct indices from [0, n) excluding `exclude` (pass n for none).
    std::vector<std::size_t> distinct(std::size_t n, std::size_t k, std::size_t exclude);
    std::vector<std::size_t> permutation(std::size_t n);

    Matrix uniform_matrix(std::size_t rows, const Bounds& b);

    std::uint64_t counter() const noexcept { return counter_; }
    const RngStream& stream() const noexcept { return stream_; }

private:
    RngStream stream_;
    std::uint64_t key_a_;
    std::uint64_t key_b_;
    std::uint64_t counter_ = 0;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// All points with coordinates i/h summing to 1 (Das-Dennis lattice), one per row.
Matrix simplex_lattice(std::size_t m, std::size_t h);
std::size_t simplex_lattice_size(std::size_t m, std::size_t h);

/// FNV-1a over raw bytes; used for config/transform fingerprints.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL) noexcept;
std::string hex64(std::uint64_t v);

} // namespace evobench
