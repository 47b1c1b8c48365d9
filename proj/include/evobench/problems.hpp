#pragma once

// Benchmark problems: CEC2022 F1-F5, five classic single-objective functions,
// DTLZ1-7 and ZDT1-3, with analytic Pareto-front reference sets.

#include "evobench/core.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace evobench {

enum class ProblemId {
    Cec2022F1, Cec2022F2, Cec2022F3, Cec2022F4, Cec2022F5,
    Ackley, Griewank, Rosenbrock, Schwefel, Sphere,
    Dtlz1, Dtlz2, Dtlz3, Dtlz4, Dtlz5, Dtlz6, Dtlz7,
    Zdt1, Zdt2, Zdt3,
};

std::string_view to_string(ProblemId id);
ProblemId parse_problem_id(std::string_view name);
const std::vector<ProblemId>& all_problem_ids();

bool is_cec2022(ProblemId id);
bool is_multi_objective(ProblemId id);

/// Shift vector and rotation matrix applied as z = R (x - shift).
struct Transform {
    Vector shift;
    Eigen::MatrixXd rotation;

    static Transform identity(std::size_t dim);
    /// Whitespace-separated floats: D shift values then D*D rotation entries, row-major.
    static Transform load(const std::string& path, std::size_t dim);
    std::uint64_t fingerprint() const;
};

class Problem {
public:
    /// dim = 0 or m = 0 selects the default (CEC 20, others 50; DTLZ m = 3, ZDT m = 2).
    Problem(ProblemId id, std::size_t dim = 0, std::size_t n_obj = 0,
            std::optional<Transform> transform = std::nullopt);

    ProblemId id() const noexcept { return id_; }
    std::string_view name() const noexcept { return to_string(id_); }
    std::size_t dim() const noexcept { return dim_; }
    std::size_t n_obj() const noexcept { return m_; }
    const Bounds& bounds() const noexcept { return bounds_; }
    const std::optional<Transform>& transform() const noexcept { return transform_; }
    std::string transform_hash() const;

    /// Evaluates rows [first, last) of x into the same rows of f.
    /// f must already be sized x.rows() x n_obj().
    void evaluate_rows(const Matrix& x, Matrix& f, std::size_t first, std::size_t last) const;

    /// Objective values of a single point (allocates; convenience for tests).
    RowVector evaluate(std::span<const double> x) const;

    /// Analytic nadir of the true front (used for HV reference points).
    RowVector front_nadir() const;

private:
    void evaluate_one(const double* x, double* f, std::vector<double>& scratch) const;

    ProblemId id_;
    std::size_t dim_;
    std::size_t m_;
    Bounds bounds_;
    std::optional<Transform> transform_;
};

/// Serial batch evaluation (the pure reference path the backends must match).
Matrix evaluate_batch(const Problem& p, const Matrix& x);

/// Samples of the analytic Pareto front.
///  - m = 2: n points (ZDT3/DTLZ7 spread over their disconnected pieces and
///    filtered to the non-dominated part, so possibly slightly fewer);
///  - m >= 3: simplex/sphere fronts use the smallest Das-Dennis lattice with at
///    least n points; DTLZ5/6 use n points on the degenerate curve; DTLZ7 uses
///    a grid of about n points filtered to its non-dominated part.
Matrix pareto_front_reference(const Problem& p, std::size_t n_points);

/// Default reference-set size: 1000 for m = 2, 990 for m = 3 (Das-Dennis H = 43).
std::size_t default_reference_size(std::size_t m);

// Raw single-objective kernels, exposed for tests.
namespace functions {
double sphere(std::span<const double> x);
double ackley(std::span<const double> x);
double griewank(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double schwefel(std::span<const double> x);
double zakharov(std::span<const double> x);
double schaffer_f7(std::span<const double> x);
double rastrigin(std::span<const double> x);
double levy(std::span<const double> x);
} // namespace functions

} // namespace evobench
