#pragma once

// Multi-objective algorithms and the selection machinery they share.
// Steps evaluate through a Backend and return the number of fitness
// evaluations they spent.

#include "evobench/backend.hpp"
#include "evobench/core.hpp"
#include "evobench/dominance.hpp"
#include "evobench/operators.hpp"
#include "evobench/problems.hpp"

#include <span>
#include <vector>

namespace evobench {

// ---------------------------------------------------------------------------
// Reference vectors

struct ReferenceVectors {
    Matrix v; // K x M
    std::vector<std::vector<std::size_t>> neighbors;

    std::size_t size() const noexcept { return static_cast<std::size_t>(v.rows()); }
};

/// Simplex lattice with step 1/h; rows sum to 1.
ReferenceVectors das_dennis_vectors(std::size_t m, std::size_t h);
/// Largest h whose lattice has at least one and at most n points (n >= m
/// is not required; h >= 1 always).
std::size_t lattice_h_for(std::size_t m, std::size_t n);
/// Rows scaled to unit Euclidean norm.
Matrix unit_rows(const Matrix& v);
/// For every row, the t nearest rows (itself included) by Euclidean distance.
std::vector<std::vector<std::size_t>> neighbor_table(const Matrix& v, std::size_t t);

// ---------------------------------------------------------------------------
// Shared pieces

struct Variation {
    SbxParams sbx;
    PolynomialMutationParams pm;
};

/// Rows of `f` selected by `idx`.
Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& idx);
Population take(const Population& pop, const std::vector<std::size_t>& idx);
/// Rows of a followed by rows of b.
Population merge(const Population& a, const Population& b);

/// Evaluates offspring into a Population stamped after the parent's.
Population evaluate_offspring(const Matrix& x, const Population& parents, const Problem& p, Backend& backend);

// ---------------------------------------------------------------------------
// NSGA-II

struct Nsga2Selection {
    std::vector<std::size_t> survivors;
    std::vector<std::size_t> rank;     // per survivor
    std::vector<double> crowding;      // per survivor
};

/// Fill by fronts; the split front is cut by descending crowding distance.
Nsga2Selection nsga2_select(const Matrix& f, std::size_t n);

struct Nsga2State {
    Population pop;
    std::vector<std::size_t> rank;
    std::vector<double> crowding;
    Variation variation;
};

Nsga2State nsga2_init(Population pop, const Variation& v = {});
std::size_t nsga2_step(Nsga2State& s, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// NSGA-III

struct Association {
    std::vector<std::size_t> vector; // index of the associated reference vector
    std::vector<double> distance;    // perpendicular distance to its line
};

/// Associates each row of normalized objectives with the reference line of
/// minimal perpendicular distance (ties go to the lower index).
Association associate_perpendicular(const Matrix& fn, const Matrix& refs);

/// Translates by the ideal point and divides by hyperplane intercepts found
/// from achievement-scalarizing extreme points; falls back to the per-objective
/// maximum when the intercept system is singular or degenerate.
Matrix nsga3_normalize(const Matrix& f);

std::vector<std::size_t> nsga3_select(const Matrix& f, std::size_t n, const Matrix& refs, Rng& r);

struct Nsga3State {
    Population pop;
    ReferenceVectors refs;
    Variation variation;
};

Nsga3State nsga3_init(Population pop, std::size_t m, const Variation& v = {});
std::size_t nsga3_step(Nsga3State& s, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// SPEA2

struct Spea2Fitness {
    std::vector<double> strength;
    std::vector<double> raw;
    std::vector<double> density;
    std::vector<double> fitness;
};

/// Strength, raw fitness and k-th nearest neighbour density (k = floor(sqrt(pool))).
Spea2Fitness spea2_fitness(const Matrix& f);
/// Iteratively drops the candidate whose sorted neighbour-distance list is
/// lexicographically smallest until n remain.
std::vector<std::size_t> spea2_truncate(const Matrix& f, std::vector<std::size_t> candidates, std::size_t n);
std::vector<std::size_t> spea2_select(const Matrix& f, std::size_t n);

struct Spea2State {
    Population pop;
    std::vector<double> fitness;
    Variation variation;
};

Spea2State spea2_init(Population pop, const Variation& v = {});
std::size_t spea2_step(Spea2State& s, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// IBEA

enum class IbeaIndicator { AdditiveEpsilon, Hypervolume };

/// Additive epsilon indicator I(a, b) = max_m (a_m - b_m).
double epsilon_indicator(const Matrix& f, Eigen::Index a, Eigen::Index b);

/// F(i) = sum_{j != i} -exp(-I(j, i) / (c * kappa)) on objectives scaled to
/// [0, 1] over the set, c = max |I|.
std::vector<double> ibea_fitness(const Matrix& f, double kappa, IbeaIndicator ind = IbeaIndicator::AdditiveEpsilon);
/// Removes the worst individual and updates the others until n remain.
/// `fitness_out`, when given, receives the survivors' final fitness.
std::vector<std::size_t> ibea_select(const Matrix& f, std::size_t n, double kappa,
                                     IbeaIndicator ind = IbeaIndicator::AdditiveEpsilon,
                                     std::vector<double>* fitness_out = nullptr);

struct IbeaState {
    Population pop;
    std::vector<double> fitness;
    double kappa = 0.05;
    IbeaIndicator indicator = IbeaIndicator::AdditiveEpsilon;
    Variation variation;
};

IbeaState ibea_init(Population pop, double kappa = 0.05, IbeaIndicator ind = IbeaIndicator::AdditiveEpsilon,
                    const Variation& v = {});
std::size_t ibea_step(IbeaState& s, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// HypE

/// Monte Carlo estimate of each point's shared hypervolume contribution
/// weighted for k removals, over the box [min(f), ref].
std::vector<double> hype_fitness(const Matrix& f, const RowVector& ref, std::size_t k, std::size_t samples, Rng& r);
/// Reference point 1.1 x nadir of f (shifted up when a nadir component is <= 0).
RowVector hype_reference(const Matrix& f);
std::vector<std::size_t> hype_select(const Matrix& f, std::size_t n, std::size_t samples, Rng& r);

struct HypeState {
    Population pop;
    std::size_t samples = 10000;
    Variation variation;
};

HypeState hype_init(Population pop, std::size_t samples = 10000, const Variation& v = {});
std::size_t hype_step(HypeState& s, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// MOEA/D

/// Penalty-based boundary intersection: d1 + theta * d2.
double pbi_scalarize(std::span<const double> fv, std::span<const double> lambda, std::span<const double> z_star,
                     double theta = 5.0);

struct MoeadState {
    Population pop; // one row per subproblem
    ReferenceVectors weights;
    RowVector z_star;
    std::size_t T = 20;
    std::size_t n_r = 2;
    double theta = 5.0;
    Variation variation;
    std::size_t last_replacements = 0;
};

/// Keeps the first K rows of `pop`, K = largest lattice size <= pop.size().
MoeadState moead_init(Population pop, std::size_t m, const Variation& v = {});
std::size_t moead_lattice_size(std::size_t m, std::size_t n);
/// Sequential neighbourhood update with child i belonging to subproblem i:
/// z* absorbs the child, then up to n_r neighbours whose PBI strictly improves
/// are replaced. Returns the number of replacements.
std::size_t moead_update(MoeadState& s, const Matrix& kids, const Matrix& fk, Rng& r);
std::size_t moead_step(MoeadState& s, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// RVEA

struct AngleAssociation {
    std::vector<std::size_t> vector;
    std::vector<double> angle;
};

/// Minimal-angle association of translated objectives with unit vectors.
AngleAssociation associate_angle(const Matrix& ft, const Matrix& unit_v);
/// Smallest angle between each vector and any other vector.
std::vector<double> vector_gammas(const Matrix& unit_v);

/// Angle-penalized distance selection: one survivor per non-empty niche, then
/// refilled by ascending APD to n (when enough rows exist).
std::vector<std::size_t> apd_select(const Matrix& f, const Matrix& unit_v, double progress, double alpha,
                                    std::size_t n);

struct RveaState {
    Population pop;
    Matrix v0;       // unit lattice vectors
    Matrix v;        // current, adapted
    double alpha = 2.0;
    double fr = 0.1;
    long long last_adapt_bucket = 0;
    Variation variation;
};

RveaState rvea_init(Population pop, std::size_t m, const Variation& v = {});
/// `progress` is t / t_max in [0, 1].
std::size_t rvea_step(RveaState& s, double progress, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// LMOCSO

struct LmocsoState {
    Population swarm;
    Matrix v;
    Population archive;
    Matrix refs;     // unit lattice vectors
    double theta = 5.0;
    double alpha = 2.0;
    PolynomialMutationParams pm;
};

/// Competition score per row: PBI against the nearest reference vector on
/// objectives normalized over the set.
std::vector<double> lmocso_scores(const Matrix& f, const Matrix& unit_refs, double theta);
/// Non-dominated rows of `f`, cut to capacity by one-per-vector reference
/// selection then ascending score.
std::vector<std::size_t> archive_truncate(const Matrix& f, const Matrix& unit_refs, std::size_t capacity,
                                          double theta);

LmocsoState lmocso_init(Population pop, std::size_t m, const PolynomialMutationParams& pm = {});
std::size_t lmocso_step(LmocsoState& s, double progress, const Problem& p, Backend& backend, Rng& r);

} // namespace evobench
