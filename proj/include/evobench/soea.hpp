#pragma once

// Single-objective algorithms as state-transition steps over a Population.
// Every step evaluates through a Backend and returns the number of fitness
// evaluations it spent.

#include "evobench/backend.hpp"
#include "evobench/core.hpp"
#include "evobench/operators.hpp"
#include "evobench/problems.hpp"

#include <array>
#include <deque>
#include <span>
#include <vector>

namespace evobench {

/// Uniform initialization in bounds followed by one batch evaluation.
Population initial_population(const Problem& p, std::size_t n, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// PSO

struct PsoParams {
    double w = 0.6;
    double c1 = 2.5;
    double c2 = 0.8;
    double vmax_fraction = 0.5; // |v_j| <= vmax_fraction * (upper_j - lower_j)
};

struct PsoState {
    Matrix v;
    Matrix pbest_x;
    Vector pbest_f;
    RowVector gbest_x;
    double gbest_f = kInf;
    PsoParams params;
};

PsoState pso_init(const Population& pop, const PsoParams& params = {});
std::size_t pso_step(PsoState& s, Population& pop, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// Competitive swarm optimizer

struct CsoState {
    Matrix v;
    double phi = 0.0;
};

CsoState cso_init(const Population& pop, double phi = 0.0);
/// Random disjoint pairs compete; each loser learns from its winner and is
/// re-evaluated. With odd N the unpaired individual sits the generation out.
std::size_t cso_step(CsoState& s, Population& pop, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// Differential evolution, rand/1/bin

struct DeState {
    double F = 0.5;
    double CR = 0.9;
};

struct DeTrials {
    Matrix mutants; // unclamped
    Matrix trials;  // after binomial crossover and clamping
};

DeTrials de_trials(const DeState& s, const Population& pop, const Bounds& b, Rng& r);
std::size_t de_step(const DeState& s, Population& pop, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// SaDE

enum class SadeStrategy : std::size_t { Rand1Bin = 0, RandToBest2Bin = 1, Rand2Bin = 2, CurrentToRand1 = 3 };
inline constexpr std::size_t kSadeStrategies = 4;
using SadeArray = std::array<double, kSadeStrategies>;

struct SadeState {
    std::size_t learning_period = 50;
    double epsilon = 0.01;
    /// Carried verbatim from the reference configuration; it has no role in
    /// the four-strategy pool.
    double differential_vectors = 9;

    SadeArray probabilities{0.25, 0.25, 0.25, 0.25};
    SadeArray cr_memory{0.5, 0.5, 0.5, 0.5};
    // One entry per generation, newest at the back, at most learning_period long.
    std::deque<std::array<std::size_t, kSadeStrategies>> successes;
    std::deque<std::array<std::size_t, kSadeStrategies>> failures;
    std::deque<std::array<std::vector<double>, kSadeStrategies>> success_cr;
    std::size_t generation = 0;
};

/// Strategy probabilities from the success/failure memories; uniform until
/// the memory spans a full learning period.
SadeArray sade_strategy_probabilities(const SadeState& s);
/// Lower bound every strategy probability respects once learning starts.
double sade_probability_floor(const SadeState& s);
std::size_t sade_step(SadeState& s, Population& pop, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// Genetic algorithm

enum class CrossoverKind { Sbx, UniformRandom };
enum class MutationKind { Polynomial, Gaussian };

struct GaConfig {
    CrossoverKind crossover = CrossoverKind::Sbx;
    MutationKind mutation = MutationKind::Polynomial;
    double eta_c = 20.0;
    double eta_m = 20.0;
    double pc = 1.0;
    double pm = -1.0;            // per gene; negative = 1/D
    double sigma_fraction = 0.1; // Gaussian sigma as a fraction of the range

    static GaConfig sbx_pm() { return {}; }
    static GaConfig ur_gm() { return {CrossoverKind::UniformRandom, MutationKind::Gaussian}; }
};

/// Binary tournament, pairwise crossover and mutation; exactly N rows.
Matrix ga_offspring(const GaConfig& cfg, const Population& pop, const Bounds& b, Rng& r);
/// One generation with (mu + lambda) truncation back to N.
std::size_t ga_step(const GaConfig& cfg, Population& pop, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// CMA-ES

struct CmaState {
    std::size_t dim = 0;
    std::size_t lambda = 0;
    std::size_t mu = 0;
    Vector weights;
    double mu_eff = 0;
    double c_sigma = 0, d_sigma = 0, c_c = 0, c_1 = 0, c_mu = 0, c_m = 1.0, chi_n = 0;

    Vector mean;
    double sigma = 0;
    Eigen::MatrixXd C;
    Eigen::MatrixXd B; // eigenvectors of C
    Vector D;          // square roots of the eigenvalues of C
    Vector p_sigma;
    Vector p_c;
    std::size_t generation = 0;
    std::size_t repairs = 0;
};

/// Log-decreasing recombination weights w_i ~ ln(mu + 1/2) - ln(i), summing to 1.
Vector cma_weights(std::size_t mu);
/// Relative floor applied to the covariance spectrum: min eigenvalue >= this * trace / D.
inline constexpr double kCmaEigenFloor = 1e-14;

CmaState cma_init(const Vector& mean, double sigma, std::size_t lambda, double c_m = 1.0);
/// Samples lambda points, ranks them and updates mean, paths, covariance and
/// step size. `offspring` receives the evaluated sample.
std::size_t cmaes_step(CmaState& s, Population& offspring, const Problem& p, Backend& backend, Rng& r);

// ---------------------------------------------------------------------------
// IPOP restarts

struct IpopState {
    CmaState cma;
    double sigma0 = 0;
    std::size_t restarts = 0;
    std::size_t stagnation_threshold = 50;
    double tol_fun = 1e-12;
    double sigma_floor = 1e-12;
    std::vector<double> gen_best_history; // since the last restart
    RowVector best_x;                     // incumbent across restarts
    double best_f = kInf;
};

IpopState ipop_init(const Vector& mean, double sigma0, std::size_t lambda);

enum class IpopAction { Continue, Restart };

struct IpopDecision {
    IpopAction action = IpopAction::Continue;
    std::size_t next_lambda = 0;
};

/// Restart once the best value has failed to improve by more than tol_fun for
/// stagnation_threshold consecutive generations, or sigma has collapsed.
IpopDecision ipop_restart_policy(const IpopState& s, std::span<const double> gen_best_history);
std::size_t ipop_step(IpopState& s, Population& offspring, const Problem& p, Backend& backend, Rng& r);

} // namespace evobench
