#include "evobench/soea.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>

namespace evobench {

namespace {

void require_rows(std::size_t n, std::size_t needed, std::string_view who) {
    if (n < needed) {
        throw InsufficientPopulation(fmt::format("{} needs a population of at least {}, got {}", who, needed, n));
    }
}

// Binomial crossover of row i with a forced coordinate j_rand, then clamping.
void binomial_into(Matrix& trials, Eigen::Index i, const Matrix& x, const Matrix& mutants, double cr,
                   const Bounds& b, Rng& r) {
    const Eigen::Index d = x.cols();
    const auto j_rand = static_cast<Eigen::Index>(r.index(static_cast<std::size_t>(d)));
    for (Eigen::Index j = 0; j < d; ++j) {
        const bool take = r.uniform() < cr || j == j_rand;
        trials(i, j) = std::clamp(take ? mutants(i, j) : x(i, j), b.lower[j], b.upper[j]);
    }
}

// Greedy one-to-one replacement; returns per-row success flags.
std::vector<bool> greedy_select(Population& pop, const Matrix& trials, const Matrix& f_trials) {
    std::vector<bool> success(pop.size(), false);
    for (Eigen::Index i = 0; i < pop.x.rows(); ++i) {
        if (f_trials(i, 0) <= pop.f(i, 0)) {
            pop.x.row(i) = trials.row(i);
            pop.f.row(i) = f_trials.row(i);
            success[static_cast<std::size_t>(i)] = true;
        }
    }
    return success;
}

} // namespace

DeTrials de_trials(const DeState& s, const Population& pop, const Bounds& b, Rng& r) {
    const std::size_t n = pop.size();
    require_rows(n, 4, "DE");
    DeTrials out{Matrix(pop.x.rows(), pop.x.cols()), Matrix(pop.x.rows(), pop.x.cols())};
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = r.distinct(n, 3, i);
        const auto row = static_cast<Eigen::Index>(i);
        out.mutants.row(row) = pop.x.row(static_cast<Eigen::Index>(idx[0])) +
                               s.F * (pop.x.row(static_cast<Eigen::Index>(idx[1])) -
                                      pop.x.row(static_cast<Eigen::Index>(idx[2])));
        binomial_into(out.trials, row, pop.x, out.mutants, s.CR, b, r);
    }
    return out;
}

std::size_t de_step(const DeState& s, Population& pop, const Problem& p, Backend& backend, Rng& r) {
    const DeTrials t = de_trials(s, pop, p.bounds(), r);
    const Matrix f = backend.evaluate(p, t.trials);
    greedy_select(pop, t.trials, f);
    pop.nfe_stamp += pop.size();
    return pop.size();
}

// ---------------------------------------------------------------------------

double sade_probability_floor(const SadeState& s) {
    const double k = static_cast<double>(kSadeStrategies);
    return s.epsilon / (k * (1.0 + s.epsilon));
}

SadeArray sade_strategy_probabilities(const SadeState& s) {
    SadeArray p{};
    if (s.successes.size() < s.learning_period) {
        p.fill(1.0 / static_cast<double>(kSadeStrategies));
        return p;
    }
    double total = 0;
    for (std::size_t k = 0; k < kSadeStrategies; ++k) {
        double ns = 0, nf = 0;
        for (const auto& g : s.successes) ns += static_cast<double>(g[k]);
        for (const auto& g : s.failures) nf += static_cast<double>(g[k]);
        const double rate = ns + nf > 0 ? ns / (ns + nf) : 0.0;
        p[k] = rate + s.epsilon;
        total += p[k];
    }
    for (auto& v : p) v /= total;
    return p;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::size_t roulette(const SadeArray& p, double u) {
    double acc = 0;
    for (std::size_t k = 0; k < kSadeStrategies; ++k) {
        acc += p[k];
        if (u < acc) return k;
    }
    return kSadeStrategies - 1;
}

} // namespace

std::size_t sade_step(SadeState& s, Population& pop, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t n = pop.size();
    require_rows(n, 6, "SaDE");
    const Bounds& b = p.bounds();

    s.probabilities = sade_strategy_probabilities(s);
    if (s.success_cr.size() >= s.learning_period) {
        for (std::size_t k = 0; k < kSadeStrategies; ++k) {
            std::vector<double> crs;
            for (const auto& g : s.success_cr) crs.insert(crs.end(), g[k].begin(), g[k].end());
            if (!crs.empty()) s.cr_memory[k] = median(std::move(crs));
        }
    }

    Eigen::Index best = 0;
    pop.f.col(0).minCoeff(&best);

    Matrix mutants(pop.x.rows(), pop.x.cols());
    Matrix trials(pop.x.rows(), pop.x.cols());
    std::vector<std::size_t> strategy(n);
    std::vector<double> cr_used(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = static_cast<Eigen::Index>(i);
        const std::size_t k = roulette(s.probabilities, r.uniform());
        const double F = r.normal(0.5, 0.3);
        const double cr = std::clamp(r.normal(s.cr_memory[k], 0.1), 0.0, 1.0);
        strategy[i] = k;
        cr_used[i] = cr;
        auto X = [&](std::size_t idx) { return pop.x.row(static_cast<Eigen::Index>(idx)); };
        switch (static_cast<SadeStrategy>(k)) {
        case SadeStrategy::Rand1Bin: {
            const auto q = r.distinct(n, 3, i);
            mutants.row(row) = X(q[0]) + F * (X(q[1]) - X(q[2]));
            binomial_into(trials, row, pop.x, mutants, cr, b, r);
            break;
        }
        case SadeStrategy::RandToBest2Bin: {
            const auto q = r.distinct(n, 4, i);
            mutants.row(row) = X(i) + F * (pop.x.row(best) - X(i)) + F * (X(q[0]) - X(q[1])) + F * (X(q[2]) - X(q[3]));
            binomial_into(trials, row, pop.x, mutants, cr, b, r);
            break;
        }
        case SadeStrategy::Rand2Bin: {
            const auto q = r.distinct(n, 5, i);
            mutants.row(row) = X(q[0]) + F * (X(q[1]) - X(q[2])) + F * (X(q[3]) - X(q[4]));
            binomial_into(trials, row, pop.x, mutants, cr, b, r);
            break;
        }
        case SadeStrategy::CurrentToRand1: {
            const auto q = r.distinct(n, 3, i);
            const double K = r.uniform();
            mutants.row(row) = X(i) + K * (X(q[0]) - X(i)) + F * (X(q[1]) - X(q[2]));
            trials.row(row) = mutants.row(row);
            clamp_row(trials.row(row), b);
            break;
        }
        }
    }

    const Matrix f = backend.evaluate(p, trials);
    const auto success = greedy_select(pop, trials, f);

    std::array<std::size_t, kSadeStrategies> ns{}, nf{};
    std::array<std::vector<double>, kSadeStrategies> crs;
    for (std::size_t i = 0; i < n; ++i) {
        if (success[i]) {
            ++ns[strategy[i]];
            crs[strategy[i]].push_back(cr_used[i]);
        } else {
            ++nf[strategy[i]];
        }
    }
    s.successes.push_back(ns);
    s.failures.push_back(nf);
    s.success_cr.push_back(std::move(crs));
    while (s.successes.size() > s.learning_period) {
        s.successes.pop_front();
        s.failures.pop_front();
        s.success_cr.pop_front();
    }
    ++s.generation;
    pop.nfe_stamp += n;
    return n;
}

} // namespace evobench
