#include "evobench/soea.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evobench {

Vector cma_weights(std::size_t mu) {
    if (mu == 0) throw ContractViolation("cma_weights: mu must be positive");
    Vector w(static_cast<Eigen::Index>(mu));
    const double top = std::log(static_cast<double>(mu) + 0.5);
    for (std::size_t i = 0; i < mu; ++i) w[static_cast<Eigen::Index>(i)] = top - std::log(static_cast<double>(i + 1));
    return w / w.sum();
}

CmaState cma_init(const Vector& mean, double sigma, std::size_t lambda, double c_m) {
    if (mean.size() == 0) throw ContractViolation("cma_init: empty mean");
    if (lambda < 2) throw InsufficientPopulation("CMA-ES needs lambda >= 2");
    if (!(sigma > 0)) throw ContractViolation("cma_init: sigma must be positive");
    CmaState s;
    s.dim = static_cast<std::size_t>(mean.size());
    s.lambda = lambda;
    s.mu = lambda / 2;
    s.weights = cma_weights(s.mu);
    s.mu_eff = 1.0 / s.weights.squaredNorm();

    const double n = static_cast<double>(s.dim);
    const double me = s.mu_eff;
    s.c_sigma = (me + 2.0) / (n + me + 5.0);
    s.d_sigma = 1.0 + 2.0 * std::max(0.0, std::sqrt((me - 1.0) / (n + 1.0)) - 1.0) + s.c_sigma;
    s.c_c = (4.0 + me / n) / (n + 4.0 + 2.0 * me / n);
    s.c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + me);
    s.c_mu = std::min(1.0 - s.c_1, 2.0 * (me - 2.0 + 1.0 / me) / ((n + 2.0) * (n + 2.0) + me));
    s.c_m = c_m;
    s.chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

    const auto d = static_cast<Eigen::Index>(s.dim);
    s.mean = mean;
    s.sigma = sigma;
    s.C = Eigen::MatrixXd::Identity(d, d);
    s.B = Eigen::MatrixXd::Identity(d, d);
    s.D = Vector::Ones(d);
    s.p_sigma = Vector::Zero(d);
    s.p_c = Vector::Zero(d);
    return s;
}

namespace {

void reset_covariance(CmaState& s) {
    const auto d = static_cast<Eigen::Index>(s.dim);
    s.C = Eigen::MatrixXd::Identity(d, d);
    s.B = Eigen::MatrixXd::Identity(d, d);
    s.D = Vector::Ones(d);
    s.p_c.setZero();
    s.p_sigma.setZero();
    ++s.repairs;
}

// Symmetrizes C, floors its spectrum and refreshes B and D.
void decompose(CmaState& s) {
    s.C = (0.5 * (s.C + s.C.transpose())).eval();
    if (!s.C.allFinite()) {
        reset_covariance(s);
        return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.C);
    if (eig.info() != Eigen::Success) {
        reset_covariance(s);
        return;
    }
    Vector ev = eig.eigenvalues();
    const double floor = kCmaEigenFloor * std::max(s.C.trace(), 0.0) / static_cast<double>(s.dim);
    bool floored = false;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (!(ev[i] >= floor) || ev[i] <= 0.0) {
            ev[i] = floor > 0 ? floor : 1e-300;
            floored = true;
        }
    }
    s.B = eig.eigenvectors();
    if (floored) {
        s.C = s.B * ev.asDiagonal() * s.B.transpose();
        s.C = (0.5 * (s.C + s.C.transpose())).eval();
        ++s.repairs;
    }
    s.D = ev.cwiseSqrt();
}

} // namespace

std::size_t cmaes_step(CmaState& s, Population& offspring, const Problem& p, Backend& backend, Rng& r) {
    const auto d = static_cast<Eigen::Index>(s.dim);
    const auto lam = static_cast<Eigen::Index>(s.lambda);
    if (static_cast<std::size_t>(d) != p.dim()) throw ContractViolation("cmaes_step: dimension mismatch");
    const Bounds& b = p.bounds();

    Eigen::MatrixXd y(lam, d);
    Matrix x(lam, d);
    Vector z(d);
    for (Eigen::Index k = 0; k < lam; ++k) {
        for (Eigen::Index j = 0; j < d; ++j) z[j] = r.normal(0.0, 1.0);
        Vector yk = s.B * s.D.cwiseProduct(z);
        Vector xk = s.mean + s.sigma * yk;
        bool clipped = false;
        for (Eigen::Index j = 0; j < d; ++j) {
            const double c = std::clamp(xk[j], b.lower[j], b.upper[j]);
            if (c != xk[j]) {
                xk[j] = c;
                clipped = true;
            }
        }
        if (clipped) yk = (xk - s.mean) / s.sigma;
        y.row(k) = yk.transpose();
        x.row(k) = xk.transpose();
    }
    const Matrix f = backend.evaluate(p, x);

    std::vector<std::size_t> order(s.lambda);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) {
        return f(static_cast<Eigen::Index>(a), 0) < f(static_cast<Eigen::Index>(c), 0);
    });

    Vector y_w = Vector::Zero(d);
    for (std::size_t i = 0; i < s.mu; ++i) {
        y_w += s.weights[static_cast<Eigen::Index>(i)] * y.row(static_cast<Eigen::Index>(order[i])).transpose();
    }
    s.mean += s.c_m * s.sigma * y_w;

    // C^{-1/2} y_w = B D^{-1} B^T y_w
    const Vector inv_sqrt_y = s.B * (s.B.transpose() * y_w).cwiseQuotient(s.D);
    s.p_sigma = (1.0 - s.c_sigma) * s.p_sigma + std::sqrt(s.c_sigma * (2.0 - s.c_sigma) * s.mu_eff) * inv_sqrt_y;
    const double ps_norm = s.p_sigma.norm();
    const double gen = static_cast<double>(s.generation + 1);
    const double h_denom = std::sqrt(1.0 - std::pow(1.0 - s.c_sigma, 2.0 * gen));
    const bool h_sigma = ps_norm / h_denom < (1.4 + 2.0 / (static_cast<double>(s.dim) + 1.0)) * s.chi_n;
    s.p_c = (1.0 - s.c_c) * s.p_c;
    if (h_sigma) s.p_c += std::sqrt(s.c_c * (2.0 - s.c_c) * s.mu_eff) * y_w;
    const double delta_h = h_sigma ? 0.0 : s.c_c * (2.0 - s.c_c);

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < s.mu; ++i) {
        const Vector yi = y.row(static_cast<Eigen::Index>(order[i])).transpose();
        rank_mu.noalias() += s.weights[static_cast<Eigen::Index>(i)] * yi * yi.transpose();
    }
    s.C = (1.0 + s.c_1 * delta_h - s.c_1 - s.c_mu) * s.C + s.c_1 * s.p_c * s.p_c.transpose() + s.c_mu * rank_mu;

    s.sigma *= std::exp((s.c_sigma / s.d_sigma) * (ps_norm / s.chi_n - 1.0));
    if (!std::isfinite(s.sigma)) s.sigma = std::numeric_limits<double>::max() / 4;
    decompose(s);
    if (!s.mean.allFinite()) throw ContractViolation("cmaes_step: mean became non-finite");

    offspring.x = std::move(x);
    offspring.f = f;
    offspring.nfe_stamp += s.lambda;
    ++s.generation;
    return s.lambda;
}

// ---------------------------------------------------------------------------

IpopState ipop_init(const Vector& mean, double sigma0, std::size_t lambda) {
    IpopState s;
    s.cma = cma_init(mean, sigma0, lambda);
    s.sigma0 = sigma0;
    return s;
}

IpopDecision ipop_restart_policy(const IpopState& s, std::span<const double> history) {
    IpopDecision d{IpopAction::Continue, s.cma.lambda};
    const auto restart = [&] { return IpopDecision{IpopAction::Restart, 2 * s.cma.lambda}; };
    if (s.cma.sigma < s.sigma_floor) return restart();
    if (history.empty()) return d;
    double best = history.front();
    std::size_t flat = 0;
    for (std::size_t g = 1; g < history.size(); ++g) {
        if (history[g] < best - s.tol_fun) {
            flat = 0;
        } else {
            ++flat;
        }
        best = std::min(best, history[g]);
    }
    if (flat >= s.stagnation_threshold) return restart();
    return d;
}

std::size_t ipop_step(IpopState& s, Population& offspring, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t used = cmaes_step(s.cma, offspring, p, backend, r);
    Eigen::Index arg = 0;
    const double gen_best = offspring.f.col(0).minCoeff(&arg);
    if (gen_best <= s.best_f) {
        s.best_f = gen_best;
        s.best_x = offspring.x.row(arg);
    }
    s.gen_best_history.push_back(gen_best);

    const IpopDecision d = ipop_restart_policy(s, s.gen_best_history);
    if (d.action == IpopAction::Restart) {
        const Bounds& b = p.bounds();
        Vector mean(static_cast<Eigen::Index>(p.dim()));
        for (Eigen::Index j = 0; j < mean.size(); ++j) mean[j] = r.uniform(b.lower[j], b.upper[j]);
        s.cma = cma_init(mean, s.sigma0, d.next_lambda, s.cma.c_m);
        s.gen_best_history.clear();
        ++s.restarts;
    }
    return used;
}

} // namespace evobench
