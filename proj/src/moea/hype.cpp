#include "evobench/moea.hpp"

#include <algorithm>
#include <cmath>

namespace evobench {

std::vector<double> hype_fitness(const Matrix& f, const RowVector& ref, std::size_t k, std::size_t samples, Rng& r) {
    const auto n = static_cast<std::size_t>(f.rows());
    const Eigen::Index m = f.cols();
    if (ref.size() != m) throw ContractViolation("hype_fitness: reference point length mismatch");
    std::vector<double> fit(n, 0.0);
    if (n == 0 || samples == 0) return fit;
    k = std::clamp<std::size_t>(k, 1, n);

    // alpha[q] = prod_{l=1}^{q-1} (k - l) / (n - l)
    std::vector<double> alpha(k + 1, 0.0);
    alpha[1] = 1.0;
    for (std::size_t q = 2; q <= k; ++q) {
        alpha[q] = alpha[q - 1] * static_cast<double>(k - (q - 1)) / static_cast<double>(n - (q - 1));
    }

    const RowVector lower = f.colwise().minCoeff().cwiseMin(ref);
    const RowVector span = ref - lower;
    double volume = 1.0;
    for (Eigen::Index j = 0; j < m; ++j) volume *= span[j];
    if (!(volume > 0)) return fit;

    RowVector s(m);
    std::vector<std::size_t> hit;
    hit.reserve(n);
    for (std::size_t t = 0; t < samples; ++t) {
        for (Eigen::Index j = 0; j < m; ++j) s[j] = lower[j] + r.uniform() * span[j];
        hit.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const double* fi = f.row(static_cast<Eigen::Index>(i)).data();
            bool dom = true;
            for (Eigen::Index j = 0; j < m && dom; ++j) dom = fi[j] <= s[j];
            if (dom) {
                hit.push_back(i);
                if (hit.size() > k) break;
            }
        }
        const std::size_t q = hit.size();
        if (q == 0 || q > k) continue;
        const double share = alpha[q] / static_cast<double>(q);
        for (std::size_t i : hit) fit[i] += share;
    }
    const double scale = volume / static_cast<double>(samples);
    for (auto& v : fit) v *= scale;
    return fit;
}

RowVector hype_reference(const Matrix& f) {
    RowVector nadir = f.colwise().maxCoeff();
    for (Eigen::Index j = 0; j < nadir.size(); ++j) {
        nadir[j] = nadir[j] > 0 ? 1.1 * nadir[j] : nadir[j] + 0.1 * std::max(std::abs(nadir[j]), 1.0);
    }
    return nadir;
}

std::vector<std::size_t> hype_select(const Matrix& f, std::size_t n, std::size_t samples, Rng& r) {
    const auto fronts = non_dominated_sort(f);
    const RowVector ref = hype_reference(f);
    std::vector<std::size_t> chosen;
    for (const Front& front : fronts) {
        if (chosen.size() >= n) break;
        if (chosen.size() + front.size() <= n) {
            chosen.insert(chosen.end(), front.begin(), front.end());
            continue;
        }
        std::vector<std::size_t> last = front;
        const std::size_t need = n - chosen.size();
        while (last.size() > need) {
            const auto fit = hype_fitness(take_rows(f, last), ref, last.size() - need, samples, r);
            const auto worst = static_cast<std::size_t>(std::min_element(fit.begin(), fit.end()) - fit.begin());
            last.erase(last.begin() + static_cast<std::ptrdiff_t>(worst));
        }
        chosen.insert(chosen.end(), last.begin(), last.end());
    }
    return chosen;
}

HypeState hype_init(Population pop, std::size_t samples, const Variation& v) {
    HypeState s;
    s.pop = std::move(pop);
    s.samples = samples;
    s.variation = v;
    return s;
}

std::size_t hype_step(HypeState& s, const Problem& p, Backend& backend, Rng& r) {
    const std::size_t n = s.pop.size();
    const auto fit = hype_fitness(s.pop.f, hype_reference(s.pop.f), n, s.samples, r);
    std::vector<double> key(n);
    for (std::size_t i = 0; i < n; ++i) key[i] = -fit[i];
    const auto mates = binary_tournament(key, n, r);
    const Matrix kids = sbx_pm_offspring(s.pop.x, mates, n, s.variation.sbx, s.variation.pm, p.bounds(), r);
    const Population off = evaluate_offspring(kids, s.pop, p, backend);
    const Population pool = merge(s.pop, off);
    s.pop = take(pool, hype_select(pool.f, n, s.samples, r));
    return n;
}

} // namespace evobench
