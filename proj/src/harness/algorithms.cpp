#include "evobench/algorithms.hpp"

#include "evobench/moea.hpp"
#include "evobench/soea.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

namespace evobench {

namespace {

struct AlgoName {
    AlgoId id;
    std::string_view name;
    bool multi;
};

constexpr std::array<AlgoName, 16> kAlgos{{
    {AlgoId::Pso, "pso", false},
    {AlgoId::Cso, "cso", false},
    {AlgoId::De, "de", false},
    {AlgoId::Sade, "sade", false},
    {AlgoId::Cmaes, "cmaes", false},
    {AlgoId::IpopCmaes, "ipop-cmaes", false},
    {AlgoId::GaSbxPm, "ga-sbx-pm", false},
    {AlgoId::GaUrGm, "ga-ur-gm", false},
    {AlgoId::Nsga2, "nsga2", true},
    {AlgoId::Nsga3, "nsga3", true},
    {AlgoId::Rvea, "rvea", true},
    {AlgoId::Moead, "moead", true},
    {AlgoId::Hype, "hype", true},
    {AlgoId::Lmocso, "lmocso", true},
    {AlgoId::Spea2, "spea2", true},
    {AlgoId::Ibea, "ibea", true},
}};

const AlgoName& entry(AlgoId id) {
    for (const auto& a : kAlgos) {
        if (a.id == id) return a;
    }
    throw UnknownId("unknown algorithm id");
}

double number(const Config& c, const std::string& key) {
    const std::string& text = c.at(key);
    double v = 0;
    const auto* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, v);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ContractViolation(fmt::format("config value for '{}' is not a number: '{}'", key, text));
    }
    return v;
}

std::size_t count(const Config& c, const std::string& key) {
    const double v = number(c, key);
    if (v < 0 || v != std::floor(v)) {
        throw ContractViolation(fmt::format("config value for '{}' must be a non-negative integer", key));
    }
    return static_cast<std::size_t>(v);
}

Config variation_defaults() {
    return {{"eta_c", "20"}, {"eta_m", "20"}, {"pc", "1"}, {"pm", "1/D"}};
}

double pm_value(const Config& c) {
    return c.at("pm") == "1/D" ? -1.0 : number(c, "pm");
}

Variation variation_of(const Config& c) {
    Variation v;
    v.sbx = SbxParams{number(c, "eta_c"), number(c, "pc")};
    v.pm = PolynomialMutationParams{number(c, "eta_m"), pm_value(c)};
    return v;
}

double sigma0_for(const Problem& p, double fraction) {
    return fraction * p.bounds().range().maxCoeff();
}

// ---------------------------------------------------------------------------

class PsoAlgo final : public Algorithm {
public:
    PsoAlgo(const Problem& p, std::size_t n, Config c) : p_(p), n_(n) { config_ = std::move(c); }
    AlgoId id() const override { return AlgoId::Pso; }
    std::size_t initialize(Backend& b, Rng& r) override {
        pop_ = initial_population(p_, n_, b, r);
        s_ = pso_init(pop_, PsoParams{number(config_, "w"), number(config_, "c1"), number(config_, "c2"),
                                      number(config_, "vmax_fraction")});
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return pso_step(s_, pop_, p_, b, r); }
    const Population& population() const override { return pop_; }

private:
    const Problem& p_;
    std::size_t n_;
    Population pop_;
    PsoState s_;
};

class CsoAlgo final : public Algorithm {
public:
    CsoAlgo(const Problem& p, std::size_t n, Config c) : p_(p), n_(n) { config_ = std::move(c); }
    AlgoId id() const override { return AlgoId::Cso; }
    std::size_t initialize(Backend& b, Rng& r) override {
        pop_ = initial_population(p_, n_, b, r);
        s_ = cso_init(pop_, number(config_, "phi"));
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return cso_step(s_, pop_, p_, b, r); }
    const Population& population() const override { return pop_; }

private:
    const Problem& p_;
    std::size_t n_;
    Population pop_;
    CsoState s_;
};

class DeAlgo final : public Algorithm {
public:
    DeAlgo(const Problem& p, std::size_t n, Config c) : p_(p), n_(n) {
        config_ = std::move(c);
        s_ = DeState{number(config_, "F"), number(config_, "CR")};
        if (n < 4) throw InsufficientPopulation("DE needs a population of at least 4");
    }
    AlgoId id() const override { return AlgoId::De; }
    std::size_t initialize(Backend& b, Rng& r) override {
        pop_ = initial_population(p_, n_, b, r);
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return de_step(s_, pop_, p_, b, r); }
    const Population& population() const override { return pop_; }

private:
    const Problem& p_;
    std::size_t n_;
    Population pop_;
    DeState s_;
};

class SadeAlgo final : public Algorithm {
public:
    SadeAlgo(const Problem& p, std::size_t n, Config c) : p_(p), n_(n) {
        config_ = std::move(c);
        s_.learning_period = count(config_, "learning_period");
        s_.epsilon = number(config_, "epsilon");
        s_.differential_vectors = number(config_, "differential_vectors");
        if (n < 6) throw InsufficientPopulation("SaDE needs a population of at least 6");
    }
    AlgoId id() const override { return AlgoId::Sade; }
    std::size_t initialize(Backend& b, Rng& r) override {
        pop_ = initial_population(p_, n_, b, r);
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return sade_step(s_, pop_, p_, b, r); }
    const Population& population() const override { return pop_; }

private:
    const Problem& p_;
    std::size_t n_;
    Population pop_;
    SadeState s_;
};

class GaAlgo final : public Algorithm {
public:
    GaAlgo(AlgoId id, const Problem& p, std::size_t n, Config c) : id_(id), p_(p), n_(n) {
        config_ = std::move(c);
        cfg_ = id == AlgoId::GaSbxPm ? GaConfig::sbx_pm() : GaConfig::ur_gm();
        cfg_.pc = number(config_, "pc");
        cfg_.pm = pm_value(config_);
        if (id == AlgoId::GaSbxPm) {
            cfg_.eta_c = number(config_, "eta_c");
            cfg_.eta_m = number(config_, "eta_m");
        } else {
            cfg_.sigma_fraction = number(config_, "sigma_fraction");
        }
    }
    AlgoId id() const override { return id_; }
    std::size_t initialize(Backend& b, Rng& r) override {
        pop_ = initial_population(p_, n_, b, r);
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return ga_step(cfg_, pop_, p_, b, r); }
    const Population& population() const override { return pop_; }

private:
    AlgoId id_;
    const Problem& p_;
    std::size_t n_;
    GaConfig cfg_;
    Population pop_;
};

class CmaAlgo final : public Algorithm {
public:
    CmaAlgo(const Problem& p, std::size_t n, Config c) : p_(p), n_(n) {
        config_ = std::move(c);
        if (n < 2) throw InsufficientPopulation("CMA-ES needs lambda >= 2");
    }
    AlgoId id() const override { return AlgoId::Cmaes; }
    std::size_t initialize(Backend& b, Rng& r) override {
        pop_ = initial_population(p_, n_, b, r);
        s_ = cma_init(p_.bounds().midpoint(), sigma0_for(p_, number(config_, "sigma_fraction")), n_,
                      number(config_, "c_m"));
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return cmaes_step(s_, pop_, p_, b, r); }
    const Population& population() const override { return pop_; }

private:
    const Problem& p_;
    std::size_t n_;
    Population pop_;
    CmaState s_;
};

class IpopAlgo final : public Algorithm {
public:
    IpopAlgo(const Problem& p, std::size_t n, Config c) : p_(p), n_(n) {
        config_ = std::move(c);
        if (n < 2) throw InsufficientPopulation("IPOP-CMA-ES needs lambda >= 2");
    }
    AlgoId id() const override { return AlgoId::IpopCmaes; }
    std::size_t initialize(Backend& b, Rng& r) override {
        pop_ = initial_population(p_, n_, b, r);
        s_ = ipop_init(p_.bounds().midpoint(), sigma0_for(p_, number(config_, "sigma_fraction")), n_);
        s_.cma.c_m = number(config_, "c_m");
        s_.stagnation_threshold = count(config_, "stagnation");
        s_.tol_fun = number(config_, "tol_fun");
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return ipop_step(s_, pop_, p_, b, r); }
    const Population& population() const override { return pop_; }
    std::size_t restarts() const override { return s_.restarts; }

private:
    const Problem& p_;
    std::size_t n_;
    Population pop_;
    IpopState s_;
};

// Multi-objective wrappers share the shape: init from a uniform population,
// then step a state that owns it.
template <typename State, AlgoId Id>
class MoeaAlgo : public Algorithm {
public:
    MoeaAlgo(const Problem& p, std::size_t n, Config c) : p_(p), n_(n) { config_ = std::move(c); }
    AlgoId id() const override { return Id; }
    const Population& population() const override { return s_.pop; }

protected:
    const Problem& p_;
    std::size_t n_;
    State s_;
};

class Nsga2Algo final : public MoeaAlgo<Nsga2State, AlgoId::Nsga2> {
public:
    using MoeaAlgo::MoeaAlgo;
    std::size_t initialize(Backend& b, Rng& r) override {
        s_ = nsga2_init(initial_population(p_, n_, b, r), variation_of(config_));
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return nsga2_step(s_, p_, b, r); }
};

class Nsga3Algo final : public MoeaAlgo<Nsga3State, AlgoId::Nsga3> {
public:
    using MoeaAlgo::MoeaAlgo;
    std::size_t initialize(Backend& b, Rng& r) override {
        s_ = nsga3_init(initial_population(p_, n_, b, r), p_.n_obj(), variation_of(config_));
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return nsga3_step(s_, p_, b, r); }
};

class Spea2Algo final : public MoeaAlgo<Spea2State, AlgoId::Spea2> {
public:
    using MoeaAlgo::MoeaAlgo;
    std::size_t initialize(Backend& b, Rng& r) override {
        s_ = spea2_init(initial_population(p_, n_, b, r), variation_of(config_));
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return spea2_step(s_, p_, b, r); }
};

class IbeaAlgo final : public MoeaAlgo<IbeaState, AlgoId::Ibea> {
public:
    IbeaAlgo(const Problem& p, std::size_t n, Config c) : MoeaAlgo(p, n, std::move(c)) {
        const std::string& ind = config_.at("indicator");
        if (ind == "eps") {
            indicator_ = IbeaIndicator::AdditiveEpsilon;
        } else if (ind == "hv") {
            indicator_ = IbeaIndicator::Hypervolume;
        } else {
            throw ContractViolation(fmt::format("ibea indicator must be 'eps' or 'hv', got '{}'", ind));
        }
    }
    std::size_t initialize(Backend& b, Rng& r) override {
        s_ = ibea_init(initial_population(p_, n_, b, r), number(config_, "kappa"), indicator_, variation_of(config_));
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return ibea_step(s_, p_, b, r); }

private:
    IbeaIndicator indicator_ = IbeaIndicator::AdditiveEpsilon;
};

class HypeAlgo final : public MoeaAlgo<HypeState, AlgoId::Hype> {
public:
    using MoeaAlgo::MoeaAlgo;
    std::size_t initialize(Backend& b, Rng& r) override {
        s_ = hype_init(initial_population(p_, n_, b, r), count(config_, "samples"), variation_of(config_));
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return hype_step(s_, p_, b, r); }
};

class MoeadAlgo final : public MoeaAlgo<MoeadState, AlgoId::Moead> {
public:
    using MoeaAlgo::MoeaAlgo;
    // The population is the lattice size K <= N, so only K rows are sampled.
    std::size_t initialize(Backend& b, Rng& r) override {
        const std::size_t k = moead_lattice_size(p_.n_obj(), n_);
        MoeadState s = moead_init(initial_population(p_, k, b, r), p_.n_obj(), variation_of(config_));
        s.T = std::min(count(config_, "T"), k);
        s.weights.neighbors = neighbor_table(s.weights.v, s.T);
        s.n_r = count(config_, "n_r");
        s.theta = number(config_, "theta");
        s_ = std::move(s);
        return k;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext&) override { return moead_step(s_, p_, b, r); }
};

class RveaAlgo final : public MoeaAlgo<RveaState, AlgoId::Rvea> {
public:
    using MoeaAlgo::MoeaAlgo;
    std::size_t initialize(Backend& b, Rng& r) override {
        s_ = rvea_init(initial_population(p_, n_, b, r), p_.n_obj(), variation_of(config_));
        s_.alpha = number(config_, "alpha");
        s_.fr = number(config_, "fr");
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext& ctx) override {
        return rvea_step(s_, ctx.progress, p_, b, r);
    }
};

class LmocsoAlgo final : public Algorithm {
public:
    LmocsoAlgo(const Problem& p, std::size_t n, Config c) : p_(p), n_(n) { config_ = std::move(c); }
    AlgoId id() const override { return AlgoId::Lmocso; }
    std::size_t initialize(Backend& b, Rng& r) override {
        s_ = lmocso_init(initial_population(p_, n_, b, r), p_.n_obj(),
                         PolynomialMutationParams{number(config_, "eta_m"), pm_value(config_)});
        s_.theta = number(config_, "theta");
        s_.alpha = number(config_, "alpha");
        return n_;
    }
    std::size_t step(Backend& b, Rng& r, const StepContext& ctx) override {
        return lmocso_step(s_, ctx.progress, p_, b, r);
    }
    const Population& population() const override { return s_.archive; }

private:
    const Problem& p_;
    std::size_t n_;
    LmocsoState s_;
};

} // namespace

std::string_view to_string(AlgoId id) { return entry(id).name; }

AlgoId parse_algo_id(std::string_view name) {
    for (const auto& a : kAlgos) {
        if (a.name == name) return a.id;
    }
    throw UnknownId(fmt::format("unknown algorithm '{}'", name));
}

const std::vector<AlgoId>& all_algo_ids() {
    static const std::vector<AlgoId> ids = [] {
        std::vector<AlgoId> v;
        for (const auto& a : kAlgos) v.push_back(a.id);
        return v;
    }();
    return ids;
}

bool is_multi_objective(AlgoId id) { return entry(id).multi; }

Config default_config(AlgoId id) {
    switch (id) {
    case AlgoId::Pso:
        return {{"w", "0.6"}, {"c1", "2.5"}, {"c2", "0.8"}, {"vmax_fraction", "0.5"}};
    case AlgoId::Cso:
        return {{"phi", "0"}};
    case AlgoId::De:
        return {{"F", "0.5"}, {"CR", "0.9"}};
    case AlgoId::Sade:
        return {{"learning_period", "50"}, {"epsilon", "0.01"}, {"differential_vectors", "9"}};
    case AlgoId::Cmaes:
        return {{"c_m", "1"}, {"sigma_fraction", "0.3"}};
    case AlgoId::IpopCmaes:
        return {{"c_m", "1"}, {"sigma_fraction", "0.3"}, {"stagnation", "50"}, {"tol_fun", "1e-12"}};
    case AlgoId::GaSbxPm:
        return variation_defaults();
    case AlgoId::GaUrGm:
        return {{"pc", "1"}, {"pm", "1/D"}, {"sigma_fraction", "0.1"}};
    case AlgoId::Nsga2:
    case AlgoId::Nsga3:
    case AlgoId::Spea2:
        return variation_defaults();
    case AlgoId::Rvea: {
        auto c = variation_defaults();
        c["alpha"] = "2";
        c["fr"] = "0.1";
        return c;
    }
    case AlgoId::Moead: {
        auto c = variation_defaults();
        c["T"] = "20";
        c["n_r"] = "2";
        c["theta"] = "5";
        return c;
    }
    case AlgoId::Hype: {
        auto c = variation_defaults();
        c["samples"] = "10000";
        return c;
    }
    case AlgoId::Ibea: {
        auto c = variation_defaults();
        c["kappa"] = "0.05";
        c["indicator"] = "eps";
        return c;
    }
    case AlgoId::Lmocso:
        return {{"eta_m", "20"}, {"pm", "1/D"}, {"theta", "5"}, {"alpha", "2"}};
    }
    throw UnknownId("unknown algorithm id");
}

Config resolve_config(AlgoId id, const Config& overrides) {
    Config c = default_config(id);
    for (const auto& [k, v] : overrides) {
        auto it = c.find(k);
        if (it == c.end()) {
            throw ContractViolation(fmt::format("unknown config key '{}' for {}", k, to_string(id)));
        }
        it->second = v;
    }
    for (const auto& [k, v] : c) {
        if (k == "indicator" || (k == "pm" && v == "1/D")) continue;
        number(c, k);
    }
    return c;
}

std::string config_hash(AlgoId id, const Config& resolved) {
    std::string canon(to_string(id));
    for (const auto& [k, v] : resolved) canon += fmt::format(";{}={}", k, v);
    return hex64(fnv1a(canon));
}

std::unique_ptr<Algorithm> make_algorithm(AlgoId id, const Problem& p, std::size_t pop_size, const Config& overrides) {
    if (is_multi_objective(id) != (p.n_obj() >= 2)) {
        throw IncompatibleArity(fmt::format("{} cannot run on {} ({} objective{})", to_string(id), p.name(), p.n_obj(),
                                            p.n_obj() == 1 ? "" : "s"));
    }
    if (pop_size < 1) throw ContractViolation("population size must be >= 1");
    Config c = resolve_config(id, overrides);
    switch (id) {
    case AlgoId::Pso: return std::make_unique<PsoAlgo>(p, pop_size, std::move(c));
    case AlgoId::Cso: return std::make_unique<CsoAlgo>(p, pop_size, std::move(c));
    case AlgoId::De: return std::make_unique<DeAlgo>(p, pop_size, std::move(c));
    case AlgoId::Sade: return std::make_unique<SadeAlgo>(p, pop_size, std::move(c));
    case AlgoId::Cmaes: return std::make_unique<CmaAlgo>(p, pop_size, std::move(c));
    case AlgoId::IpopCmaes: return std::make_unique<IpopAlgo>(p, pop_size, std::move(c));
    case AlgoId::GaSbxPm:
    case AlgoId::GaUrGm: return std::make_unique<GaAlgo>(id, p, pop_size, std::move(c));
    case AlgoId::Nsga2: return std::make_unique<Nsga2Algo>(p, pop_size, std::move(c));
    case AlgoId::Nsga3: return std::make_unique<Nsga3Algo>(p, pop_size, std::move(c));
    case AlgoId::Rvea: return std::make_unique<RveaAlgo>(p, pop_size, std::move(c));
    case AlgoId::Moead: return std::make_unique<MoeadAlgo>(p, pop_size, std::move(c));
    case AlgoId::Hype: return std::make_unique<HypeAlgo>(p, pop_size, std::move(c));
    case AlgoId::Lmocso: return std::make_unique<LmocsoAlgo>(p, pop_size, std::move(c));
    case AlgoId::Spea2: return std::make_unique<Spea2Algo>(p, pop_size, std::move(c));
    case AlgoId::Ibea: return std::make_unique<IbeaAlgo>(p, pop_size, std::move(c));
    }
    throw UnknownId("unknown algorithm id");
}

} // namespace evobench
