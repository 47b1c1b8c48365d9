#pragma once

// Uniform driver interface over the sixteen algorithms, plus their default
// configurations.

#include "evobench/backend.hpp"
#include "evobench/core.hpp"
#include "evobench/problems.hpp"

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace evobench {

enum class AlgoId {
    Pso,
    Cso,
    De,
    Sade,
    Cmaes,
    IpopCmaes,
    GaSbxPm,
    GaUrGm,
    Nsga2,
    Nsga3,
    Rvea,
    Moead,
    Hype,
    Lmocso,
    Spea2,
    Ibea,
};

std::string_view to_string(AlgoId id);
AlgoId parse_algo_id(std::string_view name);
const std::vector<AlgoId>& all_algo_ids();
bool is_multi_objective(AlgoId id);

/// Keys and values are kept as text so they echo verbatim into run metadata.
using Config = std::map<std::string, std::string>;

/// Defaults for an algorithm; every accepted override key appears here.
Config default_config(AlgoId id);
/// Defaults with overrides applied; unknown keys or non-numeric values where a
/// number is expected raise ContractViolation.
Config resolve_config(AlgoId id, const Config& overrides);
/// Stable hash of the algorithm id and its resolved configuration.
std::string config_hash(AlgoId id, const Config& resolved);

struct StepContext {
    std::size_t generation = 0; // generations completed before this step
    double progress = 0.0;      // fraction of the budget consumed, in [0, 1]
};

class Algorithm {
public:
    virtual ~Algorithm() = default;

    virtual AlgoId id() const = 0;
    /// Builds and evaluates the initial population; returns FEs spent.
    virtual std::size_t initialize(Backend& backend, Rng& r) = 0;
    /// One generation; returns FEs spent.
    virtual std::size_t step(Backend& backend, Rng& r, const StepContext& ctx) = 0;
    /// The set quality is measured on (the archive for archive-based methods).
    virtual const Population& population() const = 0;
    /// Number of IPOP restarts so far; 0 for everything else.
    virtual std::size_t restarts() const { return 0; }

    const Config& config() const noexcept { return config_; }

protected:
    Config config_;
};

/// Throws IncompatibleArity when the algorithm family does not match the
/// problem's objective count.
std::unique_ptr<Algorithm> make_algorithm(AlgoId id, const Problem& p, std::size_t pop_size,
                                          const Config& overrides = {});

} // namespace evobench
