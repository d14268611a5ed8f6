#pragma once

#include <stdexcept>
#include <vector>

#include "chainavail/mugf.hpp"

namespace chainavail {

struct Configuration {
    std::vector<int> replicas;

    bool operator==(const Configuration&) const = default;
};

// Per-replica deployment cost per tier; empty means unit cost everywhere.
struct CostModel {
    std::vector<double> per_tier_cost;

    double tier_cost(std::size_t m) const {
        return per_tier_cost.empty() ? 1.0 : per_tier_cost.at(m);
    }
};

struct LedgerEntry {
    Configuration config;
    double cost = 0.0;
    double availability = 0.0;        // lower bound when pruning is active
    double availability_upper = 0.0;  // upper bound (== availability if exact)
};

struct OptimizationLedger {
    std::vector<LedgerEntry> entries;       // every evaluated configuration
    std::vector<Configuration> optima;      // argmin set, lexicographic order
    double target = 0.0;
    int max_replicas = 0;
    double best_availability = 0.0;         // best achieved over the box
};

// No configuration in the search box met the availability target; the full
// ledger (including the best achieved availability) rides along so callers
// can report or relax.
struct EmptyFeasibleSetError : std::runtime_error {
    EmptyFeasibleSetError(const std::string& msg, OptimizationLedger lg)
        : std::runtime_error(msg), ledger(std::move(lg)) {}
    OptimizationLedger ledger;
};

double configuration_cost(const Configuration& cfg, const CostModel& costs);

// Instantiate the template's tiers with cfg's replica counts and evaluate
// steady-state availability exactly.
double evaluate_configuration(const ChainSpec& chain_template, const Configuration& cfg,
                              const std::vector<double>& thresholds);

// Exhaustive enumeration over {1..max_replicas}^M with per-(tier, L) MUGF
// memoization. Configurations are evaluated through the pooled availability
// engine with a pruning floor; a configuration whose availability bracket
// straddles the target is re-evaluated exactly, so feasibility decisions
// match an exact evaluation.
OptimizationLedger optimize(const ChainSpec& chain_template,
                            const std::vector<double>& thresholds, double target,
                            int max_replicas, const CostModel& costs = {},
                            double prune_threshold = 1e-18);

}  // namespace chainavail
