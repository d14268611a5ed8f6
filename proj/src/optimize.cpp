#include "chainavail/optimize.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace chainavail {

namespace {

ChainSpec instantiate(const ChainSpec& chain_template, const Configuration& cfg) {
    ChainSpec chain = chain_template;
    for (std::size_t m = 0; m < chain.tiers.size(); ++m)
        chain.tiers[m].replicas = cfg.replicas[m];
    return chain;
}

}  // namespace

double configuration_cost(const Configuration& cfg, const CostModel& costs) {
    double total = 0.0;
    for (std::size_t m = 0; m < cfg.replicas.size(); ++m)
        total += cfg.replicas[m] * costs.tier_cost(m);
    return total;
}

double evaluate_configuration(const ChainSpec& chain_template, const Configuration& cfg,
                              const std::vector<double>& thresholds) {
    if (cfg.replicas.size() != chain_template.tiers.size())
        throw ModelError("evaluate_configuration: replica vector length mismatch");
    const ChainSpec chain = instantiate(chain_template, cfg);
    chain.validate();
    std::vector<Mugf> tiers;
    tiers.reserve(chain.tiers.size());
    for (const auto& tier : chain.tiers) tiers.push_back(tier_mugf(tier));
    return chain_availability(tiers, thresholds, 0.0).lower;
}

OptimizationLedger optimize(const ChainSpec& chain_template,
                            const std::vector<double>& thresholds, double target,
                            int max_replicas, const CostModel& costs,
                            double prune_threshold) {
    if (max_replicas < 1) throw ModelError("optimize: max_replicas must be >= 1");
    if (target <= 0.0 || target >= 1.0)
        throw ModelError("optimize: availability target must lie in (0, 1)");
    const std::size_t m = chain_template.tiers.size();
    if (m == 0) throw ModelError("optimize: empty chain template");

    // Each distinct (tier, replica count) pair is computed once.
    std::map<std::pair<std::size_t, int>, Mugf> memo;
    auto tier_for = [&](std::size_t tier_idx, int replicas) -> const Mugf& {
        auto key = std::make_pair(tier_idx, replicas);
        auto it = memo.find(key);
        if (it == memo.end()) {
            TierSpec tier = chain_template.tiers[tier_idx];
            tier.replicas = replicas;
            it = memo.emplace(key, tier_mugf(tier)).first;
        }
        return it->second;
    };

    OptimizationLedger ledger;
    ledger.target = target;
    ledger.max_replicas = max_replicas;
    ledger.best_availability = 0.0;

    Configuration cfg;
    cfg.replicas.assign(m, 1);
    std::vector<Mugf> tiers(m);
    while (true) {
        for (std::size_t i = 0; i < m; ++i) tiers[i] = tier_for(i, cfg.replicas[i]);
        AvailabilityBracket b = chain_availability(tiers, thresholds, prune_threshold);
        if (b.lower < target && target <= b.upper) {
            // Pruned bracket straddles the target: settle feasibility exactly.
            b = chain_availability(tiers, thresholds, 0.0);
        }
        ledger.entries.push_back(
            {cfg, configuration_cost(cfg, costs), b.lower, b.upper});
        ledger.best_availability = std::max(ledger.best_availability, b.lower);

        std::size_t i = m;
        while (i > 0 && cfg.replicas[i - 1] == max_replicas) {
            cfg.replicas[i - 1] = 1;
            --i;
        }
        if (i == 0) break;
        ++cfg.replicas[i - 1];
    }

    double best_cost = 0.0;
    bool any_feasible = false;
    for (const auto& e : ledger.entries) {
        if (e.availability < target) continue;
        if (!any_feasible || e.cost < best_cost) best_cost = e.cost;
        any_feasible = true;
    }
    if (!any_feasible) {
        std::ostringstream os;
        os << "no configuration in {1.." << max_replicas << "}^" << m
           << " reaches availability " << target << " (best "
           << ledger.best_availability << ")";
        throw EmptyFeasibleSetError(os.str(), std::move(ledger));
    }
    for (const auto& e : ledger.entries)
        if (e.availability >= target && e.cost == best_cost)
            ledger.optima.push_back(e.config);
    std::sort(ledger.optima.begin(), ledger.optima.end(),
              [](const Configuration& a, const Configuration& b) {
                  return a.replicas < b.replicas;
              });

    std::sort(ledger.entries.begin(), ledger.entries.end(),
              [](const LedgerEntry& a, const LedgerEntry& b) {
                  if (a.cost != b.cost) return a.cost < b.cost;
                  if (a.availability != b.availability) return a.availability > b.availability;
                  return a.config.replicas < b.config.replicas;
              });
    return ledger;
}

}  // namespace chainavail
