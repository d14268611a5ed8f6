#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "chainavail/optimize.hpp"
#include "oracles.hpp"

using namespace chainavail;

namespace {

struct BruteResult {
    bool feasible = false;
    double best_cost = 0.0;
    std::vector<Configuration> optima;
    std::vector<std::pair<Configuration, double>> table;
};

BruteResult brute_force(const ChainSpec& tmpl, const std::vector<double>& thresholds,
                        double target, int r, const CostModel& costs) {
    BruteResult res;
    const std::size_t m = tmpl.tiers.size();
    Configuration cfg;
    cfg.replicas.assign(m, 1);
    while (true) {
        const double avail = evaluate_configuration(tmpl, cfg, thresholds);
        res.table.emplace_back(cfg, avail);
        if (avail >= target) {
            const double cost = configuration_cost(cfg, costs);
            if (!res.feasible || cost < res.best_cost) {
                res.feasible = true;
                res.best_cost = cost;
                res.optima = {cfg};
            } else if (cost == res.best_cost) {
                res.optima.push_back(cfg);
            }
        }
        std::size_t d = 0;
        while (d < m && ++cfg.replicas[d] > r) cfg.replicas[d++] = 1;
        if (d == m) break;
    }
    std::sort(res.optima.begin(), res.optima.end(),
              [](const Configuration& a, const Configuration& b) {
                  return a.replicas < b.replicas;
              });
    return res;
}

}  // namespace

TEST_CASE("configuration cost sums per-tier replica costs") {
    Configuration cfg;
    cfg.replicas = {2, 1, 3, 2};
    CHECK(configuration_cost(cfg, {}) == 8.0);
    CostModel weighted;
    weighted.per_tier_cost = {1.0, 2.0, 0.5, 4.0};
    CHECK(configuration_cost(cfg, weighted) == doctest::Approx(2.0 + 2.0 + 1.5 + 8.0));
}

TEST_CASE("evaluate_configuration instantiates the template") {
    const ChainSpec tmpl = oracles::cims_chain(2, {1, 1, 1, 1});
    Configuration cfg;
    cfg.replicas = {2, 1, 3, 2};
    const double direct = evaluate_configuration(tmpl, cfg, tmpl.thresholds);
    const ChainSpec inst = oracles::cims_chain(2, {2, 1, 3, 2});
    CHECK(direct ==
          doctest::Approx(availability(chain_mugf(inst), inst.thresholds)).epsilon(1e-13));
}

TEST_CASE("case-study optimization lands on cost eight with the known argmin set") {
    const ChainSpec tmpl = oracles::cims_chain(2, {1, 1, 1, 1});
    const OptimizationLedger ledger =
        optimize(tmpl, tmpl.thresholds, 1.0 - 1e-5, 4, {});

    REQUIRE(ledger.entries.size() == 256);
    REQUIRE(!ledger.optima.empty());
    for (const auto& opt : ledger.optima)
        CHECK(configuration_cost(opt, {}) == 8.0);

    std::vector<std::vector<int>> got;
    for (const auto& opt : ledger.optima) got.push_back(opt.replicas);
    const std::vector<std::vector<int>> want = {{1, 2, 3, 2}, {2, 1, 3, 2}, {2, 2, 3, 1}};
    CHECK(got == want);

    // Ledger ordering: cost ascending, availability descending within cost.
    for (std::size_t i = 0; i + 1 < ledger.entries.size(); ++i) {
        const auto& a = ledger.entries[i];
        const auto& b = ledger.entries[i + 1];
        const bool ordered =
            a.cost < b.cost ||
            (a.cost == b.cost &&
             (a.availability > b.availability ||
              (a.availability == b.availability && a.config.replicas <= b.config.replicas)));
        REQUIRE(ordered);
    }
}

TEST_CASE("relaxing the target admits the five-replica configuration") {
    const ChainSpec tmpl = oracles::cims_chain(2, {1, 1, 1, 1});
    const OptimizationLedger ledger =
        optimize(tmpl, tmpl.thresholds, 1.0 - 1e-4, 4, {});
    REQUIRE(!ledger.optima.empty());
    CHECK(configuration_cost(ledger.optima.front(), {}) == 5.0);
    CHECK(ledger.optima.front().replicas == std::vector<int>{1, 1, 2, 1});
}

TEST_CASE("an unreachable target raises EmptyFeasibleSetError with the ledger") {
    const ChainSpec tmpl = oracles::cims_chain(2, {1, 1, 1, 1});
    try {
        optimize(tmpl, tmpl.thresholds, 1.0 - 1e-9, 1, {});
        FAIL("expected EmptyFeasibleSetError");
    } catch (const EmptyFeasibleSetError& e) {
        // A single I-CSCF replica is overloaded for tenant 2, so (1,1,1,1)
        // is fully unavailable.
        CHECK(e.ledger.entries.size() == 1);
        CHECK(e.ledger.optima.empty());
        CHECK(e.ledger.best_availability == 0.0);
    }
    try {
        optimize(tmpl, tmpl.thresholds, 1.0 - 1e-9, 2, {});
        FAIL("expected EmptyFeasibleSetError");
    } catch (const EmptyFeasibleSetError& e) {
        CHECK(e.ledger.entries.size() == 16);
        CHECK(e.ledger.best_availability > 0.999);
        CHECK(e.ledger.best_availability < 1.0 - 1e-9);
    }
}

TEST_CASE("pruned sweep decisions match the exact sweep") {
    const ChainSpec tmpl = oracles::scaled_chain();
    const OptimizationLedger pruned = optimize(tmpl, tmpl.thresholds, 0.70, 3, {}, 1e-18);
    const OptimizationLedger exact = optimize(tmpl, tmpl.thresholds, 0.70, 3, {}, 0.0);
    REQUIRE(pruned.optima.size() == exact.optima.size());
    for (std::size_t i = 0; i < pruned.optima.size(); ++i)
        CHECK(pruned.optima[i] == exact.optima[i]);
}

TEST_CASE("optimizer agrees with exhaustive re-evaluation on random templates") {
    std::mt19937_64 rng(20240905);
    int feasible_seen = 0, infeasible_seen = 0;
    for (int trial = 0; trial < 8; ++trial) {
        const ChainSpec tmpl = oracles::random_chain_template(rng);
        const double target = 0.55 + 0.40 * (static_cast<double>(rng() % 1000) / 1000.0);
        const int r = 2 + static_cast<int>(rng() % 2);

        const BruteResult ref = brute_force(tmpl, tmpl.thresholds, target, r, {});
        if (ref.feasible) {
            ++feasible_seen;
            const OptimizationLedger ledger = optimize(tmpl, tmpl.thresholds, target, r, {});
            REQUIRE(ledger.optima.size() == ref.optima.size());
            for (std::size_t i = 0; i < ledger.optima.size(); ++i)
                REQUIRE(ledger.optima[i] == ref.optima[i]);
        } else {
            ++infeasible_seen;
            CHECK_THROWS_AS(optimize(tmpl, tmpl.thresholds, target, r, {}),
                            EmptyFeasibleSetError);
        }

        // Feasibility is upward closed: adding a replica never hurts.
        for (const auto& [cfg, avail] : ref.table) {
            if (avail < target) continue;
            for (std::size_t m = 0; m < cfg.replicas.size(); ++m) {
                Configuration up = cfg;
                if (++up.replicas[m] > r) continue;
                const auto it = std::find_if(
                    ref.table.begin(), ref.table.end(),
                    [&](const auto& row) { return row.first == up; });
                REQUIRE(it != ref.table.end());
                REQUIRE(it->second >= target - 1e-12);
            }
        }
    }
    CHECK(feasible_seen > 0);
}
