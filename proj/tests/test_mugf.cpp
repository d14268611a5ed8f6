#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <set>

#include "chainavail/mugf.hpp"
#include "oracles.hpp"

using namespace chainavail;

namespace {

double class_sum(const std::vector<CapacityClass>& classes) {
    double s = 0.0;
    for (const auto& [p, c] : classes) s += p;
    return s;
}

std::vector<std::uint64_t> bits_of(const std::vector<double>& v) {
    std::vector<std::uint64_t> out(v.size());
    std::memcpy(out.data(), v.data(), v.size() * sizeof(double));
    return out;
}

bool same_terms(const Mugf& a, const Mugf& b) {
    if (a.terms.size() != b.terms.size()) return false;
    for (std::size_t t = 0; t < a.terms.size(); ++t) {
        if (a.terms[t].prob != b.terms[t].prob) return false;
        if (bits_of(a.terms[t].delays) != bits_of(b.terms[t].delays)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("capacity distribution of the case-study CNF has twelve classes") {
    CnfSpec cnf = oracles::cims_chain(1, {1, 1, 1, 1}).tiers.front().cnf;
    const auto classes = cnf_capacity_distribution(cnf);
    CHECK(classes.size() == 12);
    CHECK(class_sum(classes) == doctest::Approx(1.0).epsilon(1e-12));

    // Descending lexicographic capacity order, fully-working first.
    CHECK(classes.front().second == std::vector<int>{2, 3});
    CHECK(classes.back().second == std::vector<int>{0, 0});
    for (std::size_t i = 0; i + 1 < classes.size(); ++i)
        CHECK(std::lexicographical_compare(classes[i + 1].second.begin(),
                                           classes[i + 1].second.end(),
                                           classes[i].second.begin(),
                                           classes[i].second.end()));

    // The zero class absorbs both layer-failure states.
    const StateSpace space = enumerate_states(cnf);
    const auto dist = solve_steady_state(build_generator(cnf, space));
    CnfState zero;
    zero.eta = {0, 0};
    const double expected = dist.p[space.index_of(zero, cnf)] +
                            dist.p[space.docker_failed_index()] +
                            dist.p[space.infra_failed_index()];
    CHECK(classes.back().first == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("gamma scales every capacity vector") {
    CnfSpec cnf = oracles::scaled_cnf();
    cnf.gamma = 1;
    const auto base = cnf_capacity_distribution(cnf);
    cnf.gamma = 4;
    const auto scaled = cnf_capacity_distribution(cnf);
    REQUIRE(base.size() == scaled.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        CHECK(scaled[i].first == doctest::Approx(base[i].first).epsilon(1e-14));
        for (std::size_t t = 0; t < base[i].second.size(); ++t)
            CHECK(scaled[i].second[t] == 4 * base[i].second[t]);
    }
}

TEST_CASE("tier capacity distribution convolves replicas") {
    TierSpec tier;
    tier.cnf = oracles::scaled_cnf();
    tier.replicas = 1;
    tier.service = {0.05, 0.7};
    const auto base = cnf_capacity_distribution(tier.cnf);
    CHECK(tier_capacity_distribution(tier) == base);

    tier.replicas = 2;
    const auto twofold = tier_capacity_distribution(tier);
    CHECK(class_sum(twofold) == doctest::Approx(1.0).epsilon(1e-12));

    std::map<std::vector<int>, double> manual;
    for (const auto& [p1, c1] : base)
        for (const auto& [p2, c2] : base) {
            std::vector<int> s(c1.size());
            for (std::size_t i = 0; i < s.size(); ++i) s[i] = c1[i] + c2[i];
            manual[s] += p1 * p2;
        }
    REQUIRE(twofold.size() == manual.size());
    for (const auto& [p, c] : twofold)
        CHECK(p == doctest::Approx(manual.at(c)).epsilon(1e-13));
}

TEST_CASE("tier MUGF maps the fully-working class through the delay model") {
    ChainSpec chain = oracles::cims_chain(2, {2, 1, 3, 2});
    for (const auto& tier : chain.tiers) {
        const Mugf m = tier_mugf(tier);
        CHECK(m.tenant_count == 2);
        CHECK(m.coefficient_sum() == doctest::Approx(1.0).epsilon(1e-12));

        std::vector<DelayValue> expected;
        for (const auto& tenant : tier.cnf.tenants)
            expected.push_back(kingman_mean_delay(
                tenant.arrival_rate, tier.service,
                static_cast<long long>(tier.cnf.gamma) * tenant.n * tier.replicas,
                tenant.cv_arrivals));
        // The fully-working class has the (componentwise) smallest delays, so
        // it is some term; find it bitwise.
        bool found = false;
        for (const auto& term : m.terms)
            if (bits_of(term.delays) == bits_of(expected)) found = true;
        CHECK(found);

        std::set<std::vector<std::uint64_t>> keys;
        for (const auto& term : m.terms) REQUIRE(keys.insert(bits_of(term.delays)).second);
    }
}

TEST_CASE("chain MUGF coefficients sum to one and pruning is accounted") {
    const ChainSpec chain = oracles::cims_chain(2, {2, 1, 3, 2});
    const Mugf exact = chain_mugf(chain);
    CHECK(exact.dropped == 0.0);
    CHECK(exact.coefficient_sum() == doctest::Approx(1.0).epsilon(1e-9));

    const Mugf pruned = chain_mugf(chain, 1e-10);
    CHECK(pruned.dropped > 0.0);
    CHECK(pruned.terms.size() < exact.terms.size());
    CHECK(pruned.coefficient_sum() + pruned.dropped ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("chain MUGF is invariant under tier permutation") {
    ChainSpec chain = oracles::scaled_chain();
    const Mugf forward = chain_mugf(chain);
    std::reverse(chain.tiers.begin(), chain.tiers.end());
    const Mugf backward = chain_mugf(chain);
    CHECK(same_terms(forward, backward));

    ChainSpec cims = oracles::cims_chain(2, {2, 1, 3, 2});
    const Mugf a = chain_mugf(cims, 1e-15);
    std::rotate(cims.tiers.begin(), cims.tiers.begin() + 2, cims.tiers.end());
    const Mugf b = chain_mugf(cims, 1e-15);
    CHECK(same_terms(a, b));
    CHECK(a.dropped == b.dropped);
}

TEST_CASE("single tier with a generous threshold isolates the zero-capacity mass") {
    ChainSpec chain;
    TierSpec tier;
    tier.name = "solo";
    tier.cnf = oracles::cims_chain(2, {1, 1, 1, 1}).tiers[1].cnf;
    tier.replicas = 1;
    tier.service = {7.2e-3, 0.9826};
    chain.tiers = {tier};
    chain.thresholds = {1e6, 1e6};

    const Mugf m = chain_mugf(chain);
    const double avail = availability(m, chain.thresholds);

    const StateSpace space = enumerate_states(tier.cnf);
    const auto dist = solve_steady_state(build_generator(tier.cnf, space));
    double nonzero = 0.0;
    for (std::size_t s = 0; s < space.software_count(); ++s) {
        const auto& eta = space.states[s].eta;
        if (eta[0] > 0 && eta[1] > 0) nonzero += dist.p[s];
    }
    CHECK(avail == doctest::Approx(nonzero).epsilon(1e-12));
}

TEST_CASE("pipeline matches the joint-state-space enumeration") {
    // Two tiers of the case-study CNF, two replicas each: 14^4 joint states.
    ChainSpec chain;
    const ChainSpec cims = oracles::cims_chain(2, {1, 1, 1, 1});
    TierSpec a = cims.tiers[1];  // S-CSCF service profile
    a.replicas = 2;
    TierSpec b = cims.tiers[3];  // HSS service profile
    b.replicas = 2;
    chain.tiers = {a, b};
    chain.thresholds = {0.02, 0.02};

    const oracles::JointOracleResult ref = oracles::joint_enumeration(chain);
    const Mugf m = chain_mugf(chain);
    CHECK(availability(m, chain.thresholds) ==
          doctest::Approx(ref.availability).epsilon(1e-12));
    CHECK(m.terms.front().prob ==
          doctest::Approx(ref.fully_working_probability).epsilon(1e-12));

    const AvailabilityBracket pooled = chain_availability(
        {tier_mugf(chain.tiers[0]), tier_mugf(chain.tiers[1])}, chain.thresholds);
    CHECK(pooled.lower == doctest::Approx(ref.availability).epsilon(1e-12));
    CHECK(pooled.dropped == 0.0);
}

TEST_CASE("pooled evaluation equals the materialized polynomial") {
    for (const ChainSpec& chain :
         {oracles::scaled_chain(), oracles::cims_chain(2, {2, 1, 3, 2})}) {
        std::vector<Mugf> tiers;
        for (const auto& tier : chain.tiers) tiers.push_back(tier_mugf(tier));

        const Mugf m = chain_mugf(chain);
        const double direct = availability(m, chain.thresholds);
        const AvailabilityBracket pooled = chain_availability(tiers, chain.thresholds);
        CHECK(pooled.lower == doctest::Approx(direct).epsilon(1e-13));

        const AvailabilityBracket coarse =
            chain_availability(tiers, chain.thresholds, 1e-10);
        CHECK(coarse.lower <= direct + 1e-15);
        CHECK(coarse.upper >= direct - 1e-15);
        CHECK(coarse.upper - coarse.lower == doctest::Approx(coarse.dropped));
    }
}

TEST_CASE("availability bracket annotates the pruned mass") {
    const ChainSpec chain = oracles::cims_chain(2, {2, 1, 3, 2});
    const Mugf pruned = chain_mugf(chain, 1e-12);
    const AvailabilityBracket b = availability_bracket(pruned, chain.thresholds);
    CHECK(b.dropped == pruned.dropped);
    CHECK(b.upper == b.lower + b.dropped);
    const double exact = availability(chain_mugf(chain), chain.thresholds);
    CHECK(b.lower <= exact + 1e-15);
    CHECK(b.upper >= exact - 1e-15);
}

TEST_CASE("unmerged joint state count is the replica-power product") {
    const ChainSpec chain = oracles::cims_chain(2, {2, 1, 3, 2});
    CHECK(unmerged_joint_state_count(chain) == doctest::Approx(1475789056.0));
}

TEST_CASE("tiers must share tenant workloads") {
    ChainSpec chain = oracles::scaled_chain();
    chain.tiers[1].cnf.tenants[0].arrival_rate *= 2.0;
    CHECK_THROWS_AS(chain.validate(), ModelError);

    chain = oracles::scaled_chain();
    chain.thresholds = {0.5};
    CHECK_THROWS_AS(chain.validate(), ModelError);
}
