#pragma once

#include <string>
#include <utility>
#include <vector>

#include "chainavail/model.hpp"
#include "chainavail/queueing.hpp"

namespace chainavail {

// One MUGF term: probability coefficient and per-tenant mean-delay exponents.
struct MugfTerm {
    double prob = 0.0;
    std::vector<DelayValue> delays;
};

// Polynomial of (probability, delay-vector) terms. Terms are kept merged
// (no two share a delay vector) and sorted by descending coefficient, then
// lexicographically by delays.
struct Mugf {
    std::vector<MugfTerm> terms;
    int tenant_count = 0;
    double dropped = 0.0;  // pruned probability mass, 0 unless pruning enabled

    double coefficient_sum() const;
};

// A service-chain tier: L identical CNF replicas behind flow dispersion plus
// the tier's service-time statistics.
struct TierSpec {
    std::string name;
    CnfSpec cnf;
    int replicas = 1;
    ServiceStats service;
};

struct ChainSpec {
    std::vector<TierSpec> tiers;
    std::vector<double> thresholds;  // max tolerated mean delay per tenant, s

    int tenant_count() const;
    void validate() const;
};

// (probability, aggregate per-tenant capacity) classes.
using CapacityClass = std::pair<double, std::vector<int>>;

// Steady-state capacity distribution of a single CNF; states with identical
// capacity vectors are merged (both layer-failure states join the all-failed
// software state in the zero-capacity class).
std::vector<CapacityClass> cnf_capacity_distribution(const CnfSpec& cnf);

// L-fold convolution of the single-CNF capacity distribution: the tier's
// aggregate capacity per tenant is the sum over independent replicas.
std::vector<CapacityClass> tier_capacity_distribution(const TierSpec& tier);

// Tier MUGF: every aggregate capacity class mapped through the delay model.
Mugf tier_mugf(const TierSpec& tier);

// Chain MUGF: polynomial product across tiers (coefficients multiply, delay
// vectors add). Terms whose running coefficient falls below prune_threshold
// are dropped with their mass accumulated into `dropped`.
Mugf chain_mugf(const ChainSpec& chain, double prune_threshold = 0.0);

// Sum of coefficients of terms meeting every tenant's threshold.
double availability(const Mugf& mugf, const std::vector<double>& thresholds);

struct AvailabilityBracket {
    double lower = 0.0;    // pruned mass counted unavailable
    double upper = 0.0;    // pruned mass counted available
    double dropped = 0.0;  // pruned probability mass
};

AvailabilityBracket availability_bracket(const Mugf& mugf,
                                         const std::vector<double>& thresholds);

// Availability of a tier-MUGF product evaluated without materializing the
// chain polynomial: partial delay vectors already violating a threshold are
// pooled into a single unavailable accumulator (exact, since delays only
// grow along the product). Equals availability(chain_mugf(...), w) with the
// same pruning floor.
AvailabilityBracket chain_availability(const std::vector<Mugf>& tier_mugfs,
                                       const std::vector<double>& thresholds,
                                       double prune_threshold = 0.0);

// Unmerged joint state count prod_m N_m^{L_m} (saturates at the double cap).
double unmerged_joint_state_count(const ChainSpec& chain);

}  // namespace chainavail
