#pragma once

#include <cstdint>
#include <vector>

#include "chainavail/mugf.hpp"
#include "chainavail/optimize.hpp"

namespace chainavail {

struct SimulationConfig {
    std::uint64_t seed = 1;
    double horizon = 1e4;     // simulated seconds (CTMC) or job count (queue)
    double warmup = 0.1;      // initial fraction discarded
    int replications = 10;
};

// Point estimate with standard error and a 95% normal confidence interval.
// ci_valid is false when replications < 2 (no spread to estimate).
struct Estimate {
    double mean = 0.0;
    double se = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    bool ci_valid = false;
};

struct OccupancyEstimate {
    std::vector<double> mean;  // time-average occupancy per state
    std::vector<double> se;
};

// SplitMix64 step; used to derive independent per-replication sub-seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// Gillespie trajectory of the CNF CTMC; time-averaged indicator per state.
OccupancyEstimate simulate_cnf_occupancy(const CnfSpec& cnf, const SimulationConfig& sim);

// FCFS M/G/c discrete-event simulation. Service times are exponential when
// cv = 1, deterministic when cv = 0, and lognormal matched to (mean, cv)
// otherwise. horizon counts jobs per replication.
Estimate simulate_mgc_sojourn(double alpha, const ServiceStats& svc, int c,
                              const SimulationConfig& sim);

// All replica CTMCs simulated independently on a shared clock; the estimate
// is the time average of the indicator "every tenant's chain delay meets its
// threshold", with delays computed by the same queueing formulas as the
// analytic pipeline.
Estimate simulate_chain_availability(const ChainSpec& chain, const Configuration& cfg,
                                     const SimulationConfig& sim);

}  // namespace chainavail
