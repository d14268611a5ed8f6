#include "chainavail/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>

namespace chainavail {

namespace {

// Deterministic uniform/exponential/lognormal samplers on top of the
// standard engine; the standard distribution adapters are not pinned by the
// standard, these are.
struct Rng {
    std::mt19937_64 engine;

    explicit Rng(std::uint64_t seed) : engine(seed) {}

    double uniform() {  // (0, 1)
        const std::uint64_t bits = engine() >> 11;
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }
    double exponential(double mean) { return -mean * std::log(uniform()); }
    double normal() {
        constexpr double two_pi = 6.283185307179586476925286766559;
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }
};

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

Estimate summarize(const std::vector<double>& reps) {
    Estimate e;
    e.mean = mean_of(reps);
    if (reps.size() >= 2) {
        double ss = 0.0;
        for (double x : reps) ss += (x - e.mean) * (x - e.mean);
        const double var = ss / static_cast<double>(reps.size() - 1);
        e.se = std::sqrt(var / static_cast<double>(reps.size()));
        e.ci_low = e.mean - 1.96 * e.se;
        e.ci_high = e.mean + 1.96 * e.se;
        e.ci_valid = true;
    } else {
        e.ci_low = e.ci_high = e.mean;
    }
    return e;
}

// Service-time sampler matched to (mean, cv): exponential at cv = 1,
// deterministic at cv = 0, lognormal otherwise.
struct ServiceSampler {
    double mean;
    double cv;
    double log_mu = 0.0;
    double log_sigma = 0.0;

    ServiceSampler(const ServiceStats& svc) : mean(svc.mean_service_time), cv(svc.cv_service) {
        if (cv != 0.0 && cv != 1.0) {
            const double sigma2 = std::log1p(cv * cv);
            log_sigma = std::sqrt(sigma2);
            log_mu = std::log(mean) - sigma2 / 2.0;
        }
    }
    double draw(Rng& rng) const {
        if (cv == 1.0) return rng.exponential(mean);
        if (cv == 0.0) return mean;
        return std::exp(log_mu + log_sigma * rng.normal());
    }
};

struct CtmcWalker {
    const GeneratorMatrix* gen;
    std::size_t state;

    double exit_rate() const { return -gen->at(state, state); }

    // Jump to the next state; assumes exit_rate() > 0.
    void jump(Rng& rng) {
        const double u = rng.uniform() * exit_rate();
        double acc = 0.0;
        for (std::size_t t = 0; t < gen->n; ++t) {
            if (t == state) continue;
            acc += gen->at(state, t);
            if (u <= acc) {
                state = t;
                return;
            }
        }
        state = gen->n - 1;  // numerical guard
    }
};

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

OccupancyEstimate simulate_cnf_occupancy(const CnfSpec& cnf, const SimulationConfig& sim) {
    const StateSpace space = enumerate_states(cnf);
    const GeneratorMatrix gen = build_generator(cnf, space);
    const std::size_t n = space.size();

    std::vector<std::vector<double>> reps(n);
    std::uint64_t seed_state = sim.seed;
    for (int r = 0; r < sim.replications; ++r) {
        Rng rng(splitmix64(seed_state));
        CtmcWalker walker{&gen, space.fully_working_index()};
        const double start = sim.horizon * sim.warmup;
        std::vector<double> occupancy(n, 0.0);
        double t = 0.0;
        while (t < sim.horizon) {
            const double rate = walker.exit_rate();
            const double dwell = rate > 0 ? rng.exponential(1.0 / rate) : sim.horizon - t;
            const double lo = std::max(t, start);
            const double hi = std::min(t + dwell, sim.horizon);
            if (hi > lo) occupancy[walker.state] += hi - lo;
            t += dwell;
            if (t < sim.horizon && rate > 0) walker.jump(rng);
        }
        const double window = sim.horizon - start;
        for (std::size_t s = 0; s < n; ++s) reps[s].push_back(occupancy[s] / window);
    }

    OccupancyEstimate out;
    out.mean.resize(n);
    out.se.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        const Estimate e = summarize(reps[s]);
        out.mean[s] = e.mean;
        out.se[s] = e.se;
    }
    return out;
}

Estimate simulate_mgc_sojourn(double alpha, const ServiceStats& svc, int c,
                              const SimulationConfig& sim) {
    const ServiceSampler sampler(svc);
    const auto jobs = static_cast<long long>(sim.horizon);
    const auto skip = static_cast<long long>(static_cast<double>(jobs) * sim.warmup);

    std::vector<double> reps;
    std::uint64_t seed_state = sim.seed;
    for (int r = 0; r < sim.replications; ++r) {
        Rng rng(splitmix64(seed_state));
        // Earliest-free-server times; FCFS start = max(arrival, min heap top).
        std::priority_queue<double, std::vector<double>, std::greater<>> free_at;
        for (int s = 0; s < c; ++s) free_at.push(0.0);
        double t = 0.0;
        double total = 0.0;
        long long counted = 0;
        for (long long j = 0; j < jobs; ++j) {
            t += rng.exponential(1.0 / alpha);
            const double server = free_at.top();
            free_at.pop();
            const double begin = std::max(t, server);
            const double finish = begin + sampler.draw(rng);
            free_at.push(finish);
            if (j >= skip) {
                total += finish - t;
                ++counted;
            }
        }
        reps.push_back(total / static_cast<double>(counted));
    }
    return summarize(reps);
}

Estimate simulate_chain_availability(const ChainSpec& chain, const Configuration& cfg,
                                     const SimulationConfig& sim) {
    if (cfg.replicas.size() != chain.tiers.size())
        throw ModelError("simulate_chain_availability: replica vector length mismatch");
    const int k = chain.tenant_count();

    std::vector<StateSpace> spaces;
    std::vector<GeneratorMatrix> gens;
    for (const auto& tier : chain.tiers) {
        spaces.push_back(enumerate_states(tier.cnf));
        gens.push_back(build_generator(tier.cnf, spaces.back()));
    }

    // Aggregate capacities per tier/tenant for the current joint state, then
    // the same delay computation the analytic pipeline uses.
    auto indicator = [&](const std::vector<std::vector<std::size_t>>& states) {
        for (int i = 0; i < k; ++i) {
            double delay = 0.0;
            for (std::size_t m = 0; m < chain.tiers.size(); ++m) {
                long long caps = 0;
                for (std::size_t st : states[m]) {
                    const CnfState& s = spaces[m].states[st];
                    if (s.kind == StateKind::Working)
                        caps += static_cast<long long>(chain.tiers[m].cnf.gamma) *
                                s.eta[static_cast<std::size_t>(i)];
                }
                const auto& tenant = chain.tiers[m].cnf.tenants[static_cast<std::size_t>(i)];
                delay += kingman_mean_delay(tenant.arrival_rate, chain.tiers[m].service, caps,
                                            tenant.cv_arrivals);
                if (!(delay <= chain.thresholds[static_cast<std::size_t>(i)])) return false;
            }
        }
        return true;
    };

    std::vector<double> reps;
    std::uint64_t seed_state = sim.seed;
    for (int r = 0; r < sim.replications; ++r) {
        Rng rng(splitmix64(seed_state));
        std::vector<std::vector<std::size_t>> states(chain.tiers.size());
        std::vector<CtmcWalker> walkers;
        std::vector<std::pair<std::size_t, std::size_t>> owner;  // tier, slot
        for (std::size_t m = 0; m < chain.tiers.size(); ++m) {
            states[m].assign(static_cast<std::size_t>(cfg.replicas[m]),
                             spaces[m].fully_working_index());
            for (std::size_t l = 0; l < states[m].size(); ++l) {
                walkers.push_back({&gens[m], spaces[m].fully_working_index()});
                owner.emplace_back(m, l);
            }
        }

        const double start = sim.horizon * sim.warmup;
        double t = 0.0;
        double up = 0.0;
        while (t < sim.horizon) {
            double total_rate = 0.0;
            for (const auto& w : walkers) total_rate += w.exit_rate();
            const double dwell =
                total_rate > 0 ? rng.exponential(1.0 / total_rate) : sim.horizon - t;
            const bool ok = indicator(states);
            const double lo = std::max(t, start);
            const double hi = std::min(t + dwell, sim.horizon);
            if (ok && hi > lo) up += hi - lo;
            t += dwell;
            if (t >= sim.horizon || total_rate <= 0) break;
            // Pick the jumping replica proportionally to its exit rate.
            double u = rng.uniform() * total_rate;
            std::size_t chosen = walkers.size() - 1;
            for (std::size_t w = 0; w < walkers.size(); ++w) {
                u -= walkers[w].exit_rate();
                if (u <= 0) {
                    chosen = w;
                    break;
                }
            }
            walkers[chosen].jump(rng);
            states[owner[chosen].first][owner[chosen].second] = walkers[chosen].state;
        }
        reps.push_back(up / (sim.horizon - start));
    }
    return summarize(reps);
}

}  // namespace chainavail
