#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace chainavail {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One tenant hosted on a CNF: instance pool size, container failure/repair
// rates, and the tenant's request stream.
struct TenantSpec {
    int tenant_id = 0;
    int n = 1;                   // maximum containerized instances
    double lambda_c = 0.0;       // per-instance failure rate, 1/s
    double mu_c = 0.0;           // per-instance repair rate, 1/s
    double arrival_rate = 0.0;   // Poisson arrival rate alpha, 1/s
    double cv_arrivals = 1.0;    // interarrival coefficient of variation
};

// A containerized network function shared by K tenants, with Docker-layer
// and infrastructure-layer failure/repair rates and per-instance serving
// capacity gamma.
struct CnfSpec {
    std::vector<TenantSpec> tenants;
    double lambda_d = 0.0;  // Docker failure rate, 1/s
    double mu_d = 0.0;      // Docker repair rate, 1/s
    double lambda_i = 0.0;  // infrastructure failure rate, 1/s
    double mu_i = 0.0;      // infrastructure repair rate, 1/s
    int gamma = 1;          // requests served concurrently per instance

    int tenant_count() const { return static_cast<int>(tenants.size()); }
    void validate() const;
};

enum class StateKind { Working, DockerFailed, InfraFailed };

// One CNF state: a software vector eta (working instances per tenant) or one
// of the two distinguished layer-failure states.
struct CnfState {
    StateKind kind = StateKind::Working;
    std::vector<int> eta;  // empty unless Working

    bool operator==(const CnfState&) const = default;
};

// Deterministically ordered state space: software states in descending
// lexicographic order starting from the fully-working vector, then
// DockerFailed, then InfraFailed.
struct StateSpace {
    std::vector<CnfState> states;

    std::size_t size() const { return states.size(); }
    std::size_t software_count() const { return states.size() - 2; }
    std::size_t fully_working_index() const { return 0; }
    std::size_t docker_failed_index() const { return states.size() - 2; }
    std::size_t infra_failed_index() const { return states.size() - 1; }
    // Position of a state in the canonical ordering.
    std::size_t index_of(const CnfState& s, const CnfSpec& spec) const;
};

// Dense infinitesimal generator; off-diagonals are nonnegative rates and
// every row sums to zero.
struct GeneratorMatrix {
    std::size_t n = 0;
    std::vector<double> q;  // row-major n*n

    double& at(std::size_t i, std::size_t j) { return q[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return q[i * n + j]; }
    double max_rate() const;
};

struct SteadyStateDistribution {
    std::vector<double> p;
};

StateSpace enumerate_states(const CnfSpec& spec);
GeneratorMatrix build_generator(const CnfSpec& spec, const StateSpace& space);
SteadyStateDistribution solve_steady_state(const GeneratorMatrix& q);
// Per-tenant capacity exposed in a state: gamma*eta for software states, the
// zero vector for the layer-failure states.
std::vector<int> capacity_vector(const CnfState& state, int gamma, int tenant_count);

// Number of states implied by the pool sizes alone: prod(n_i + 1) + 2.
std::size_t state_count(const CnfSpec& spec);

// Infinity-norm of p*Q, the balance-equation residual.
double balance_residual(const SteadyStateDistribution& p, const GeneratorMatrix& q);

}  // namespace chainavail
