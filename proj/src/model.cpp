#include "chainavail/model.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace chainavail {

void CnfSpec::validate() const {
    if (tenants.empty()) throw ModelError("CnfSpec: at least one tenant required");
    for (const auto& t : tenants) {
        if (t.n < 1) throw ModelError("TenantSpec: n must be >= 1");
        if (t.lambda_c <= 0 || t.mu_c <= 0)
            throw ModelError("TenantSpec: container rates must be positive");
        if (t.arrival_rate <= 0) throw ModelError("TenantSpec: arrival rate must be positive");
        if (t.cv_arrivals < 0) throw ModelError("TenantSpec: cv_arrivals must be >= 0");
    }
    if (lambda_d <= 0 || mu_d <= 0 || lambda_i <= 0 || mu_i <= 0)
        throw ModelError("CnfSpec: layer rates must be positive");
    if (gamma < 1) throw ModelError("CnfSpec: gamma must be >= 1");
}

std::size_t state_count(const CnfSpec& spec) {
    std::size_t n = 1;
    for (const auto& t : spec.tenants) n *= static_cast<std::size_t>(t.n) + 1;
    return n + 2;
}

StateSpace enumerate_states(const CnfSpec& spec) {
    spec.validate();
    const int k = spec.tenant_count();
    StateSpace space;
    space.states.reserve(state_count(spec));

    // Descending lexicographic walk from the fully-working vector.
    std::vector<int> eta(k);
    for (int i = 0; i < k; ++i) eta[i] = spec.tenants[i].n;
    while (true) {
        space.states.push_back({StateKind::Working, eta});
        int i = k - 1;
        while (i >= 0 && eta[i] == 0) {
            eta[i] = spec.tenants[i].n;
            --i;
        }
        if (i < 0) break;
        --eta[i];
    }
    space.states.push_back({StateKind::DockerFailed, {}});
    space.states.push_back({StateKind::InfraFailed, {}});
    return space;
}

std::size_t StateSpace::index_of(const CnfState& s, const CnfSpec& spec) const {
    if (s.kind == StateKind::DockerFailed) return docker_failed_index();
    if (s.kind == StateKind::InfraFailed) return infra_failed_index();
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (int i = spec.tenant_count() - 1; i >= 0; --i) {
        idx += static_cast<std::size_t>(spec.tenants[i].n - s.eta[i]) * stride;
        stride *= static_cast<std::size_t>(spec.tenants[i].n) + 1;
    }
    return idx;
}

double GeneratorMatrix::max_rate() const {
    double m = 0.0;
    for (double v : q) m = std::max(m, std::abs(v));
    return m;
}

GeneratorMatrix build_generator(const CnfSpec& spec, const StateSpace& space) {
    const std::size_t n = space.size();
    const int k = spec.tenant_count();
    GeneratorMatrix g;
    g.n = n;
    g.q.assign(n * n, 0.0);

    const std::size_t fw = space.fully_working_index();
    const std::size_t dlf = space.docker_failed_index();
    const std::size_t ilf = space.infra_failed_index();

    for (std::size_t s = 0; s < space.software_count(); ++s) {
        const auto& st = space.states[s];
        for (int i = 0; i < k; ++i) {
            if (st.eta[i] > 0) {
                CnfState down = st;
                --down.eta[i];
                g.at(s, space.index_of(down, spec)) += st.eta[i] * spec.tenants[i].lambda_c;
            }
            if (st.eta[i] < spec.tenants[i].n) {
                CnfState up = st;
                ++up.eta[i];
                g.at(s, space.index_of(up, spec)) +=
                    (spec.tenants[i].n - st.eta[i]) * spec.tenants[i].mu_c;
            }
        }
        g.at(s, dlf) += spec.lambda_d;
        g.at(s, ilf) += spec.lambda_i;
    }
    g.at(dlf, fw) += spec.mu_d;
    g.at(dlf, ilf) += spec.lambda_i;
    g.at(ilf, fw) += spec.mu_i;

    for (std::size_t s = 0; s < n; ++s) {
        double row = 0.0;
        for (std::size_t t = 0; t < n; ++t)
            if (t != s) row += g.at(s, t);
        g.at(s, s) = -row;
    }
    return g;
}

SteadyStateDistribution solve_steady_state(const GeneratorMatrix& q) {
    const std::size_t n = q.n;
    if (n == 0) throw ModelError("solve_steady_state: empty generator");

    // Balance equations Q^T p = 0 with the last equation replaced by the
    // normalization sum(p) = 1.
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = q.at(j, i);
    for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(j)) = 1.0;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    b(static_cast<Eigen::Index>(n - 1)) = 1.0;

    Eigen::VectorXd x = a.partialPivLu().solve(b);

    SteadyStateDistribution dist;
    dist.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = x(static_cast<Eigen::Index>(i));
        if (!std::isfinite(v) || v < -1e-9 || v > 1.0 + 1e-9)
            throw ModelError("solve_steady_state: numerically singular system");
        dist.p[i] = std::max(v, 0.0);
    }

    const double scale = std::max(q.max_rate(), 1.0);
    GeneratorMatrix copy = q;
    if (balance_residual(dist, copy) > 1e-10 * scale)
        throw ModelError("solve_steady_state: residual too large (singular generator?)");
    return dist;
}

double balance_residual(const SteadyStateDistribution& p, const GeneratorMatrix& q) {
    double worst = 0.0;
    for (std::size_t j = 0; j < q.n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < q.n; ++i) acc += p.p[i] * q.at(i, j);
        worst = std::max(worst, std::abs(acc));
    }
    return worst;
}

std::vector<int> capacity_vector(const CnfState& state, int gamma, int tenant_count) {
    std::vector<int> cap(static_cast<std::size_t>(tenant_count), 0);
    if (state.kind == StateKind::Working)
        for (std::size_t i = 0; i < state.eta.size(); ++i) cap[i] = gamma * state.eta[i];
    return cap;
}

}  // namespace chainavail
