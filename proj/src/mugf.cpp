#include "chainavail/mugf.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_map>

namespace chainavail {

namespace {

// Neumaier compensated accumulator; keeps tiny-term sums exact enough
// that availability comparisons at the 1e-10 scale are trustworthy.
struct Accumulator {
    double sum = 0.0;
    double comp = 0.0;

    void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

struct DelayKey {
    std::vector<double> d;
    bool operator==(const DelayKey&) const = default;
};

struct DelayKeyHash {
    std::size_t operator()(const DelayKey& k) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ k.d.size();
        for (double x : k.d) {
            std::uint64_t b = std::bit_cast<std::uint64_t>(x);
            b ^= b >> 33;
            b *= 0xff51afd7ed558ccdull;
            b ^= b >> 33;
            h = h * 0x100000001b3ull ^ b;
        }
        return static_cast<std::size_t>(h);
    }
};

using TermMap = std::unordered_map<DelayKey, double, DelayKeyHash>;

bool delay_vector_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Canonical Mugf from a term map. Terms with bitwise-equal delay vectors are
// already merged by the map; anything numerically distinct stays distinct, so
// the leading coefficient is exactly the joint fully-working probability.
Mugf canonicalize(TermMap&& map, int tenant_count, double dropped) {
    std::vector<MugfTerm> terms;
    terms.reserve(map.size());
    for (const auto& [key, prob] : map) terms.push_back({prob, key.d});
    std::sort(terms.begin(), terms.end(), [](const MugfTerm& x, const MugfTerm& y) {
        if (x.prob != y.prob) return x.prob > y.prob;
        return delay_vector_less(x.delays, y.delays);
    });
    Mugf m;
    m.terms = std::move(terms);
    m.tenant_count = tenant_count;
    m.dropped = dropped;
    return m;
}

// Deterministic content order for tier MUGFs. Products are evaluated in this
// order regardless of how the caller arranged the tiers, which makes the
// floating-point delay sums (and hence the merged term set) independent of
// tier permutation.
bool mugf_content_less(const Mugf& a, const Mugf& b) {
    const std::size_t n = std::min(a.terms.size(), b.terms.size());
    for (std::size_t t = 0; t < n; ++t) {
        if (a.terms[t].prob != b.terms[t].prob) return a.terms[t].prob < b.terms[t].prob;
        if (a.terms[t].delays != b.terms[t].delays)
            return delay_vector_less(a.terms[t].delays, b.terms[t].delays);
    }
    return a.terms.size() < b.terms.size();
}

std::vector<const Mugf*> canonical_order(const std::vector<Mugf>& tier_mugfs) {
    std::vector<const Mugf*> order;
    order.reserve(tier_mugfs.size());
    for (const auto& m : tier_mugfs) order.push_back(&m);
    std::sort(order.begin(), order.end(),
              [](const Mugf* x, const Mugf* y) { return mugf_content_less(*x, *y); });
    return order;
}

bool capacity_less_desc(const std::vector<int>& a, const std::vector<int>& b) {
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<CapacityClass> sorted_classes(std::map<std::vector<int>, double>&& acc) {
    std::vector<CapacityClass> out;
    out.reserve(acc.size());
    for (auto& [cap, prob] : acc) out.emplace_back(prob, cap);
    std::sort(out.begin(), out.end(), [](const CapacityClass& x, const CapacityClass& y) {
        return capacity_less_desc(x.second, y.second);
    });
    return out;
}

}  // namespace

double Mugf::coefficient_sum() const {
    Accumulator acc;
    for (const auto& t : terms) acc.add(t.prob);
    return acc.value();
}

int ChainSpec::tenant_count() const {
    return tiers.empty() ? 0 : tiers.front().cnf.tenant_count();
}

void ChainSpec::validate() const {
    if (tiers.empty()) throw ModelError("ChainSpec: at least one tier required");
    const auto& first = tiers.front().cnf.tenants;
    for (const auto& tier : tiers) {
        tier.cnf.validate();
        if (tier.replicas < 1) throw ModelError("TierSpec: replicas must be >= 1");
        if (tier.service.mean_service_time <= 0)
            throw ModelError("TierSpec: mean service time must be positive");
        if (tier.service.cv_service < 0)
            throw ModelError("TierSpec: cv_service must be >= 0");
        const auto& ts = tier.cnf.tenants;
        if (ts.size() != first.size())
            throw ModelError("ChainSpec: tiers disagree on tenant count");
        for (std::size_t i = 0; i < ts.size(); ++i) {
            if (ts[i].arrival_rate != first[i].arrival_rate ||
                ts[i].cv_arrivals != first[i].cv_arrivals)
                throw ModelError("ChainSpec: tiers disagree on tenant workloads");
        }
    }
    if (thresholds.size() != first.size())
        throw ModelError("ChainSpec: one threshold per tenant required");
    for (double w : thresholds)
        if (w <= 0) throw ModelError("ChainSpec: thresholds must be positive");
}

std::vector<CapacityClass> cnf_capacity_distribution(const CnfSpec& cnf) {
    const StateSpace space = enumerate_states(cnf);
    const GeneratorMatrix gen = build_generator(cnf, space);
    const SteadyStateDistribution dist = solve_steady_state(gen);

    std::map<std::vector<int>, double> acc;
    for (std::size_t s = 0; s < space.size(); ++s)
        acc[capacity_vector(space.states[s], cnf.gamma, cnf.tenant_count())] += dist.p[s];
    return sorted_classes(std::move(acc));
}

std::vector<CapacityClass> tier_capacity_distribution(const TierSpec& tier) {
    const std::vector<CapacityClass> base = cnf_capacity_distribution(tier.cnf);
    std::vector<CapacityClass> agg = base;
    for (int l = 1; l < tier.replicas; ++l) {
        std::map<std::vector<int>, double> next;
        for (const auto& [p1, c1] : agg)
            for (const auto& [p2, c2] : base) {
                std::vector<int> sum(c1.size());
                for (std::size_t i = 0; i < c1.size(); ++i) sum[i] = c1[i] + c2[i];
                next[sum] += p1 * p2;
            }
        agg = sorted_classes(std::move(next));
    }
    return agg;
}

Mugf tier_mugf(const TierSpec& tier) {
    const int k = tier.cnf.tenant_count();
    TermMap map;
    for (const auto& [prob, caps] : tier_capacity_distribution(tier)) {
        DelayKey key;
        key.d.resize(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            const auto& tenant = tier.cnf.tenants[static_cast<std::size_t>(i)];
            key.d[static_cast<std::size_t>(i)] = kingman_mean_delay(
                tenant.arrival_rate, tier.service, caps[static_cast<std::size_t>(i)],
                tenant.cv_arrivals);
        }
        map[std::move(key)] += prob;
    }
    return canonicalize(std::move(map), k, 0.0);
}

Mugf chain_mugf(const ChainSpec& chain, double prune_threshold) {
    chain.validate();
    const int k = chain.tenant_count();

    std::vector<Mugf> tier_mugfs;
    tier_mugfs.reserve(chain.tiers.size());
    for (const auto& tier : chain.tiers) tier_mugfs.push_back(tier_mugf(tier));

    TermMap product;
    product[DelayKey{std::vector<double>(static_cast<std::size_t>(k), 0.0)}] = 1.0;
    Accumulator dropped;
    for (const Mugf* tm_ptr : canonical_order(tier_mugfs)) {
        const Mugf& tm = *tm_ptr;
        TermMap next;
        next.reserve(product.size() * tm.terms.size() / 4 + 16);
        for (const auto& [key, p1] : product)
            for (const auto& term : tm.terms) {
                const double pr = p1 * term.prob;
                if (pr < prune_threshold) {
                    dropped.add(pr);
                    continue;
                }
                DelayKey sum;
                sum.d.resize(static_cast<std::size_t>(k));
                for (int i = 0; i < k; ++i)
                    sum.d[static_cast<std::size_t>(i)] =
                        key.d[static_cast<std::size_t>(i)] + term.delays[static_cast<std::size_t>(i)];
                next[std::move(sum)] += pr;
            }
        product = std::move(next);
    }
    return canonicalize(std::move(product), k, dropped.value());
}

double availability(const Mugf& mugf, const std::vector<double>& thresholds) {
    Accumulator acc;
    for (const auto& term : mugf.terms) {
        bool ok = true;
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            if (!(term.delays[i] <= thresholds[i])) {
                ok = false;
                break;
            }
        if (ok) acc.add(term.prob);
    }
    return acc.value();
}

AvailabilityBracket availability_bracket(const Mugf& mugf,
                                         const std::vector<double>& thresholds) {
    AvailabilityBracket b;
    b.lower = availability(mugf, thresholds);
    b.dropped = mugf.dropped;
    b.upper = b.lower + b.dropped;
    return b;
}

AvailabilityBracket chain_availability(const std::vector<Mugf>& tier_mugfs,
                                       const std::vector<double>& thresholds,
                                       double prune_threshold) {
    const std::size_t k = thresholds.size();
    TermMap live;
    live[DelayKey{std::vector<double>(k, 0.0)}] = 1.0;
    Accumulator doomed;   // terms already violating some threshold
    Accumulator dropped;  // pruned mass

    for (const Mugf* tm_ptr : canonical_order(tier_mugfs)) {
        const Mugf& tm = *tm_ptr;
        TermMap next;
        next.reserve(live.size() * 2 + 16);
        for (const auto& [key, p1] : live)
            for (const auto& term : tm.terms) {
                const double pr = p1 * term.prob;
                if (pr < prune_threshold) {
                    dropped.add(pr);
                    continue;
                }
                DelayKey sum;
                sum.d.resize(k);
                bool violated = false;
                for (std::size_t i = 0; i < k; ++i) {
                    sum.d[i] = key.d[i] + term.delays[i];
                    if (!(sum.d[i] <= thresholds[i])) violated = true;
                }
                if (violated)
                    doomed.add(pr);
                else
                    next[std::move(sum)] += pr;
            }
        live = std::move(next);
    }

    Accumulator avail;
    for (const auto& [key, p] : live) avail.add(p);

    AvailabilityBracket b;
    b.lower = avail.value();
    b.dropped = dropped.value();
    b.upper = b.lower + b.dropped;
    return b;
}

double unmerged_joint_state_count(const ChainSpec& chain) {
    double total = 1.0;
    for (const auto& tier : chain.tiers)
        total *= std::pow(static_cast<double>(state_count(tier.cnf)), tier.replicas);
    return total;
}

}  // namespace chainavail
