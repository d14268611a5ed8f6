#include "chainavail/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace chainavail {

namespace {

using nlohmann::json;

std::string fixed(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::string sci(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

json delay_json(DelayValue d) {
    json j;
    if (is_unavailable(d)) {
        j["value"] = "inf";
    } else {
        j["value"] = d;
    }
    j["units"] = "seconds";
    return j;
}

json estimate_json(const Estimate& e) {
    json j;
    j["mean"] = e.mean;
    j["standard_error"] = e.se;
    if (e.ci_valid) {
        j["ci95"] = {e.ci_low, e.ci_high};
    } else {
        j["ci95"] = nullptr;
    }
    return j;
}

std::string config_string(const Configuration& cfg) {
    std::string s = "(";
    for (std::size_t m = 0; m < cfg.replicas.size(); ++m) {
        if (m) s += ",";
        s += std::to_string(cfg.replicas[m]);
    }
    return s + ")";
}

bool entry_feasible(const LedgerEntry& e, double target) {
    return e.availability >= target;
}

}  // namespace

std::string format_delay(DelayValue d) {
    if (is_unavailable(d)) return "inf";
    std::string s = fixed(d, 9);
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (s.back() == '.') s += "0";
    return s;
}

std::string serialize_mugf(const Mugf& mugf, int top_terms) {
    std::ostringstream os;
    const std::size_t shown =
        top_terms < 0 ? mugf.terms.size()
                      : std::min<std::size_t>(mugf.terms.size(), static_cast<std::size_t>(top_terms));
    os << "coefficient";
    for (int i = 0; i < mugf.tenant_count; ++i)
        os << "  delay[" << (i + 1) << "] (s)";
    os << "\n";
    for (std::size_t t = 0; t < shown; ++t) {
        os << sci(mugf.terms[t].prob);
        for (DelayValue d : mugf.terms[t].delays) os << "  " << format_delay(d);
        os << "\n";
    }
    if (shown < mugf.terms.size())
        os << "... " << (mugf.terms.size() - shown) << " further terms\n";
    return os.str();
}

void render_analyze(std::ostream& os, const AppConfig& cfg, const AnalyzeResult& res,
                    ReportFormat format, int top_terms) {
    const auto& chain = cfg.chain;
    const int tenants = chain.tenant_count();

    if (format == ReportFormat::Structured) {
        json doc;
        doc["command"] = "analyze";
        doc["availability"] = res.bracket.lower;
        doc["availability_bracket"] = {{"lower", res.bracket.lower},
                                       {"upper", res.bracket.upper},
                                       {"pruned_mass", res.bracket.dropped}};
        json jw = json::array();
        for (double w : chain.thresholds) jw.push_back(delay_json(w));
        doc["thresholds"] = jw;
        doc["cost"] = {{"value", res.cost}, {"units", "cost_units"}};
        doc["joint_state_count"] = res.joint_state_count;
        doc["tiers"] = json::array();
        for (std::size_t m = 0; m < chain.tiers.size(); ++m) {
            json jt;
            jt["name"] = chain.tiers[m].name;
            jt["replicas"] = chain.tiers[m].replicas;
            json jd = json::array();
            for (DelayValue d : res.fully_working_delays[m]) jd.push_back(delay_json(d));
            jt["fully_working_delay"] = jd;
            jt["term_count"] = res.tier_mugfs[m].terms.size();
            doc["tiers"].push_back(jt);
        }
        const std::size_t shown =
            top_terms < 0 ? res.chain.terms.size()
                          : std::min<std::size_t>(res.chain.terms.size(),
                                                  static_cast<std::size_t>(top_terms));
        doc["chain_term_count"] = res.chain.terms.size();
        doc["chain_terms"] = json::array();
        for (std::size_t t = 0; t < shown; ++t) {
            json jt;
            jt["coefficient"] = res.chain.terms[t].prob;
            json jd = json::array();
            for (DelayValue d : res.chain.terms[t].delays) jd.push_back(delay_json(d));
            jt["delays"] = jd;
            doc["chain_terms"].push_back(jt);
        }
        os << doc.dump(2) << "\n";
        return;
    }

    os << "Service chain availability\n";
    os << "  tiers:";
    for (const auto& tier : chain.tiers) os << " " << tier.name << "(L=" << tier.replicas << ")";
    os << "\n  tenants: " << tenants << "\n";
    os << "  thresholds (s):";
    for (double w : chain.thresholds) os << " " << format_delay(w);
    os << "\n\n";
    os << "  availability:      " << fixed(res.bracket.lower, 6) << "\n";
    os << "  unavailability:    " << sci(1.0 - res.bracket.lower) << "\n";
    if (res.bracket.dropped > 0.0)
        os << "  bracket:           [" << fixed(res.bracket.lower, 12) << ", "
           << fixed(res.bracket.upper, 12) << "], pruned mass " << sci(res.bracket.dropped)
           << "\n";
    os << "  total cost:        " << fixed(res.cost, 2) << " (cost units)\n";
    os << "  joint states:      " << sci(res.joint_state_count)
       << " (decomposed product space)\n\n";

    os << "  fully-working delay per tier (s):\n";
    for (std::size_t m = 0; m < chain.tiers.size(); ++m) {
        os << "    " << chain.tiers[m].name << ":";
        for (DelayValue d : res.fully_working_delays[m]) os << " " << format_delay(d);
        os << "\n";
    }
    os << "\n  chain terms (top " << top_terms << " of " << res.chain.terms.size() << "):\n";
    std::istringstream rows(serialize_mugf(res.chain, top_terms));
    for (std::string line; std::getline(rows, line);) os << "    " << line << "\n";
}

void render_optimize(std::ostream& os, const AppConfig& cfg, const OptimizationLedger& ledger,
                     bool feasible, ReportFormat format, bool show_all) {
    const std::size_t default_rows = 10;

    if (format == ReportFormat::Structured) {
        json doc;
        doc["command"] = "optimize";
        doc["feasible"] = feasible;
        doc["availability_target"] = ledger.target;
        doc["max_replicas"] = ledger.max_replicas;
        doc["best_availability"] = ledger.best_availability;
        doc["evaluated"] = ledger.entries.size();
        doc["optima"] = json::array();
        for (const auto& opt : ledger.optima) {
            for (const auto& e : ledger.entries) {
                if (e.config == opt) {
                    doc["optima"].push_back({{"replicas", opt.replicas},
                                             {"cost", {{"value", e.cost}, {"units", "cost_units"}}},
                                             {"availability", e.availability}});
                    break;
                }
            }
        }
        doc["ledger"] = json::array();
        const std::size_t shown =
            show_all ? ledger.entries.size() : std::min(default_rows, ledger.entries.size());
        for (std::size_t i = 0; i < shown; ++i) {
            const auto& e = ledger.entries[i];
            doc["ledger"].push_back({{"replicas", e.config.replicas},
                                     {"cost", {{"value", e.cost}, {"units", "cost_units"}}},
                                     {"availability", e.availability},
                                     {"availability_upper", e.availability_upper},
                                     {"feasible", entry_feasible(e, ledger.target)}});
        }
        doc["ledger_truncated"] = shown < ledger.entries.size();
        os << doc.dump(2) << "\n";
        return;
    }

    os << "Redundancy optimization\n";
    os << "  tiers:";
    for (const auto& tier : cfg.chain.tiers) os << " " << tier.name;
    os << "\n  availability target: " << fixed(ledger.target, 6) << "\n";
    os << "  replica range: 1.." << ledger.max_replicas << " per tier\n";
    os << "  evaluated configurations: " << ledger.entries.size() << "\n";
    os << "  best achieved availability: " << fixed(ledger.best_availability, 6) << "\n\n";

    if (feasible) {
        os << "  minimum-cost configurations:\n";
        for (const auto& opt : ledger.optima) {
            for (const auto& e : ledger.entries) {
                if (e.config == opt) {
                    os << "    " << config_string(opt) << "  cost " << fixed(e.cost, 2)
                       << "  availability " << fixed(e.availability, 6) << "\n";
                    break;
                }
            }
        }
    } else {
        os << "  no configuration meets the target; best achieved availability "
           << fixed(ledger.best_availability, 6) << "\n";
    }

    const std::size_t shown =
        show_all ? ledger.entries.size() : std::min(default_rows, ledger.entries.size());
    os << "\n  ledger sorted by (cost, -availability), " << shown << " of "
       << ledger.entries.size() << (show_all ? "" : " (--all for every entry)") << ":\n";
    os << "    replicas  cost  availability  feasible\n";
    for (std::size_t i = 0; i < shown; ++i) {
        const auto& e = ledger.entries[i];
        os << "    " << config_string(e.config) << "  " << fixed(e.cost, 2) << "  "
           << fixed(e.availability, 6) << "  "
           << (entry_feasible(e, ledger.target) ? "yes" : "no") << "\n";
    }
}

void render_simulate(std::ostream& os, const AppConfig& cfg, const SimulateResult& res,
                     const SimulationConfig& sim, ReportFormat format) {
    (void)cfg;
    const bool agree = res.simulated.ci_valid && res.analytic >= res.simulated.ci_low &&
                       res.analytic <= res.simulated.ci_high;
    const std::string verdict = !res.simulated.ci_valid
                                     ? "CI unavailable (single replication)"
                                     : (agree ? "ANALYTIC within 95% CI"
                                              : "ANALYTIC outside 95% CI");

    if (format == ReportFormat::Structured) {
        json doc;
        doc["command"] = "simulate";
        doc["seed"] = sim.seed;
        doc["horizon"] = {{"value", sim.horizon}, {"units", "seconds"}};
        doc["warmup_fraction"] = sim.warmup;
        doc["replications"] = sim.replications;
        doc["analytic_availability"] = res.analytic;
        doc["simulated_availability"] = estimate_json(res.simulated);
        doc["verdict"] = verdict;
        os << doc.dump(2) << "\n";
        return;
    }

    os << "Simulation cross-check\n";
    os << "  seed " << sim.seed << ", horizon " << format_delay(sim.horizon)
       << " s, warmup fraction " << fixed(sim.warmup, 2) << ", replications "
       << sim.replications << "\n\n";
    os << "  analytic availability:  " << fixed(res.analytic, 6) << "\n";
    os << "  simulated availability: " << fixed(res.simulated.mean, 6);
    if (res.simulated.ci_valid) {
        os << "  (se " << sci(res.simulated.se) << ", 95% CI ["
           << fixed(res.simulated.ci_low, 6) << ", " << fixed(res.simulated.ci_high, 6)
           << "])";
    } else {
        os << "  (point estimate only)";
    }
    os << "\n  verdict: " << verdict << "\n";
}

}  // namespace chainavail
