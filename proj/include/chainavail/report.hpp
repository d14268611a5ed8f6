#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chainavail/config.hpp"
#include "chainavail/mugf.hpp"
#include "chainavail/optimize.hpp"
#include "chainavail/simulate.hpp"

namespace chainavail {

enum class ReportFormat { Table, Structured };

struct AnalyzeResult {
    AvailabilityBracket bracket;
    Mugf chain;                         // merged chain MUGF (possibly pruned)
    std::vector<Mugf> tier_mugfs;       // per-tier MUGFs, config order
    std::vector<std::vector<DelayValue>> fully_working_delays;  // per tier
    double cost = 0.0;
    double joint_state_count = 0.0;
};

struct SimulateResult {
    double analytic = 0.0;
    Estimate simulated;
};

// Render a delay for humans: fixed-point seconds or "inf".
std::string format_delay(DelayValue d);

// MUGF rows sorted by descending coefficient, Unavailable as "inf".
std::string serialize_mugf(const Mugf& mugf, int top_terms);

void render_analyze(std::ostream& os, const AppConfig& cfg, const AnalyzeResult& res,
                    ReportFormat format, int top_terms);
void render_optimize(std::ostream& os, const AppConfig& cfg, const OptimizationLedger& ledger,
                     bool feasible, ReportFormat format, bool show_all);
void render_simulate(std::ostream& os, const AppConfig& cfg, const SimulateResult& res,
                     const SimulationConfig& sim, ReportFormat format);

}  // namespace chainavail
