#include "chainavail/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <ostream>
#include <string>
#include <vector>

#include "chainavail/config.hpp"
#include "chainavail/model.hpp"
#include "chainavail/mugf.hpp"
#include "chainavail/optimize.hpp"
#include "chainavail/queueing.hpp"
#include "chainavail/report.hpp"
#include "chainavail/simulate.hpp"

namespace chainavail {

namespace {

ReportFormat parse_format(const std::string& name) {
    return name == "structured" ? ReportFormat::Structured : ReportFormat::Table;
}

Configuration configured_replicas(const AppConfig& cfg) {
    Configuration c;
    for (const auto& tier : cfg.chain.tiers) c.replicas.push_back(tier.replicas);
    return c;
}

int cmd_analyze(const AppConfig& cfg, ReportFormat format, int top_terms, double prune,
                std::ostream& out) {
    AnalyzeResult res;
    res.chain = chain_mugf(cfg.chain, prune);
    res.bracket = availability_bracket(res.chain, cfg.chain.thresholds);
    for (const auto& tier : cfg.chain.tiers) {
        res.tier_mugfs.push_back(tier_mugf(tier));
        std::vector<DelayValue> fw;
        for (const auto& tenant : tier.cnf.tenants) {
            const long long c = static_cast<long long>(tier.cnf.gamma) * tenant.n * tier.replicas;
            fw.push_back(kingman_mean_delay(tenant.arrival_rate, tier.service, c,
                                            tenant.cv_arrivals));
        }
        res.fully_working_delays.push_back(std::move(fw));
    }
    res.cost = configuration_cost(configured_replicas(cfg), cfg.optimization.costs);
    res.joint_state_count = unmerged_joint_state_count(cfg.chain);
    render_analyze(out, cfg, res, format, top_terms);
    return kExitOk;
}

int cmd_optimize(const AppConfig& cfg, ReportFormat format, bool show_all, double prune,
                 std::ostream& out) {
    if (!cfg.optimization.present)
        throw ConfigError("optimization", "section required by the optimize command");
    try {
        OptimizationLedger ledger =
            optimize(cfg.chain, cfg.chain.thresholds, cfg.optimization.availability_target,
                     cfg.optimization.max_replicas, cfg.optimization.costs, prune);
        render_optimize(out, cfg, ledger, true, format, show_all);
        return kExitOk;
    } catch (const EmptyFeasibleSetError& e) {
        render_optimize(out, cfg, e.ledger, false, format, show_all);
        return kExitInfeasible;
    }
}

int cmd_simulate(const AppConfig& cfg, ReportFormat format, const SimulationConfig& sim,
                 std::ostream& out) {
    std::vector<Mugf> tier_mugfs;
    for (const auto& tier : cfg.chain.tiers) tier_mugfs.push_back(tier_mugf(tier));
    SimulateResult res;
    res.analytic = chain_availability(tier_mugfs, cfg.chain.thresholds, 0.0).lower;
    res.simulated = simulate_chain_availability(cfg.chain, configured_replicas(cfg), sim);
    render_simulate(out, cfg, res, sim, format);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Latency-driven availability analysis of containerized service chains"};
    app.require_subcommand(1);

    std::string config_path;
    std::string format_name = "table";
    bool dump_normalized_flag = false;
    int top_terms = 20;
    double prune_analyze = 0.0;
    double prune_optimize = 1e-18;
    bool show_all = false;
    SimulationConfig sim;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "Path to the chain configuration file")
            ->required();
        cmd->add_option("--format", format_name, "Report format")
            ->check(CLI::IsMember({"table", "structured"}))
            ->capture_default_str();
        cmd->add_flag("--dump-normalized", dump_normalized_flag,
                      "Print the config normalized to per-second rates and exit");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "Compute steady-state chain availability");
    add_common(analyze);
    analyze->add_option("--top-terms", top_terms, "Chain MUGF terms to print")
        ->capture_default_str();
    analyze->add_option("--prune", prune_analyze, "Probability floor for chain terms")
        ->capture_default_str();

    CLI::App* optimize_cmd =
        app.add_subcommand("optimize", "Find minimum-cost replica configurations");
    add_common(optimize_cmd);
    optimize_cmd->add_flag("--all", show_all, "Print every ledger entry");
    optimize_cmd->add_option("--prune", prune_optimize, "Probability floor during the sweep")
        ->capture_default_str();

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Cross-check availability by simulation");
    add_common(simulate_cmd);
    simulate_cmd->add_option("--seed", sim.seed, "Simulation seed")->capture_default_str();
    simulate_cmd->add_option("--horizon", sim.horizon, "Simulated seconds per replication")
        ->capture_default_str();
    simulate_cmd->add_option("--replications", sim.replications, "Independent replications")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        const AppConfig cfg = load_config(config_path);
        if (dump_normalized_flag) {
            out << dump_normalized(cfg);
            return kExitOk;
        }
        const ReportFormat format = parse_format(format_name);
        if (app.got_subcommand(analyze))
            return cmd_analyze(cfg, format, top_terms, prune_analyze, out);
        if (app.got_subcommand(optimize_cmd))
            return cmd_optimize(cfg, format, show_all, prune_optimize, out);
        return cmd_simulate(cfg, format, sim, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const UnstableQueueError& e) {
        err << "model error: " << e.what() << "\n";
        return kExitModelError;
    } catch (const ModelError& e) {
        err << "model error: " << e.what() << "\n";
        return kExitModelError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitModelError;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace chainavail
