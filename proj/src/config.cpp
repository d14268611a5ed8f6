#include "chainavail/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace chainavail {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ConfigError(path, msg);
}

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional = {}) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!required.count(key) && !optional.count(key))
            fail(path + "." + key, "unknown key");
    }
    for (const auto& key : required)
        if (!obj.contains(key)) fail(path + "." + key, "missing required key");
}

double get_number(const json& obj, const std::string& path) {
    if (!obj.is_number()) fail(path, "expected a number");
    return obj.get<double>();
}

int get_int(const json& obj, const std::string& path) {
    if (!obj.is_number_integer()) fail(path, "expected an integer");
    return obj.get<int>();
}

double unit_seconds(const std::string& units, const std::string& path) {
    if (units == "seconds") return 1.0;
    if (units == "minutes") return 60.0;
    if (units == "hours") return 3600.0;
    fail(path, "unknown units '" + units + "'");
}

// A rate field: {"value": v, "units": u}. Rate units (per_second, per_hour)
// are taken directly; time units mean the value is a mean time between
// events and the rate is its reciprocal (matching how MTTF/MTTR tables are
// usually published).
double parse_rate(const json& obj, const std::string& path) {
    require_keys(obj, path, {"value", "units"});
    const double v = get_number(obj.at("value"), path + ".value");
    if (!obj.at("units").is_string()) fail(path + ".units", "expected a string");
    const std::string units = obj.at("units").get<std::string>();
    if (v <= 0) fail(path + ".value", "must be positive");
    if (units == "per_second") return v;
    if (units == "per_hour") return v / 3600.0;
    return 1.0 / (v * unit_seconds(units, path + ".units"));
}

// A duration field; only time units are accepted.
double parse_duration(const json& obj, const std::string& path) {
    require_keys(obj, path, {"value", "units"});
    const double v = get_number(obj.at("value"), path + ".value");
    if (!obj.at("units").is_string()) fail(path + ".units", "expected a string");
    if (v <= 0) fail(path + ".value", "must be positive");
    return v * unit_seconds(obj.at("units").get<std::string>(), path + ".units");
}

json rate_field(double per_second) { return {{"value", per_second}, {"units", "per_second"}}; }
json duration_field(double seconds) { return {{"value", seconds}, {"units", "seconds"}}; }

}  // namespace

AppConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail("(document)", std::string("not valid JSON: ") + e.what());
    }
    require_keys(doc, "(root)", {"tenants", "layers", "tiers", "analysis"}, {"optimization"});

    AppConfig cfg;

    // --- tiers first: tenant n may be given per tier.
    const json& jtiers = doc.at("tiers");
    if (!jtiers.is_array() || jtiers.empty()) fail("tiers", "expected a non-empty array");
    const std::size_t tier_count = jtiers.size();

    // --- layers
    const json& jl = doc.at("layers");
    require_keys(jl, "layers", {"lambda_d", "mu_d", "lambda_i", "mu_i"});
    const double lambda_d = parse_rate(jl.at("lambda_d"), "layers.lambda_d");
    const double mu_d = parse_rate(jl.at("mu_d"), "layers.mu_d");
    const double lambda_i = parse_rate(jl.at("lambda_i"), "layers.lambda_i");
    const double mu_i = parse_rate(jl.at("mu_i"), "layers.mu_i");

    // --- tenants
    const json& jtenants = doc.at("tenants");
    if (!jtenants.is_array() || jtenants.empty()) fail("tenants", "expected a non-empty array");
    struct TenantRow {
        TenantSpec base;
        std::vector<int> n_per_tier;
    };
    std::vector<TenantRow> tenants;
    for (std::size_t i = 0; i < jtenants.size(); ++i) {
        const std::string path = "tenants[" + std::to_string(i) + "]";
        const json& jt = jtenants[i];
        require_keys(jt, path, {"id", "n", "lambda_c", "mu_c", "arrival_rate"},
                     {"cv_arrivals"});
        TenantRow row;
        row.base.tenant_id = get_int(jt.at("id"), path + ".id");
        if (row.base.tenant_id != static_cast<int>(i) + 1)
            fail(path + ".id", "tenant ids must be 1..K in order");
        if (jt.at("n").is_array()) {
            if (jt.at("n").size() != tier_count)
                fail(path + ".n", "per-tier n must list one value per tier");
            for (std::size_t m = 0; m < tier_count; ++m) {
                const int n = get_int(jt.at("n")[m], path + ".n[" + std::to_string(m) + "]");
                if (n < 1) fail(path + ".n[" + std::to_string(m) + "]", "must be >= 1");
                row.n_per_tier.push_back(n);
            }
        } else {
            const int n = get_int(jt.at("n"), path + ".n");
            if (n < 1) fail(path + ".n", "must be >= 1");
            row.n_per_tier.assign(tier_count, n);
        }
        row.base.lambda_c = parse_rate(jt.at("lambda_c"), path + ".lambda_c");
        row.base.mu_c = parse_rate(jt.at("mu_c"), path + ".mu_c");
        row.base.arrival_rate = parse_rate(jt.at("arrival_rate"), path + ".arrival_rate");
        row.base.cv_arrivals = 1.0;
        if (jt.contains("cv_arrivals")) {
            row.base.cv_arrivals = get_number(jt.at("cv_arrivals"), path + ".cv_arrivals");
            if (row.base.cv_arrivals < 0) fail(path + ".cv_arrivals", "must be >= 0");
        }
        tenants.push_back(std::move(row));
    }

    // --- tiers
    for (std::size_t m = 0; m < tier_count; ++m) {
        const std::string path = "tiers[" + std::to_string(m) + "]";
        const json& jt = jtiers[m];
        require_keys(jt, path,
                     {"name", "replicas", "gamma", "mean_service_time", "cv_service"});
        TierSpec tier;
        if (!jt.at("name").is_string()) fail(path + ".name", "expected a string");
        tier.name = jt.at("name").get<std::string>();
        tier.replicas = get_int(jt.at("replicas"), path + ".replicas");
        if (tier.replicas < 1) fail(path + ".replicas", "must be >= 1");
        tier.cnf.gamma = get_int(jt.at("gamma"), path + ".gamma");
        if (tier.cnf.gamma < 1) fail(path + ".gamma", "must be >= 1");
        tier.service.mean_service_time =
            parse_duration(jt.at("mean_service_time"), path + ".mean_service_time");
        tier.service.cv_service = get_number(jt.at("cv_service"), path + ".cv_service");
        if (tier.service.cv_service < 0) fail(path + ".cv_service", "must be >= 0");
        tier.cnf.lambda_d = lambda_d;
        tier.cnf.mu_d = mu_d;
        tier.cnf.lambda_i = lambda_i;
        tier.cnf.mu_i = mu_i;
        for (const auto& row : tenants) {
            TenantSpec t = row.base;
            t.n = row.n_per_tier[m];
            tier.cnf.tenants.push_back(t);
        }
        cfg.chain.tiers.push_back(std::move(tier));
    }

    // --- analysis
    const json& ja = doc.at("analysis");
    require_keys(ja, "analysis", {}, {"d_max", "thresholds", "prune_threshold"});
    if (ja.contains("d_max") == ja.contains("thresholds"))
        fail("analysis", "exactly one of d_max or thresholds is required");
    if (ja.contains("d_max")) {
        const double w = parse_duration(ja.at("d_max"), "analysis.d_max");
        cfg.chain.thresholds.assign(tenants.size(), w);
    } else {
        const json& jw = ja.at("thresholds");
        if (!jw.is_array() || jw.size() != tenants.size())
            fail("analysis.thresholds", "expected one threshold per tenant");
        for (std::size_t i = 0; i < jw.size(); ++i)
            cfg.chain.thresholds.push_back(
                parse_duration(jw[i], "analysis.thresholds[" + std::to_string(i) + "]"));
    }
    if (ja.contains("prune_threshold")) {
        cfg.analysis.prune_threshold =
            get_number(ja.at("prune_threshold"), "analysis.prune_threshold");
        if (cfg.analysis.prune_threshold < 0 || cfg.analysis.prune_threshold >= 1)
            fail("analysis.prune_threshold", "must lie in [0, 1)");
    }

    // --- optimization (optional)
    if (doc.contains("optimization")) {
        const json& jo = doc.at("optimization");
        require_keys(jo, "optimization", {"availability_target", "max_replicas"}, {"costs"});
        cfg.optimization.present = true;
        cfg.optimization.availability_target =
            get_number(jo.at("availability_target"), "optimization.availability_target");
        if (cfg.optimization.availability_target <= 0 ||
            cfg.optimization.availability_target >= 1)
            fail("optimization.availability_target", "must lie in (0, 1)");
        cfg.optimization.max_replicas = get_int(jo.at("max_replicas"), "optimization.max_replicas");
        if (cfg.optimization.max_replicas < 1)
            fail("optimization.max_replicas", "must be >= 1");
        if (jo.contains("costs")) {
            const json& jc = jo.at("costs");
            if (!jc.is_array() || jc.size() != tier_count)
                fail("optimization.costs", "expected one cost per tier");
            for (std::size_t m = 0; m < tier_count; ++m) {
                const double c = get_number(jc[m], "optimization.costs[" + std::to_string(m) + "]");
                if (c < 0) fail("optimization.costs[" + std::to_string(m) + "]", "must be >= 0");
                cfg.optimization.costs.per_tier_cost.push_back(c);
            }
        }
    }

    try {
        cfg.chain.validate();
    } catch (const ModelError& e) {
        fail("(chain)", e.what());
    }
    return cfg;
}

AppConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string dump_normalized(const AppConfig& cfg) {
    json doc;
    const auto& tiers = cfg.chain.tiers;
    const auto& tenants = tiers.front().cnf.tenants;

    doc["tenants"] = json::array();
    for (std::size_t i = 0; i < tenants.size(); ++i) {
        json jt;
        jt["id"] = tenants[i].tenant_id;
        bool same_n = true;
        for (const auto& tier : tiers)
            if (tier.cnf.tenants[i].n != tenants[i].n) same_n = false;
        if (same_n) {
            jt["n"] = tenants[i].n;
        } else {
            json arr = json::array();
            for (const auto& tier : tiers) arr.push_back(tier.cnf.tenants[i].n);
            jt["n"] = arr;
        }
        jt["lambda_c"] = rate_field(tenants[i].lambda_c);
        jt["mu_c"] = rate_field(tenants[i].mu_c);
        jt["arrival_rate"] = rate_field(tenants[i].arrival_rate);
        jt["cv_arrivals"] = tenants[i].cv_arrivals;
        doc["tenants"].push_back(jt);
    }

    doc["layers"] = {{"lambda_d", rate_field(tiers.front().cnf.lambda_d)},
                     {"mu_d", rate_field(tiers.front().cnf.mu_d)},
                     {"lambda_i", rate_field(tiers.front().cnf.lambda_i)},
                     {"mu_i", rate_field(tiers.front().cnf.mu_i)}};

    doc["tiers"] = json::array();
    for (const auto& tier : tiers) {
        json jt;
        jt["name"] = tier.name;
        jt["replicas"] = tier.replicas;
        jt["gamma"] = tier.cnf.gamma;
        jt["mean_service_time"] = duration_field(tier.service.mean_service_time);
        jt["cv_service"] = tier.service.cv_service;
        doc["tiers"].push_back(jt);
    }

    json jw = json::array();
    for (double w : cfg.chain.thresholds) jw.push_back(duration_field(w));
    doc["analysis"] = {{"thresholds", jw}, {"prune_threshold", cfg.analysis.prune_threshold}};

    if (cfg.optimization.present) {
        json jo;
        jo["availability_target"] = cfg.optimization.availability_target;
        jo["max_replicas"] = cfg.optimization.max_replicas;
        if (!cfg.optimization.costs.per_tier_cost.empty())
            jo["costs"] = cfg.optimization.costs.per_tier_cost;
        doc["optimization"] = jo;
    }
    return doc.dump(2) + "\n";
}

}  // namespace chainavail
