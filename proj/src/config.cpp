#include "mkperc/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mkperc {

void SimConfig::validate() const {
    if (n_agents < 1) throw ConfigError("N must be >= 1");
    if (d_side < 1) throw ConfigError("d_side must be >= 1");
    if (ng < 1) throw ConfigError("ng must be >= 1");
    if (pforg < 0.0 || pforg > 1.0) throw ConfigError("pforg must be in [0,1]");
    if (p_change < 0.0 || p_change > 1.0)
        throw ConfigError("p_change must be in [0,1]");
    if (stop_pb_factor < 0.0) throw ConfigError("stop_pb_factor must be >= 0");
    if (!std::is_sorted(snapshot_ticks.begin(), snapshot_ticks.end()))
        throw ConfigError("snapshot_ticks must be sorted ascending");
}

std::string metric_name(Metric m) {
    return m == Metric::kChebyshev ? "chebyshev" : "euclidean";
}

Metric metric_from_name(const std::string& name) {
    if (name == "chebyshev") return Metric::kChebyshev;
    if (name == "euclidean") return Metric::kEuclidean;
    throw ConfigError("unknown metric '" + name +
                      "' (expected chebyshev or euclidean)");
}

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) {
        try {
            out = it->get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config field '") + key +
                              "': " + e.what());
        }
    }
}

}  // namespace

SimConfig parse_config_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");

    static const char* known[] = {
        "N",          "ng",   "d_side",        "m",
        "oh",         "pforg", "chgr",          "p_change",
        "seed",       "max_ticks", "snapshot_ticks", "metric",
        "snapshot_geometric", "stop_at_saturation", "stop_pb_factor",
        "cluster_refresh"};
    for (auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (auto* k : known) ok = ok || key == k;
        if (!ok) throw ConfigError("unknown config field '" + key + "'");
    }

    SimConfig cfg;
    read_field(j, "N", cfg.n_agents);
    read_field(j, "ng", cfg.ng);
    read_field(j, "d_side", cfg.d_side);
    read_field(j, "m", cfg.m);
    read_field(j, "oh", cfg.oh);
    read_field(j, "pforg", cfg.pforg);
    read_field(j, "chgr", cfg.chgr);
    read_field(j, "p_change", cfg.p_change);
    read_field(j, "seed", cfg.seed);
    read_field(j, "max_ticks", cfg.max_ticks);
    read_field(j, "snapshot_ticks", cfg.snapshot_ticks);
    if (j.contains("metric"))
        cfg.metric = metric_from_name(j["metric"].get<std::string>());
    read_field(j, "snapshot_geometric", cfg.snapshot_geometric);
    read_field(j, "stop_at_saturation", cfg.stop_at_saturation);
    read_field(j, "stop_pb_factor", cfg.stop_pb_factor);
    read_field(j, "cluster_refresh", cfg.cluster_refresh);
    cfg.validate();
    return cfg;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

std::string config_to_json(const SimConfig& cfg) {
    json j;
    j["N"] = cfg.n_agents;
    j["ng"] = cfg.ng;
    j["d_side"] = cfg.d_side;
    j["m"] = cfg.m;
    j["oh"] = cfg.oh;
    j["pforg"] = cfg.pforg;
    j["chgr"] = cfg.chgr;
    j["p_change"] = cfg.p_change;
    j["seed"] = cfg.seed;
    j["max_ticks"] = cfg.max_ticks;
    j["snapshot_ticks"] = cfg.snapshot_ticks;
    j["metric"] = metric_name(cfg.metric);
    j["snapshot_geometric"] = cfg.snapshot_geometric;
    j["stop_at_saturation"] = cfg.stop_at_saturation;
    j["stop_pb_factor"] = cfg.stop_pb_factor;
    j["cluster_refresh"] = cfg.cluster_refresh;
    return j.dump(2) + "\n";
}

}  // namespace mkperc
