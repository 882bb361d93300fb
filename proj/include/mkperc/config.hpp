#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mkperc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvariantError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Metric { kChebyshev, kEuclidean };

// All Table-1 parameters plus the run schedule. A (SimConfig, seed) pair pins
// an entire run; every random draw derives from `seed`.
struct SimConfig {
    std::uint32_t n_agents = 1000;  // N
    std::uint32_t ng = 2;           // group count
    std::uint32_t d_side = 5000;    // grid is d_side x d_side cells, toroidal
    std::uint32_t m = 100;          // mobility: per-tick step is U[-m, m] per axis
    std::uint32_t oh = 0;           // overhearing radius in cells
    double pforg = 0.0;             // per-agent per-tick forgetting probability
    bool chgr = false;              // enable random group change
    double p_change = 0.0;          // per-agent per-tick group-change probability
    std::uint64_t seed = 1;
    std::uint32_t max_ticks = 10000;
    std::vector<std::uint32_t> snapshot_ticks;  // extra user-requested ticks
    Metric metric = Metric::kChebyshev;

    // Run plumbing, not Table-1 parameters.
    bool snapshot_geometric = true;   // also snapshot at ticks 1,2,4,8,...
    bool stop_at_saturation = true;   // stop once MK and meeting rate >= 0.999
    double stop_pb_factor = 0.0;      // >0: stop once knowledge P_b >= factor * takeoff p_c
    std::uint32_t cluster_refresh = 100;  // cluster-metric refresh period when pforg > 0

    void validate() const;
};

// Parses the JSON config file format documented in the README. Field names
// mirror SimConfig (Table-1 abbreviations: N, ng, d_side, m, oh, pforg, chgr,
// p_change). Unknown keys are rejected.
SimConfig load_config(const std::string& path);
SimConfig parse_config_json(const std::string& text);
std::string config_to_json(const SimConfig& cfg);

std::string metric_name(Metric m);
Metric metric_from_name(const std::string& name);

}  // namespace mkperc
