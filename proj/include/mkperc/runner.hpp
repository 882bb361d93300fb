#pragma once

#include <optional>
#include <string>

#include "mkperc/percolation.hpp"
#include "mkperc/sim.hpp"

namespace mkperc {

// Everything downstream consumers need from one finished run. The full
// per-tick series lives in the run directory's metrics.csv, not here.
struct RunSummary {
    SimConfig config;
    Tick ticks_run = 0;
    std::string stop_reason;  // "max_ticks" | "saturation" | "pb_margin"
    ThresholdEstimate knowledge;
    ThresholdEstimate meeting;
    double final_mk = 0.0;
    double final_meeting_rate = 0.0;
    double final_delta_mk = 0.0;
    std::optional<Tick> t_mk_50;        // first tick MK >= 0.5
    std::optional<Tick> t_mk_999;       // first tick MK >= 0.999
    std::optional<Tick> t_meeting_999;  // first tick meeting_rate >= 0.999
    double mk_at_tc = 0.0;              // MK at the knowledge takeoff t_c
    double meeting_rate_at_tc = 0.0;
    double last_quarter_min_delta_mk = 0.0;
    double last_quarter_mean_delta_mk = 0.0;
    bool delta_mk_all_zero = true;
    std::optional<PowerLawFit> knowledge_powerlaw;
    std::optional<PowerLawFit> meeting_powerlaw;
    std::uint32_t largest_strong_component = 0;
    std::uint64_t final_state_digest = 0;
    std::uint64_t event_digest = 0;
    std::string out_dir;
};

// Runs one simulation to max_ticks or an early stop. With a non-empty
// out_dir, writes metrics.csv (one row per tick), snapshots/ (Pajek + CSV at
// geometric ticks, requested ticks, and the final tick), a
// threshold_report.json, and a manifest.json with content hashes.
RunSummary run_single(const SimConfig& config, const std::string& out_dir = "");

// Serialized JSON object for one ThresholdEstimate, matching the blocks
// embedded in threshold_report.json.
std::string threshold_to_json(const ThresholdEstimate& estimate);

}  // namespace mkperc
