#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mkperc/runner.hpp"

namespace mkperc {

// One sweep: vary a single SimConfig field over a value list, run
// `replicates` seeded replicates per value, and aggregate.
struct SweepSpec {
    std::string name = "sweep";
    SimConfig base;
    std::string axis;            // one of N, d_side, oh, pforg, p_change
    std::vector<double> values;  // axis values, one cell each
    std::size_t replicates = 5;
    std::uint64_t master_seed = 1;
    // When true, each cell gets max_ticks from a reference-time lookup
    // instead of base.max_ticks (see auto_max_ticks).
    bool auto_ticks = false;

    void validate() const;
};

// Summary statistics over the successful replicates of one cell.
struct Stat {
    double mean = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

Stat make_stat(const std::vector<double>& xs);

struct RunRecord {
    std::size_t cell = 0;
    std::size_t replicate = 0;
    double axis_value = 0.0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    RunSummary summary;
};

struct CellAggregate {
    double axis_value = 0.0;
    std::size_t runs_ok = 0;
    Stat condition_tick;  // first tick the heterogeneity condition holds
    Stat t_c;             // knowledge giant-cluster takeoff tick
    Stat p_c;             // knowledge arc fraction at t_c
    Stat n_b;             // knowledge arc count at t_c
    Stat meeting_t_c;     // meeting-network takeoff tick
    Stat meeting_p_c;     // meeting edge fraction at its takeoff
    Stat final_mk;
    Stat t_mk_50;
    Stat final_delta_mk;
    Stat mean_delta_mk;  // last-quarter mean
};

struct SweepResult {
    SweepSpec spec;
    std::vector<RunRecord> runs;    // cell-major, replicate-minor
    std::vector<CellAggregate> cells;
};

// Returns a copy of `base` with the axis field set to `value`.
// Integer axes require an integral value.
SimConfig apply_axis(const SimConfig& base, const std::string& axis,
                     double value);

// Tick budget for a cell: 5x the reference transition time for the
// nearest known (N, d_side, oh) setting, or an analytic estimate of the
// takeoff tick if that is larger. Runs still stop early at saturation.
Tick auto_max_ticks(const SimConfig& config);

// Executes all cells x replicates. Each run is seeded with
// derive_seed(master_seed, cell, replicate) and is independent of the
// others; `workers` > 1 runs them concurrently. A failed run is recorded
// and the sweep continues; only a cell with no surviving replicate aborts
// the sweep. With a non-empty out_dir, per-run outputs land in
// out_dir/cell<i>_rep<j>/ and the sweep writes summary.csv plus
// aggregates.csv.
SweepResult run_sweep(const SweepSpec& spec, const std::string& out_dir = "",
                      std::size_t workers = 1);

// Worker count from the MKPERC_WORKERS environment variable (default 1).
std::size_t workers_from_env();

// Named presets reproducing the reference experimental campaigns.
std::map<std::string, SweepSpec> experiment_catalog();

// Catalog lookup; throws ConfigError for unknown names.
SweepSpec preset_spec(const std::string& name);

void write_sweep_csv(const SweepResult& result, const std::string& dir);

}  // namespace mkperc
