#include "mkperc/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"

#include "mkperc/csvio.hpp"
#include "mkperc/manifest.hpp"
#include "mkperc/network.hpp"
#include "mkperc/pajek.hpp"
#include "mkperc/tracker.hpp"

namespace mkperc {

namespace {

namespace fs = std::filesystem;

constexpr double kSaturation = 0.999;

std::set<Tick> snapshot_schedule(const SimConfig& config) {
    std::set<Tick> ticks(config.snapshot_ticks.begin(),
                         config.snapshot_ticks.end());
    if (config.snapshot_geometric)
        for (std::uint64_t t = 1; t <= config.max_ticks; t *= 2)
            ticks.insert(static_cast<Tick>(t));
    ticks.erase(0);
    return ticks;
}

void export_snapshot(const SimState& state, const fs::path& dir,
                     std::vector<std::string>& written) {
    const NetworkSnapshot snap = capture(state);
    const std::string stem = "t" + std::to_string(snap.tick);
    const std::string meet_net = "snapshots/" + stem + "_meeting.net";
    const std::string meet_csv = "snapshots/" + stem + "_meeting.csv";
    const std::string know_net = "snapshots/" + stem + "_knowledge.net";
    const std::string know_csv = "snapshots/" + stem + "_knowledge.csv";
    export_pajek(snap.meeting, (dir / meet_net).string());
    export_csv(snap.meeting, (dir / meet_csv).string());
    export_pajek(snap.knowledge, (dir / know_net).string());
    export_csv(snap.knowledge, (dir / know_csv).string());
    written.insert(written.end(), {meet_net, meet_csv, know_net, know_csv});
}

nlohmann::json threshold_json(const ThresholdEstimate& e) {
    nlohmann::json j;
    j["directed"] = e.directed;
    j["condition_tick"] =
        e.condition_tick ? nlohmann::json(*e.condition_tick) : nullptr;
    j["t_c"] = e.t_c ? nlohmann::json(*e.t_c) : nullptr;
    j["p_c"] = e.p_c ? nlohmann::json(*e.p_c) : nullptr;
    j["n_b"] = e.n_b ? nlohmann::json(*e.n_b) : nullptr;
    j["class_tick"] = e.class_tick ? nlohmann::json(*e.class_tick) : nullptr;
    j["max_psg_below"] = e.max_psg_below;
    j["max_pbg_below"] = e.max_pbg_below;
    j["site_percolation"] = e.site_percolation;
    j["link_percolation"] = e.link_percolation;
    j["classification"] = e.classification;
    j["beta"] = e.beta ? nlohmann::json(*e.beta) : nullptr;
    j["beta_residual"] =
        e.beta_residual ? nlohmann::json(*e.beta_residual) : nullptr;
    if (!e.diagnostic.empty()) j["diagnostic"] = e.diagnostic;
    return j;
}

nlohmann::json powerlaw_json(const std::optional<PowerLawFit>& fit) {
    if (!fit) return nullptr;
    return nlohmann::json{{"slope", fit->slope}, {"r2", fit->r2}};
}

}  // namespace

RunSummary run_single(const SimConfig& config, const std::string& out_dir) {
    config.validate();
    RunSummary summary;
    summary.config = config;
    summary.out_dir = out_dir;

    const bool writing = !out_dir.empty();
    const fs::path dir(out_dir);
    std::vector<std::string> written;
    std::ofstream metrics;
    if (writing) {
        fs::create_directories(dir / "snapshots");
        metrics.open(dir / "metrics.csv", std::ios::binary);
        if (!metrics)
            throw IoError("cannot open for writing: " +
                          (dir / "metrics.csv").string());
        metrics << metrics_csv_header() << '\n';
        written.push_back("metrics.csv");
    }

    RunManifest manifest;
    manifest.config = config;
    manifest.master_seed = config.seed;
    manifest.started_at = iso8601_utc_now();

    SimState state = init_world(config);
    MetricsTracker tracker(state, config);
    const std::set<Tick> snapshots = snapshot_schedule(config);

    // Compact per-tick record for the summary fields; indexed by tick.
    struct Scalar {
        double mk, meeting_rate, delta_mk;
    };
    std::vector<Scalar> scalars;
    scalars.reserve(std::min<std::uint64_t>(config.max_ticks + 1, 1 << 20));

    const auto emit = [&](bool exact) {
        const MetricsRow row = tracker.sample(state, exact);
        if (writing) metrics << metrics_csv_line(row) << '\n';
        scalars.push_back({row.mk, row.meeting_rate, row.delta_mk});
        if (row.delta_mk != 0.0) summary.delta_mk_all_zero = false;
        return row;
    };

    emit(true);

    bool takeoff_seen = false;
    double live_pc = 0.0;
    Tick last_snapshot_exported = 0;
    summary.stop_reason = "max_ticks";
    for (Tick t = 1; t <= config.max_ticks; ++t) {
        step(state, config, &tracker);
        const bool snap = snapshots.count(t) > 0;
        const MetricsRow row = emit(snap);
        if (snap && writing) {
            export_snapshot(state, dir, written);
            last_snapshot_exported = t;
        }
        if (config.stop_at_saturation && row.mk >= kSaturation &&
            row.meeting_rate >= kSaturation) {
            summary.stop_reason = "saturation";
            break;
        }
        if (config.stop_pb_factor > 0.0) {
            if (!takeoff_seen && row.psg >= kGiantCutoff) {
                takeoff_seen = true;
                live_pc = row.pb;
            }
            if (takeoff_seen && row.pb >= config.stop_pb_factor * live_pc) {
                summary.stop_reason = "pb_margin";
                break;
            }
        }
    }
    summary.ticks_run = state.tick;

    const NetworkSnapshot final_snap = capture(state);
    if (writing && last_snapshot_exported != state.tick && state.tick > 0) {
        export_snapshot(state, dir, written);
    }

    summary.knowledge = detect_threshold(tracker.knowledge_series());
    summary.meeting = detect_threshold(tracker.meeting_series());
    summary.final_mk = scalars.back().mk;
    summary.final_meeting_rate = scalars.back().meeting_rate;
    summary.final_delta_mk = scalars.back().delta_mk;

    for (Tick t = 0; t < scalars.size(); ++t) {
        if (!summary.t_mk_50 && scalars[t].mk >= 0.5)
            summary.t_mk_50 = t;
        if (!summary.t_mk_999 && scalars[t].mk >= kSaturation)
            summary.t_mk_999 = t;
        if (!summary.t_meeting_999 && scalars[t].meeting_rate >= kSaturation)
            summary.t_meeting_999 = t;
    }
    if (summary.knowledge.t_c && *summary.knowledge.t_c < scalars.size()) {
        summary.mk_at_tc = scalars[*summary.knowledge.t_c].mk;
        summary.meeting_rate_at_tc =
            scalars[*summary.knowledge.t_c].meeting_rate;
    }
    const std::size_t quarter_start = scalars.size() - scalars.size() / 4;
    double dmk_min = scalars.back().delta_mk;
    double dmk_sum = 0.0;
    std::size_t dmk_count = 0;
    for (std::size_t i = quarter_start; i < scalars.size(); ++i) {
        dmk_min = std::min(dmk_min, scalars[i].delta_mk);
        dmk_sum += scalars[i].delta_mk;
        ++dmk_count;
    }
    summary.last_quarter_min_delta_mk = dmk_min;
    summary.last_quarter_mean_delta_mk =
        dmk_count > 0 ? dmk_sum / dmk_count : 0.0;

    summary.knowledge_powerlaw =
        degree_distribution_fit(degree_stats(final_snap.knowledge).histogram);
    summary.meeting_powerlaw =
        degree_distribution_fit(degree_stats(final_snap.meeting).histogram);
    summary.largest_strong_component = largest_strong_component(
        final_snap.knowledge.n, final_snap.knowledge.arc_list());
    summary.final_state_digest = state_digest(state);
    summary.event_digest = state.event_digest.digest();

    if (writing) {
        if (!metrics) throw IoError("write failed: metrics.csv");
        metrics.close();

        nlohmann::json report;
        report["config"] = nlohmann::json::parse(config_to_json(config));
        report["seed"] = config.seed;
        report["ticks_run"] = summary.ticks_run;
        report["stop_reason"] = summary.stop_reason;
        report["final"] = {{"mk", summary.final_mk},
                           {"meeting_rate", summary.final_meeting_rate},
                           {"delta_mk", summary.final_delta_mk}};
        if (summary.t_mk_50)
            report["t_mk_50"] = *summary.t_mk_50;
        if (summary.t_mk_999)
            report["t_mk_999"] = *summary.t_mk_999;
        if (summary.t_meeting_999)
            report["t_meeting_999"] = *summary.t_meeting_999;
        report["knowledge"] = threshold_json(summary.knowledge);
        report["knowledge"]["powerlaw"] =
            powerlaw_json(summary.knowledge_powerlaw);
        report["knowledge"]["largest_strong_component"] =
            summary.largest_strong_component;
        report["meeting"] = threshold_json(summary.meeting);
        report["meeting"]["powerlaw"] = powerlaw_json(summary.meeting_powerlaw);
        {
            std::ofstream f(dir / "threshold_report.json", std::ios::binary);
            if (!f)
                throw IoError("cannot open for writing: " +
                              (dir / "threshold_report.json").string());
            f << report.dump(2) << '\n';
            if (!f) throw IoError("write failed: threshold_report.json");
        }
        written.push_back("threshold_report.json");

        manifest.finished_at = iso8601_utc_now();
        write_manifest(manifest, out_dir, written);
    }
    return summary;
}

std::string threshold_to_json(const ThresholdEstimate& estimate) {
    return threshold_json(estimate).dump();
}

}  // namespace mkperc
