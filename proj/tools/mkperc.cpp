#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mkperc/csvio.hpp"
#include "mkperc/experiments.hpp"
#include "mkperc/manifest.hpp"
#include "mkperc/pajek.hpp"
#include "mkperc/runner.hpp"

namespace fs = std::filesystem;
using namespace mkperc;

namespace {

const char* const kConfigReference = R"(configuration fields (JSON object for `run --config` and the sweep spec's "base"):
  N                   agent count, >= 1; studied populations 1000, 10000, 100000 (default 1000)
  ng                  number of groups, >= 1; studied value 2 (default 2)
  d_side              grid side; the world is d_side x d_side cells with toroidal wraparound;
                      studied sides 1000, 5000, 10000 (default 5000)
  m                   per-tick movement radius in cells (L-infinity step); 0 freezes agents;
                      studied mobilities 100, 300, 600, 1000 (default 100)
  oh                  overhearing radius in cells; agents within this radius meet;
                      studied values 0, 1, 2, 3, 4 (default 0)
  pforg               per-agent per-tick probability of forgetting one known entry, in [0,1];
                      studied values 0.001, 0.1, 0.5, 0.7 (default 0)
  chgr                enable random group changes, true/false (default false)
  p_change            per-agent per-tick probability of switching group when chgr is true,
                      in [0,1]; studied values up to 0.01 (default 0)
  seed                RNG seed; a run is a pure function of the full config (default 1)
  max_ticks           tick budget (default 10000)
  snapshot_ticks      ascending list of extra ticks at which networks are exported (default [])
  metric              meeting distance, "chebyshev" or "euclidean" (default "chebyshev")
  snapshot_geometric  also export networks at ticks 1, 2, 4, 8, ... (default true)
  stop_at_saturation  stop early once MK and meeting rate both reach 0.999 (default true)
  stop_pb_factor      if > 0, stop once the knowledge-network link fraction exceeds
                      factor * p_c after the giant-cluster takeoff (default 0 = off)
  cluster_refresh     ticks between exact cluster recomputations when pforg > 0 (default 100)

environment:
  MKPERC_WORKERS      worker threads for sweeps (default 1))";

std::string opt_str(const std::optional<Tick>& v) {
    return v ? std::to_string(*v) : std::string("-");
}

std::string opt_str(const std::optional<double>& v) {
    if (!v) return "-";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", *v);
    return buf;
}

std::string opt_str(const std::optional<std::uint64_t>& v) {
    return v ? std::to_string(*v) : std::string("-");
}

void print_estimate(const char* label, const ThresholdEstimate& e) {
    std::cout << label << ": condition_tick=" << opt_str(e.condition_tick)
              << " t_c=" << opt_str(e.t_c) << " p_c=" << opt_str(e.p_c)
              << " n_b=" << opt_str(e.n_b) << " classification=\""
              << e.classification << "\"";
    if (e.beta) std::cout << " beta=" << opt_str(e.beta);
    std::cout << "\n";
    if (!e.diagnostic.empty())
        std::cout << "  note: " << e.diagnostic << "\n";
}

void print_summary(const RunSummary& s) {
    std::cout << "ticks_run=" << s.ticks_run << " stop=" << s.stop_reason
              << " final_mk=" << s.final_mk
              << " final_meeting_rate=" << s.final_meeting_rate
              << " final_delta_mk=" << s.final_delta_mk << "\n";
    print_estimate("knowledge", s.knowledge);
    print_estimate("meeting", s.meeting);
    if (!s.out_dir.empty()) std::cout << "outputs: " << s.out_dir << "\n";
}

int do_run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
           const std::string& out_dir) {
    SimConfig config = load_config(config_path);
    if (seed) config.seed = *seed;
    const RunSummary summary = run_single(config, out_dir);
    print_summary(summary);
    return 0;
}

SweepSpec spec_from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open sweep spec file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("sweep spec is not valid JSON: ") +
                          e.what());
    }
    if (!j.is_object()) throw ConfigError("sweep spec root must be an object");

    SweepSpec spec;
    try {
        if (j.contains("name")) spec.name = j["name"].get<std::string>();
        if (j.contains("base")) spec.base = parse_config_json(j["base"].dump());
        if (j.contains("axis")) spec.axis = j["axis"].get<std::string>();
        if (j.contains("values"))
            spec.values = j["values"].get<std::vector<double>>();
        if (j.contains("replicates"))
            spec.replicates = j["replicates"].get<std::size_t>();
        if (j.contains("master_seed"))
            spec.master_seed = j["master_seed"].get<std::uint64_t>();
        if (j.contains("auto_ticks"))
            spec.auto_ticks = j["auto_ticks"].get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad sweep spec field: ") + e.what());
    }
    return spec;
}

int do_sweep(const std::string& preset, const std::string& spec_path,
             const std::string& out_dir, double max_n,
             const std::optional<std::size_t>& replicates,
             const std::optional<std::uint64_t>& master_seed) {
    if (preset.empty() == spec_path.empty())
        throw ConfigError("sweep needs exactly one of --preset or --spec");

    SweepSpec spec =
        preset.empty() ? spec_from_file(spec_path) : preset_spec(preset);
    if (replicates) spec.replicates = *replicates;
    if (master_seed) spec.master_seed = *master_seed;

    if (spec.axis == "N") {
        std::vector<double> kept;
        for (double v : spec.values)
            if (v <= max_n) kept.push_back(v);
        if (kept.empty())
            throw ConfigError("--max-n " + std::to_string(max_n) +
                              " filters out every cell");
        spec.values = std::move(kept);
    }

    const std::size_t workers = workers_from_env();
    std::cout << "sweep " << spec.name << ": axis " << spec.axis << ", "
              << spec.values.size() << " cells x " << spec.replicates
              << " replicates, " << workers << " worker(s)\n";

    const SweepResult result = run_sweep(spec, out_dir, workers);

    for (std::size_t i = 0; i < result.cells.size(); ++i) {
        const CellAggregate& cell = result.cells[i];
        std::cout << spec.axis << "=" << cell.axis_value << ": ok "
                  << cell.runs_ok << "/" << spec.replicates;
        if (cell.t_c.count > 0)
            std::cout << ", t_c " << cell.t_c.mean << " +- " << cell.t_c.stddev;
        if (cell.p_c.count > 0)
            std::cout << ", p_c " << cell.p_c.mean << " +- " << cell.p_c.stddev;
        std::cout << ", final_mk " << cell.final_mk.mean << "\n";
    }
    if (!out_dir.empty())
        std::cout << "outputs: " << out_dir << "/summary.csv, " << out_dir
                  << "/aggregates.csv\n";
    return 0;
}

struct SnapshotFile {
    Tick tick = 0;
    fs::path path;
};

// Newest exported snapshot matching t<tick>_<kind>.net under dir/snapshots.
std::optional<SnapshotFile> latest_snapshot(const std::string& dir,
                                            const std::string& kind) {
    const fs::path base = fs::path(dir) / "snapshots";
    if (!fs::is_directory(base)) return std::nullopt;
    std::optional<SnapshotFile> best;
    const std::string suffix = "_" + kind + ".net";
    for (const auto& entry : fs::directory_iterator(base)) {
        const std::string name = entry.path().filename().string();
        if (name.size() <= suffix.size() + 1 || name[0] != 't') continue;
        if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) !=
            0)
            continue;
        const std::string digits =
            name.substr(1, name.size() - suffix.size() - 1);
        if (digits.empty() ||
            digits.find_first_not_of("0123456789") != std::string::npos)
            continue;
        const Tick tick = static_cast<Tick>(std::stoull(digits));
        if (!best || tick > best->tick) best = SnapshotFile{tick, entry.path()};
    }
    return best;
}

nlohmann::json network_json(const PercolationPoint& point,
                            const DegreeStats& stats,
                            const std::optional<PowerLawFit>& fit) {
    nlohmann::json j;
    j["tick"] = point.tick;
    j["links"] = point.link_count;
    j["ps"] = point.ps;
    j["pb"] = point.pb;
    j["psg"] = point.psg;
    j["pbg"] = point.pbg;
    if (point.k_defined) j["k_condition"] = point.k_condition;
    j["mean_k"] = point.directed ? stats.mean_kin + stats.mean_kout
                                 : stats.mean_k;
    if (fit) {
        j["powerlaw"] = {{"slope", fit->slope}, {"r2", fit->r2}};
    } else {
        j["powerlaw"] = nullptr;
    }
    return j;
}

int do_analyze(const std::string& in_dir) {
    const std::string metrics_path = in_dir + "/metrics.csv";
    if (!fs::exists(metrics_path))
        throw ConfigError("no metrics.csv under " + in_dir);
    const std::vector<MetricsRow> rows = read_metrics_csv(metrics_path);

    std::vector<PercolationPoint> knowledge;
    std::vector<PercolationPoint> meeting;
    knowledge.reserve(rows.size());
    meeting.reserve(rows.size());
    for (const MetricsRow& row : rows) {
        PercolationPoint k;
        k.tick = row.tick;
        k.directed = true;
        k.k_defined = row.k_dir_defined;
        k.k_condition = row.k_dir;
        k.percolating = row.k_dir_defined && row.k_dir > 1.0;
        k.ps = row.ps;
        k.pb = row.pb;
        k.psg = row.psg;
        k.pbg = row.pbg;
        k.link_count = row.arcs;
        knowledge.push_back(k);

        PercolationPoint m;
        m.tick = row.tick;
        m.directed = false;
        m.k_defined = row.k_undir_defined;
        m.k_condition = row.k_undir;
        m.percolating = row.k_undir_defined && row.k_undir > 2.0;
        m.ps = row.ps_meet;
        m.pb = row.pb_meet;
        m.psg = row.psg_meet;
        m.pbg = row.pbg_meet;
        m.link_count = row.edges;
        meeting.push_back(m);
    }

    const ThresholdEstimate know_est = detect_threshold(knowledge);
    const ThresholdEstimate meet_est = detect_threshold(meeting);

    nlohmann::json report;
    report["rows"] = rows.size();
    report["knowledge"] = nlohmann::json::parse(threshold_to_json(know_est));
    report["meeting"] = nlohmann::json::parse(threshold_to_json(meet_est));

    if (const auto snap = latest_snapshot(in_dir, "meeting")) {
        const PajekGraph graph = load_pajek(snap->path.string());
        MeetingNetwork net;
        net.n = graph.n;
        for (const auto& [key, weight] : graph.links) net.edges[key] = weight;
        const DegreeStats stats = degree_stats(net);
        report["final_meeting_network"] =
            network_json(percolation_point(net, snap->tick), stats,
                         degree_distribution_fit(stats.histogram));
    }
    if (const auto snap = latest_snapshot(in_dir, "knowledge")) {
        const PajekGraph graph = load_pajek(snap->path.string());
        KnowledgeNetwork net;
        net.n = graph.n;
        for (const auto& [key, weight] : graph.links)
            net.arcs[key] = Belief{0, 0};
        const DegreeStats stats = degree_stats(net);
        report["final_knowledge_network"] =
            network_json(percolation_point(net, snap->tick), stats,
                         degree_distribution_fit(stats.histogram));
        report["final_knowledge_network"]["largest_strong_component"] =
            largest_strong_component(net.n, net.arc_list());
    }

    const std::string out_path = in_dir + "/analysis_report.json";
    {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IoError("cannot write " + out_path);
        out << report.dump(2) << "\n";
        if (!out) throw IoError("write failed: " + out_path);
    }

    std::cout << "analyzed " << rows.size() << " metric rows from " << in_dir
              << "\n";
    print_estimate("knowledge", know_est);
    print_estimate("meeting", meet_est);
    std::cout << "report: " << out_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "mkperc: mutual-knowledge simulator and dynamic-network percolation "
        "analyzer"};
    app.set_version_flag("--version", std::string(kVersion));
    app.footer(kConfigReference);
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string run_out;
    CLI::App* run_cmd =
        app.add_subcommand("run", "Run one simulation from a JSON config");
    run_cmd->add_option("--config", config_path, "JSON config file")
        ->required();
    run_cmd->add_option("--seed", seed, "override the config's RNG seed");
    run_cmd->add_option("--out", run_out,
                        "output directory (metrics.csv, snapshots/, "
                        "threshold_report.json, manifest.json)");

    std::string preset;
    std::string spec_path;
    std::string sweep_out;
    double max_n = 10000;
    std::optional<std::size_t> replicates;
    std::optional<std::uint64_t> master_seed;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Run a replicated parameter sweep (preset or spec file)");
    sweep_cmd->add_option("--preset", preset,
                          "named preset: scaling, density, overhearing, "
                          "forgetting, churn, churn-population, "
                          "churn-density, curves");
    sweep_cmd->add_option("--spec", spec_path, "JSON sweep spec file");
    sweep_cmd->add_option("--out", sweep_out, "output directory");
    sweep_cmd->add_option(
        "--max-n", max_n,
        "skip cells with more than this many agents (axis N only)");
    sweep_cmd->add_option("--replicates", replicates,
                          "override replicates per cell");
    sweep_cmd->add_option("--master-seed", master_seed,
                          "override the sweep's master seed");

    std::string in_dir;
    CLI::App* analyze_cmd = app.add_subcommand(
        "analyze", "Re-analyze a finished run directory's outputs");
    analyze_cmd->add_option("--in", in_dir, "run directory to analyze")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run_cmd->parsed()) return do_run(config_path, seed, run_out);
        if (sweep_cmd->parsed())
            return do_sweep(preset, spec_path, sweep_out, max_n, replicates,
                            master_seed);
        if (analyze_cmd->parsed()) return do_analyze(in_dir);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
