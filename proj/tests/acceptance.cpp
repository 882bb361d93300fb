// End-to-end acceptance gate: one PASS/FAIL line per criterion, nonzero
// exit when any fail. Expect a few minutes of runtime single-threaded;
// MKPERC_WORKERS parallelizes the sweep phases.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mkperc/experiments.hpp"
#include "mkperc/network.hpp"
#include "mkperc/percolation.hpp"
#include "mkperc/rng.hpp"
#include "mkperc/sim.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace mkperc;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

void note(const std::string& line) {
    std::printf("# %s\n", line.c_str());
    std::fflush(stdout);
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.5g", v);
    return buf;
}

struct Phase {
    std::optional<SweepResult> result;
    std::string error;
};

Phase run_phase(const std::string& label, const SweepSpec& spec,
                std::size_t workers) {
    note("running " + label + ": " + std::to_string(spec.values.size()) +
         " cell(s) x " + std::to_string(spec.replicates) + " replicates");
    Phase phase;
    try {
        phase.result = run_sweep(spec, "", workers);
    } catch (const std::exception& e) {
        phase.error = e.what();
        note(label + " aborted: " + phase.error);
    }
    return phase;
}

std::vector<const RunSummary*> cell_runs(const SweepResult& result,
                                         std::size_t cell) {
    std::vector<const RunSummary*> out;
    for (const RunRecord& rec : result.runs)
        if (rec.cell == cell && rec.ok) out.push_back(&rec.summary);
    return out;
}

template <typename T>
std::string span(const std::vector<T>& xs) {
    if (xs.empty()) return "none";
    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
    return "[" + num(static_cast<double>(*lo)) + ", " +
           num(static_cast<double>(*hi)) + "]";
}

bool close_double(double a, double b) { return std::fabs(a - b) <= 1e-9; }

bool same_stats(const DegreeStats& a, const DegreeStats& b) {
    return close_double(a.mean_k, b.mean_k) &&
           close_double(a.mean_k2, b.mean_k2) &&
           close_double(a.mean_kin, b.mean_kin) &&
           close_double(a.mean_kout, b.mean_kout) &&
           close_double(a.mean_kin_kout, b.mean_kin_kout) &&
           a.histogram == b.histogram;
}

bool same_giant(GiantCluster a, GiantCluster b) {
    std::sort(a.nodes.begin(), a.nodes.end());
    std::sort(b.nodes.begin(), b.nodes.end());
    std::sort(a.links.begin(), a.links.end());
    std::sort(b.links.begin(), b.links.end());
    return a.nodes == b.nodes && a.links == b.links;
}

struct OracleOutcome {
    int graphs = 0;
    int placements = 0;
    bool graphs_ok = true;
    bool placements_ok = true;
    bool determinism_ok = false;
    std::string error;
};

OracleOutcome run_oracle_suites() {
    OracleOutcome out;
    Rng rng(20260814);
    const double densities[] = {0.0, 0.05, 0.15, 0.4, 0.9};

    for (int trial = 0; trial < 300 && out.graphs_ok; ++trial) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.bounded(30));
        const double p = densities[trial % 5];
        MeetingNetwork net;
        net.n = n;
        std::vector<std::pair<AgentId, AgentId>> edges;
        for (AgentId i = 0; i < n; ++i)
            for (AgentId j = i + 1; j < n; ++j)
                if (rng.bounded(1000) < static_cast<std::uint64_t>(p * 1000)) {
                    net.edges[{i, j}] =
                        1 + static_cast<std::uint32_t>(rng.bounded(5));
                    edges.emplace_back(i, j);
                }
        out.graphs += 1;
        if (!same_stats(degree_stats(net),
                        oracle::degree_stats_undirected(n, edges)) ||
            !same_giant(giant_cluster(net), oracle::giant(n, edges)))
            out.graphs_ok = false;
    }

    for (int trial = 0; trial < 300 && out.graphs_ok; ++trial) {
        const std::uint32_t n = 1 + static_cast<std::uint32_t>(rng.bounded(30));
        const double p = densities[trial % 5];
        KnowledgeNetwork net;
        net.n = n;
        std::vector<std::pair<AgentId, AgentId>> arcs;
        for (AgentId i = 0; i < n; ++i)
            for (AgentId j = 0; j < n; ++j) {
                if (i == j) continue;
                if (rng.bounded(1000) < static_cast<std::uint64_t>(p * 1000)) {
                    net.arcs[{i, j}] = Belief{0, 0};
                    arcs.emplace_back(i, j);
                }
            }
        out.graphs += 1;
        if (!same_stats(degree_stats(net),
                        oracle::degree_stats_directed(n, arcs)) ||
            !same_giant(giant_cluster(net), oracle::giant(n, arcs)) ||
            largest_strong_component(n, arcs) != oracle::largest_scc(n, arcs))
            out.graphs_ok = false;
    }

    for (int trial = 0; trial < 250 && out.placements_ok; ++trial) {
        SimConfig cfg;
        cfg.n_agents = 2 + static_cast<std::uint32_t>(rng.bounded(49));
        cfg.d_side = 1 + static_cast<std::uint32_t>(rng.bounded(60));
        cfg.oh = static_cast<std::uint32_t>(rng.bounded(7));
        cfg.m = static_cast<std::uint32_t>(rng.bounded(8));
        cfg.metric =
            rng.bounded(2) == 0 ? Metric::kChebyshev : Metric::kEuclidean;
        cfg.seed = rng.next_u64();
        SimState state = init_world(cfg);
        const std::uint64_t shuffles = rng.bounded(4);
        for (std::uint64_t k = 0; k < shuffles; ++k) move_all(state, cfg);

        std::vector<MeetingPair> got = detect_meetings(state, cfg);
        std::vector<MeetingPair> want = oracle::meetings(state, cfg);
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        out.placements += 1;
        if (got != want) out.placements_ok = false;
    }

    const fs::path root = fs::temp_directory_path() / "mkperc_acceptance_det";
    fs::remove_all(root);
    try {
        SimConfig cfg;
        cfg.n_agents = 150;
        cfg.d_side = 100;
        cfg.oh = 1;
        cfg.m = 3;
        cfg.max_ticks = 300;
        cfg.seed = 42;
        const RunSummary a = run_single(cfg, (root / "a").string());
        const RunSummary b = run_single(cfg, (root / "b").string());
        cfg.seed = 43;
        const RunSummary c = run_single(cfg, (root / "c").string());

        const auto slurp = [](const fs::path& p) {
            std::ifstream f(p, std::ios::binary);
            return std::string((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
        };
        const std::string ma = slurp(root / "a" / "metrics.csv");
        out.determinism_ok = !ma.empty() &&
                             ma == slurp(root / "b" / "metrics.csv") &&
                             ma != slurp(root / "c" / "metrics.csv") &&
                             a.final_state_digest == b.final_state_digest &&
                             a.event_digest == b.event_digest &&
                             a.final_state_digest != c.final_state_digest;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    fs::remove_all(root);
    return out;
}

}  // namespace

int main() {
    const std::size_t workers = workers_from_env();
    note("workers: " + std::to_string(workers));

    // Reference threshold runs: full-length so the classification window
    // (giant arc share crossing 0.05, around tick 100k) completes.
    SweepSpec threshold_spec;
    threshold_spec.name = "threshold";
    threshold_spec.axis = "N";
    threshold_spec.values = {1000};
    threshold_spec.replicates = 5;
    threshold_spec.base.max_ticks = 140000;
    threshold_spec.base.snapshot_geometric = false;
    const Phase threshold = run_phase("threshold runs", threshold_spec, workers);

    SweepSpec scaling_spec = preset_spec("scaling");
    scaling_spec.values = {1e4};
    scaling_spec.replicates = 5;
    const Phase scaling = run_phase("scaling runs (N=10^4)", scaling_spec,
                                    workers);

    SweepSpec curves_spec = preset_spec("curves");
    curves_spec.replicates = 3;
    const Phase curves = run_phase("saturation-curve runs", curves_spec,
                                   workers);

    SweepSpec oh_spec = preset_spec("overhearing");
    oh_spec.replicates = 3;
    const Phase overhearing = run_phase("overhearing sweep", oh_spec, workers);

    SweepSpec density_spec = preset_spec("density");
    density_spec.replicates = 3;
    const Phase density = run_phase("density sweep", density_spec, workers);

    SweepSpec forget_spec = preset_spec("forgetting");
    forget_spec.replicates = 3;
    const Phase forgetting = run_phase("forgetting sweep", forget_spec,
                                       workers);

    SweepSpec churn_spec = preset_spec("churn");
    churn_spec.values = {0.01};
    churn_spec.replicates = 3;
    const Phase churn = run_phase("churn runs", churn_spec, workers);

    note("running oracle suites");
    const OracleOutcome oracle = run_oracle_suites();

    // 1: knowledge p_c in [0.0005, 0.002] and n_b within 2x of N-1 = 999.
    std::vector<double> pc3;
    std::vector<double> nb3;
    {
        bool ok = threshold.result.has_value();
        std::string detail;
        if (ok) {
            const auto runs = cell_runs(*threshold.result, 0);
            ok = runs.size() == 5;
            for (const RunSummary* s : runs) {
                if (!s->knowledge.p_c || !s->knowledge.n_b) {
                    ok = false;
                    continue;
                }
                pc3.push_back(*s->knowledge.p_c);
                nb3.push_back(static_cast<double>(*s->knowledge.n_b));
                if (*s->knowledge.p_c < 0.0005 || *s->knowledge.p_c > 0.002)
                    ok = false;
                if (*s->knowledge.n_b < 500 || *s->knowledge.n_b > 1998)
                    ok = false;
            }
            detail = "knowledge p_c " + span(pc3) + " within [0.0005, 0.002], "
                     "n_b " + span(nb3) + " within [500, 1998] over " +
                     std::to_string(runs.size()) + " runs";
        } else {
            detail = "threshold runs failed: " + threshold.error;
        }
        report(1, ok, detail);
    }

    // 2: slope of log p_c vs log N across {10^3, 10^4} equals -1 +- 0.2.
    {
        bool ok = scaling.result.has_value() && !pc3.empty();
        std::string detail = "scaling runs failed: " + scaling.error;
        if (ok) {
            std::vector<double> pc4;
            for (const RunSummary* s : cell_runs(*scaling.result, 0))
                if (s->knowledge.p_c) pc4.push_back(*s->knowledge.p_c);
            ok = pc4.size() == 5;
            if (ok) {
                double m3 = 0.0;
                double m4 = 0.0;
                for (double v : pc3) m3 += std::log10(v);
                for (double v : pc4) m4 += std::log10(v);
                m3 /= static_cast<double>(pc3.size());
                m4 /= static_cast<double>(pc4.size());
                const double slope = m4 - m3;  // log N step is exactly 1
                ok = slope >= -1.2 && slope <= -0.8;
                detail = "log-log slope over N in {10^3, 10^4} = " +
                         num(slope) + " within -1 +- 0.2 (p_c at 10^4: " +
                         span(pc4) + ")";
            } else {
                detail = "scaling produced " + std::to_string(pc4.size()) +
                         "/5 thresholds";
            }
        }
        report(2, ok, detail);
    }

    // 3: meeting network "mixed", knowledge network arc-driven only.
    {
        bool ok = threshold.result.has_value();
        int good = 0;
        if (ok) {
            const auto runs = cell_runs(*threshold.result, 0);
            ok = runs.size() == 5;
            for (const RunSummary* s : runs)
                if (s->knowledge.classification == "link percolation" &&
                    s->meeting.classification == "mixed")
                    good += 1;
                else
                    ok = false;
        }
        report(3, ok,
               std::to_string(good) +
                   "/5 runs: knowledge 'link percolation', meeting 'mixed'");
    }

    // 4: MK saturates before the meeting rate; both near 0 at t_c.
    {
        bool ok = curves.result.has_value();
        std::string detail = "curve runs failed: " + curves.error;
        if (ok) {
            const auto runs = cell_runs(*curves.result, 0);
            ok = runs.size() == 3;
            std::vector<double> mk999;
            std::vector<double> meet999;
            for (const RunSummary* s : runs) {
                if (!s->t_mk_999 || !s->t_meeting_999 ||
                    *s->t_mk_999 >= *s->t_meeting_999 || s->mk_at_tc > 0.05 ||
                    s->meeting_rate_at_tc > 0.05 || s->final_mk < 0.999 ||
                    s->final_meeting_rate < 0.999) {
                    ok = false;
                }
                if (s->t_mk_999)
                    mk999.push_back(static_cast<double>(*s->t_mk_999));
                if (s->t_meeting_999)
                    meet999.push_back(static_cast<double>(*s->t_meeting_999));
            }
            detail = "t(MK>=0.999) " + span(mk999) +
                     " precedes t(meeting>=0.999) " + span(meet999) +
                     " in every run; both curves <= 0.05 at t_c";
        }
        report(4, ok, detail);
    }

    // 5: T_c strictly decreasing in oh, big drop by oh=2, p_c stable.
    {
        bool ok = overhearing.result.has_value();
        std::string detail = "overhearing sweep failed: " + overhearing.error;
        if (ok) {
            const auto& cells = overhearing.result->cells;
            ok = cells.size() == 5;
            std::string tcs;
            for (std::size_t i = 0; ok && i < cells.size(); ++i) {
                if (cells[i].t_c.count != 3 || cells[i].p_c.count != 3)
                    ok = false;
            }
            if (ok) {
                for (std::size_t i = 0; i + 1 < cells.size(); ++i)
                    if (cells[i + 1].t_c.mean >= cells[i].t_c.mean) ok = false;
                const double drop = cells[2].t_c.mean / cells[0].t_c.mean;
                if (drop >= 0.2) ok = false;
                const double ref = cells[0].p_c.mean;
                for (const CellAggregate& cell : cells)
                    if (std::fabs(cell.p_c.mean - ref) > 0.5 * ref) ok = false;
                for (std::size_t i = 0; i < cells.size(); ++i)
                    tcs += (i ? ", " : "") + num(cells[i].t_c.mean);
                detail = "mean T_c by oh: " + tcs +
                         "; T_c(2)/T_c(0) = " + num(drop) +
                         "; p_c within +-50% of oh=0";
            } else {
                detail = "overhearing sweep incomplete";
            }
        }
        report(5, ok, detail);
    }

    // 6: T_c ordered by grid side at fixed N, p_c stable.
    {
        bool ok = density.result.has_value();
        std::string detail = "density sweep failed: " + density.error;
        if (ok) {
            const auto& cells = density.result->cells;
            ok = cells.size() == 3;
            for (std::size_t i = 0; ok && i < cells.size(); ++i)
                if (cells[i].t_c.count != 3 || cells[i].p_c.count != 3)
                    ok = false;
            if (ok) {
                ok = cells[0].t_c.mean < cells[1].t_c.mean &&
                     cells[1].t_c.mean < cells[2].t_c.mean;
                const double ref = cells[1].p_c.mean;  // d_side = 5000
                for (const CellAggregate& cell : cells)
                    if (std::fabs(cell.p_c.mean - ref) > 0.5 * ref) ok = false;
                detail = "mean T_c by d_side: " + num(cells[0].t_c.mean) +
                         " < " + num(cells[1].t_c.mean) + " < " +
                         num(cells[2].t_c.mean) + "; p_c within +-50% of "
                         "d_side=5000";
            } else {
                detail = "density sweep incomplete";
            }
        }
        report(6, ok, detail);
    }

    // 7: mild forgetting keeps MK high, heavy forgetting at most half of it.
    {
        bool ok = forgetting.result.has_value();
        std::string detail = "forgetting sweep failed: " + forgetting.error;
        if (ok) {
            const auto& cells = forgetting.result->cells;
            ok = cells.size() == 4 && cells[0].final_mk.count == 3 &&
                 cells[3].final_mk.count == 3;
            if (ok) {
                for (const RunSummary* s : cell_runs(*forgetting.result, 0))
                    if (s->final_mk < 0.9) ok = false;
                const double mild = cells[0].final_mk.mean;
                const double heavy = cells[3].final_mk.mean;
                if (heavy > 0.5 * mild) ok = false;
                detail = "final MK: pforg=0.001 -> " + num(mild) +
                         " (every run >= 0.9), pforg=0.7 -> " + num(heavy) +
                         " (at most half)";
            } else {
                detail = "forgetting sweep incomplete";
            }
        }
        report(7, ok, detail);
    }

    // 8: churn leaves a persistent wrong-belief plateau; without churn the
    // wrong-belief share is exactly zero at every sampled tick.
    {
        bool ok = churn.result.has_value() && threshold.result.has_value();
        std::string detail = "churn runs failed: " + churn.error;
        if (ok) {
            const auto runs = cell_runs(*churn.result, 0);
            ok = runs.size() == 3;
            std::vector<double> plateau;
            for (const RunSummary* s : runs) {
                plateau.push_back(s->last_quarter_mean_delta_mk);
                if (s->last_quarter_min_delta_mk <= 0.0 ||
                    s->last_quarter_mean_delta_mk < 1e-3)
                    ok = false;
            }
            int zero = 0;
            for (const RunSummary* s : cell_runs(*threshold.result, 0))
                if (s->delta_mk_all_zero)
                    zero += 1;
                else
                    ok = false;
            detail = "p_change=0.01 last-quarter delta MK mean " +
                     span(plateau) + ", never zero; chgr=false delta MK == 0 "
                     "in " + std::to_string(zero) + "/5 runs";
        }
        report(8, ok, detail);
    }

    // 9: brute-force oracles and bytewise determinism.
    {
        const bool ok = oracle.graphs >= 500 && oracle.graphs_ok &&
                        oracle.placements >= 200 && oracle.placements_ok &&
                        oracle.determinism_ok;
        std::string detail =
            std::to_string(oracle.graphs) + " random graphs and " +
            std::to_string(oracle.placements) +
            " placements match brute force; reruns byte-identical";
        if (!oracle.error.empty()) detail += "; error: " + oracle.error;
        report(9, ok, detail);
    }

    // 10: the directed heterogeneity condition turns on early but not
    // instantly.
    {
        bool ok = threshold.result.has_value();
        std::vector<double> ticks;
        if (ok) {
            const auto runs = cell_runs(*threshold.result, 0);
            ok = runs.size() == 5;
            for (const RunSummary* s : runs) {
                if (!s->knowledge.condition_tick) {
                    ok = false;
                    continue;
                }
                ticks.push_back(
                    static_cast<double>(*s->knowledge.condition_tick));
                if (*s->knowledge.condition_tick < 100 ||
                    *s->knowledge.condition_tick > 5000)
                    ok = false;
            }
        }
        report(10, ok,
               "directed K crosses 1 at ticks " + span(ticks) +
                   " within [100, 5000]");
    }

    std::printf("%s\n", g_failures == 0 ? "acceptance: all criteria pass"
                                        : "acceptance: FAILURES");
    return g_failures == 0 ? 0 : 1;
}
