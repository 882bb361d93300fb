#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mkperc/network.hpp"

namespace mkperc {

// Giant-cluster size cutoff: a giant-cluster curve counts as "taken off" once
// it reaches this fraction, and values below it count as "approximately zero"
// in the percolation-type classification.
inline constexpr double kGiantCutoff = 0.05;

// Arithmetic degree moments over all n nodes, isolated nodes included.
// Undirected graphs fill mean_k/mean_k2; directed graphs fill the in/out
// moments. The histogram maps degree (total degree for directed graphs) to
// node count.
struct DegreeStats {
    double mean_k = 0.0;
    double mean_k2 = 0.0;
    double mean_kin = 0.0;
    double mean_kout = 0.0;
    double mean_kin_kout = 0.0;
    std::map<std::uint32_t, std::uint32_t> histogram;
};

DegreeStats degree_stats(const MeetingNetwork& net);
DegreeStats degree_stats(const KnowledgeNetwork& net);

// Heterogeneity parameter and the giant-cluster condition.
// Undirected: K = <k^2>/(2<k>), percolating iff K > 1 (same boolean as the
// raw form <k^2>/<k> > 2). Directed: K = <k_i k_o>/<k_i>, percolating iff
// K > 1. Throws InvariantError when the graph has no links (K undefined).
struct Heterogeneity {
    double k = 0.0;
    bool percolating = false;
};

Heterogeneity heterogeneity_condition(const MeetingNetwork& net);
Heterogeneity heterogeneity_condition(const KnowledgeNetwork& net);

// Largest connected component (weak connectivity for directed graphs: arc
// orientation is ignored). Ties break toward the component containing the
// lowest node id. A graph with no links has no giant cluster: both sets come
// back empty. `links` are the input links with both endpoints inside.
struct GiantCluster {
    std::vector<AgentId> nodes;
    std::vector<std::pair<AgentId, AgentId>> links;
};

GiantCluster giant_cluster(std::uint32_t n,
                           const std::vector<std::pair<AgentId, AgentId>>& links);
GiantCluster giant_cluster(const MeetingNetwork& net);
GiantCluster giant_cluster(const KnowledgeNetwork& net);

// Size of the largest strongly connected component; diagnostic only.
std::uint32_t largest_strong_component(
    std::uint32_t n, const std::vector<std::pair<AgentId, AgentId>>& arcs);

// One network's percolation state at one tick. k_condition is <k^2>/<k> for
// undirected networks (condition: > 2) and <k_i k_o>/<k_i> for directed ones
// (condition: > 1); k_defined is false when there are no links, and consumers
// must not read k_condition then (never NaN). P_s counts nodes with any link,
// P_b normalizes by the network's own possible-link count (N(N-1) directed,
// N(N-1)/2 undirected), and P_sG/P_bG are the giant-cluster shares.
struct PercolationPoint {
    Tick tick = 0;
    bool directed = false;
    bool k_defined = false;
    double k_condition = 0.0;
    bool percolating = false;
    double ps = 0.0;
    double pb = 0.0;
    double psg = 0.0;
    double pbg = 0.0;
    std::uint64_t link_count = 0;
};

PercolationPoint percolation_point(const MeetingNetwork& net, Tick tick);
PercolationPoint percolation_point(const KnowledgeNetwork& net, Tick tick);

// Threshold detection over a per-tick series of one network's points.
//
// condition_tick: first tick the heterogeneity condition holds.
// t_c:            giant-cluster takeoff, first tick with P_sG >= 0.05;
//                 p_c = P_b(t_c) and n_b = link count at t_c.
// class_tick:     end of the below-threshold window used for the percolation
//                 -type classification. The network's giant-cluster curve on
//                 its defining axis must reach the 0.05 cutoff: the site curve
//                 (P_sG) for undirected networks, the link curve (P_bG) for
//                 directed ones.
// classification: "site percolation" iff max P_sG before class_tick < 0.05,
//                 "link percolation" iff max P_bG before class_tick < 0.05,
//                 "mixed" when both hold, "none" when neither.
// beta:           least-squares slope of log P_sG vs log(P_b - p_c) over the
//                 window P_b in (p_c, 3 p_c], with RMS residual.
struct ThresholdEstimate {
    bool directed = false;
    std::optional<Tick> condition_tick;
    std::optional<Tick> t_c;
    std::optional<double> p_c;
    std::optional<std::uint64_t> n_b;
    std::optional<Tick> class_tick;
    double max_psg_below = 0.0;
    double max_pbg_below = 0.0;
    bool site_percolation = false;
    bool link_percolation = false;
    std::string classification = "undetermined";
    std::optional<double> beta;
    std::optional<double> beta_residual;
    std::string diagnostic;
};

ThresholdEstimate detect_threshold(const std::vector<PercolationPoint>& series);

// Scalar observables.
double mk_level(const KnowledgeNetwork& net);
double meeting_rate(const MeetingNetwork& net);
double delta_mk(const SimState& state);

// Descriptive power-law fit of a degree histogram: least-squares slope of
// log(count) vs log(degree) over nonzero degrees, with R^2. Absent when
// fewer than 3 distinct nonzero degrees are present.
struct PowerLawFit {
    double slope = 0.0;
    double r2 = 0.0;
};

std::optional<PowerLawFit> degree_distribution_fit(
    const std::map<std::uint32_t, std::uint32_t>& histogram);

}  // namespace mkperc
