#pragma once

#include <cstdint>
#include <vector>

#include "mkperc/csvio.hpp"
#include "mkperc/percolation.hpp"
#include "mkperc/sim.hpp"
#include "mkperc/unionfind.hpp"

namespace mkperc {

// Maintains both networks' per-tick percolation observables incrementally
// from engine events, so sampling every tick is O(1) instead of a full
// capture. Degree moments, link counts, MK and delta-MK are exact under any
// configuration. Cluster quantities (P_sG, P_bG) are exact via union-find as
// long as no arc is ever removed (pforg = 0); with forgetting enabled the
// knowledge network's cluster quantities are recomputed by BFS every
// `cluster_refresh` ticks and held between refreshes. The meeting network
// never loses links, so its cluster quantities are always exact.
class MetricsTracker : public SimObserver {
public:
    MetricsTracker(const SimState& initial, const SimConfig& config);

    void on_meeting(AgentId a, AgentId b, bool first_time) override;
    void on_belief_added(AgentId owner, AgentId target, GroupId group) override;
    void on_belief_group_updated(AgentId owner, AgentId target,
                                 GroupId old_group, GroupId new_group) override;
    void on_belief_removed(AgentId owner, AgentId target,
                           GroupId group) override;
    void on_group_changed(AgentId agent, GroupId old_group,
                          GroupId new_group) override;

    // Samples the current state into a metrics row and extends both
    // percolation series. With forgetting enabled, `exact` forces a cluster
    // refresh at this tick regardless of the refresh period.
    MetricsRow sample(const SimState& state, bool exact = false);

    const std::vector<PercolationPoint>& knowledge_series() const {
        return knowledge_series_;
    }
    const std::vector<PercolationPoint>& meeting_series() const {
        return meeting_series_;
    }

private:
    void refresh_knowledge_clusters(const SimState& state);

    std::uint32_t n_ = 0;
    std::uint32_t ng_ = 1;
    double pairs_undirected_ = 0.0;
    double pairs_directed_ = 0.0;
    bool track_clusters_incrementally_ = true;
    std::uint32_t cluster_refresh_ = 100;

    // Meeting network.
    UnionFind meet_uf_;
    std::vector<std::uint32_t> meet_deg_;
    std::uint64_t meet_edges_ = 0;
    std::uint64_t meet_sum_k2_ = 0;
    std::uint32_t meet_active_ = 0;

    // Knowledge network.
    UnionFind know_uf_;
    std::vector<std::uint32_t> k_in_;
    std::vector<std::uint32_t> k_out_;
    std::uint64_t arcs_ = 0;
    std::uint64_t sum_kin_kout_ = 0;
    std::uint32_t know_active_ = 0;
    double cached_know_psg_ = 0.0;
    double cached_know_pbg_ = 0.0;

    // Ground truth groups and belief tallies for delta-MK.
    std::vector<GroupId> group_;
    std::vector<std::uint32_t> belief_counts_;  // n * ng, [target*ng + group]
    std::uint64_t wrong_beliefs_ = 0;

    std::vector<PercolationPoint> knowledge_series_;
    std::vector<PercolationPoint> meeting_series_;
};

}  // namespace mkperc
