#include "mkperc/tracker.hpp"

#include <algorithm>

namespace mkperc {

MetricsTracker::MetricsTracker(const SimState& initial, const SimConfig& config)
    : n_(static_cast<std::uint32_t>(initial.agents.size())),
      ng_(config.ng),
      track_clusters_incrementally_(config.pforg <= 0.0),
      cluster_refresh_(std::max<std::uint32_t>(config.cluster_refresh, 1)),
      meet_uf_(n_),
      meet_deg_(n_, 0),
      know_uf_(n_),
      k_in_(n_, 0),
      k_out_(n_, 0),
      group_(n_),
      belief_counts_(static_cast<std::size_t>(n_) * ng_, 0) {
    pairs_undirected_ = static_cast<double>(n_) * (n_ - 1) / 2.0;
    pairs_directed_ = static_cast<double>(n_) * (n_ - 1);
    for (std::uint32_t v = 0; v < n_; ++v) group_[v] = initial.agents[v].group;
}

void MetricsTracker::on_meeting(AgentId a, AgentId b, bool first_time) {
    if (!first_time) return;
    meet_sum_k2_ += 2ull * meet_deg_[a] + 1;
    meet_sum_k2_ += 2ull * meet_deg_[b] + 1;
    if (meet_deg_[a] == 0) ++meet_active_;
    if (meet_deg_[b] == 0) ++meet_active_;
    meet_deg_[a] += 1;
    meet_deg_[b] += 1;
    meet_edges_ += 1;
    meet_uf_.add_link(a, b);
}

void MetricsTracker::on_belief_added(AgentId owner, AgentId target,
                                     GroupId group) {
    sum_kin_kout_ -= static_cast<std::uint64_t>(k_in_[owner]) * k_out_[owner];
    sum_kin_kout_ -= static_cast<std::uint64_t>(k_in_[target]) * k_out_[target];
    if (k_in_[owner] + k_out_[owner] == 0) ++know_active_;
    if (k_in_[target] + k_out_[target] == 0) ++know_active_;
    k_out_[owner] += 1;
    k_in_[target] += 1;
    sum_kin_kout_ += static_cast<std::uint64_t>(k_in_[owner]) * k_out_[owner];
    sum_kin_kout_ += static_cast<std::uint64_t>(k_in_[target]) * k_out_[target];
    arcs_ += 1;
    if (track_clusters_incrementally_) know_uf_.add_link(owner, target);
    belief_counts_[static_cast<std::size_t>(target) * ng_ + group] += 1;
    if (group != group_[target]) ++wrong_beliefs_;
}

void MetricsTracker::on_belief_group_updated(AgentId owner, AgentId target,
                                             GroupId old_group,
                                             GroupId new_group) {
    (void)owner;
    belief_counts_[static_cast<std::size_t>(target) * ng_ + old_group] -= 1;
    belief_counts_[static_cast<std::size_t>(target) * ng_ + new_group] += 1;
    if (old_group != group_[target]) --wrong_beliefs_;
    if (new_group != group_[target]) ++wrong_beliefs_;
}

void MetricsTracker::on_belief_removed(AgentId owner, AgentId target,
                                       GroupId group) {
    sum_kin_kout_ -= static_cast<std::uint64_t>(k_in_[owner]) * k_out_[owner];
    sum_kin_kout_ -= static_cast<std::uint64_t>(k_in_[target]) * k_out_[target];
    k_out_[owner] -= 1;
    k_in_[target] -= 1;
    sum_kin_kout_ += static_cast<std::uint64_t>(k_in_[owner]) * k_out_[owner];
    sum_kin_kout_ += static_cast<std::uint64_t>(k_in_[target]) * k_out_[target];
    if (k_in_[owner] + k_out_[owner] == 0) --know_active_;
    if (k_in_[target] + k_out_[target] == 0) --know_active_;
    arcs_ -= 1;
    belief_counts_[static_cast<std::size_t>(target) * ng_ + group] -= 1;
    if (group != group_[target]) --wrong_beliefs_;
}

void MetricsTracker::on_group_changed(AgentId agent, GroupId old_group,
                                      GroupId new_group) {
    group_[agent] = new_group;
    const std::size_t base = static_cast<std::size_t>(agent) * ng_;
    wrong_beliefs_ += belief_counts_[base + old_group];
    wrong_beliefs_ -= belief_counts_[base + new_group];
}

void MetricsTracker::refresh_knowledge_clusters(const SimState& state) {
    cached_know_psg_ = 0.0;
    cached_know_pbg_ = 0.0;
    if (arcs_ == 0) return;

    // Weak components over the live known lists. Both endpoints of an arc
    // always share a component, so a component's internal arc count is the
    // sum of its members' out-degrees.
    std::vector<std::vector<AgentId>> adj(n_);
    for (const Agent& a : state.agents) {
        for (const auto& [target, belief] : a.known) {
            (void)belief;
            if (target == a.id) continue;
            adj[a.id].push_back(target);
            adj[target].push_back(a.id);
        }
    }
    std::vector<bool> visited(n_, false);
    std::vector<AgentId> queue;
    std::uint32_t best_size = 0;
    std::uint64_t best_arcs = 0;
    // Seeds scan ascending, so a component is discovered at its lowest member
    // and keeping strict improvements ties toward the lowest contained id.
    for (AgentId s = 0; s < n_; ++s) {
        if (visited[s] || adj[s].empty()) continue;
        visited[s] = true;
        queue.assign(1, s);
        std::uint32_t size = 0;
        std::uint64_t comp_arcs = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const AgentId v = queue[head];
            ++size;
            comp_arcs += k_out_[v];
            for (const AgentId w : adj[v]) {
                if (visited[w]) continue;
                visited[w] = true;
                queue.push_back(w);
            }
        }
        if (size > best_size) {
            best_size = size;
            best_arcs = comp_arcs;
        }
    }
    if (best_size >= 2) {
        cached_know_psg_ = static_cast<double>(best_size) / n_;
        if (pairs_directed_ > 0.0)
            cached_know_pbg_ = static_cast<double>(best_arcs) / pairs_directed_;
    }
}

MetricsRow MetricsTracker::sample(const SimState& state, bool exact) {
    MetricsRow row;
    row.tick = state.tick;
    row.arcs = arcs_;
    row.edges = meet_edges_;

    if (n_ <= 1) {
        row.mk = 1.0;
        row.meeting_rate = 1.0;
    } else {
        row.mk = static_cast<double>(arcs_) / pairs_directed_;
        row.meeting_rate = static_cast<double>(meet_edges_) / pairs_undirected_;
        row.delta_mk = static_cast<double>(wrong_beliefs_) / pairs_directed_;
    }

    PercolationPoint know;
    know.tick = state.tick;
    know.directed = true;
    know.link_count = arcs_;
    PercolationPoint meet;
    meet.tick = state.tick;
    meet.directed = false;
    meet.link_count = meet_edges_;

    if (n_ > 0) {
        know.ps = static_cast<double>(know_active_) / n_;
        meet.ps = static_cast<double>(meet_active_) / n_;
    }
    if (pairs_directed_ > 0.0)
        know.pb = static_cast<double>(arcs_) / pairs_directed_;
    if (pairs_undirected_ > 0.0)
        meet.pb = static_cast<double>(meet_edges_) / pairs_undirected_;

    if (arcs_ > 0) {
        know.k_defined = true;
        know.k_condition =
            static_cast<double>(sum_kin_kout_) / static_cast<double>(arcs_);
        know.percolating = know.k_condition > 1.0;
    }
    if (meet_edges_ > 0) {
        meet.k_defined = true;
        meet.k_condition = static_cast<double>(meet_sum_k2_) /
                           static_cast<double>(2 * meet_edges_);
        meet.percolating = meet.k_condition > 2.0;
    }

    if (n_ > 0) {
        meet.psg = static_cast<double>(meet_uf_.giant_size()) / n_;
        if (pairs_undirected_ > 0.0)
            meet.pbg = static_cast<double>(meet_uf_.giant_links()) /
                       pairs_undirected_;
        if (track_clusters_incrementally_) {
            know.psg = static_cast<double>(know_uf_.giant_size()) / n_;
            if (pairs_directed_ > 0.0)
                know.pbg =
                    static_cast<double>(know_uf_.giant_links()) / pairs_directed_;
        } else {
            if (exact || state.tick % cluster_refresh_ == 0)
                refresh_knowledge_clusters(state);
            know.psg = cached_know_psg_;
            know.pbg = cached_know_pbg_;
        }
    }

    row.k_dir_defined = know.k_defined;
    row.k_dir = know.k_condition;
    row.k_undir_defined = meet.k_defined;
    row.k_undir = meet.k_condition;
    row.ps = know.ps;
    row.pb = know.pb;
    row.psg = know.psg;
    row.pbg = know.pbg;
    row.ps_meet = meet.ps;
    row.pb_meet = meet.pb;
    row.psg_meet = meet.psg;
    row.pbg_meet = meet.pbg;

    knowledge_series_.push_back(know);
    meeting_series_.push_back(meet);
    return row;
}

}  // namespace mkperc
