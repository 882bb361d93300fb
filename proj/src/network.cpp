#include "mkperc/network.hpp"

#include <string>

#include "mkperc/config.hpp"

namespace mkperc {

std::vector<std::pair<AgentId, AgentId>> MeetingNetwork::edge_list() const {
    std::vector<std::pair<AgentId, AgentId>> out;
    out.reserve(edges.size());
    for (const auto& [key, w] : edges) {
        (void)w;
        out.push_back(key);
    }
    return out;
}

std::vector<std::pair<AgentId, AgentId>> KnowledgeNetwork::arc_list() const {
    std::vector<std::pair<AgentId, AgentId>> out;
    out.reserve(arcs.size());
    for (const auto& [key, b] : arcs) {
        (void)b;
        out.push_back(key);
    }
    return out;
}

NetworkSnapshot capture(const SimState& state) {
    NetworkSnapshot snap;
    snap.tick = state.tick;
    const auto n = static_cast<std::uint32_t>(state.agents.size());
    snap.meeting.n = n;
    snap.knowledge.n = n;

    for (const Agent& a : state.agents) {
        for (const auto& [other, entry] : a.met) {
            if (other == a.id) continue;
            const auto& peer = state.agents[other].met;
            auto back = peer.find(a.id);
            if (back == peer.end() || back->second.count != entry.count)
                throw InvariantError("met lists asymmetric between agents " +
                                     std::to_string(a.id) + " and " +
                                     std::to_string(other));
            if (a.id < other)
                snap.meeting.edges.emplace(std::make_pair(a.id, other),
                                           entry.count);
        }
        for (const auto& [target, belief] : a.known) {
            if (target == a.id) continue;
            snap.knowledge.arcs.emplace(std::make_pair(a.id, target), belief);
        }
    }
    return snap;
}

}  // namespace mkperc
