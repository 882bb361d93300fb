#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "mkperc/sim.hpp"

namespace mkperc {

// Undirected meeting network: one edge per agent pair that has met, weighted
// by the number of meetings. Keys are (a, b) with a < b; self loops excluded.
struct MeetingNetwork {
    std::uint32_t n = 0;
    std::map<std::pair<AgentId, AgentId>, std::uint32_t> edges;

    std::vector<std::pair<AgentId, AgentId>> edge_list() const;
};

// Directed knowledge network: arc i -> j when i holds a belief about j's
// group. Self beliefs are not arcs.
struct KnowledgeNetwork {
    std::uint32_t n = 0;
    std::map<std::pair<AgentId, AgentId>, Belief> arcs;

    std::vector<std::pair<AgentId, AgentId>> arc_list() const;
};

struct NetworkSnapshot {
    Tick tick = 0;
    MeetingNetwork meeting;
    KnowledgeNetwork knowledge;
};

// Builds both networks from the live agent state. Throws InvariantError if
// the met lists are asymmetric (a counts b differently than b counts a).
NetworkSnapshot capture(const SimState& state);

}  // namespace mkperc
