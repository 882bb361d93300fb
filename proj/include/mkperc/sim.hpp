#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mkperc/config.hpp"
#include "mkperc/hash.hpp"
#include "mkperc/rng.hpp"

namespace mkperc {

using AgentId = std::uint32_t;
using GroupId = std::uint32_t;
using Tick = std::uint32_t;

// One entry of an agent's met-list: how often the owner met `other` and which
// group it saw last.
struct MetEntry {
    GroupId group_seen = 0;
    std::uint32_t count = 0;
};

// One entry of an agent's known-list: the group the owner believes `other`
// belongs to, stamped with the tick the information was obtained at its
// source (relaying never re-stamps).
struct Belief {
    GroupId group = 0;
    Tick timestamp = 0;
};

struct Agent {
    AgentId id = 0;
    GroupId group = 0;
    std::uint32_t x = 0;
    std::uint32_t y = 0;
    std::unordered_map<AgentId, MetEntry> met;    // includes a self entry
    std::unordered_map<AgentId, Belief> known;    // includes a self entry
};

using MeetingPair = std::pair<AgentId, AgentId>;  // always first < second

// Receives state-change notifications from the engine. Self entries are never
// reported; all arguments refer to distinct agents.
class SimObserver {
public:
    virtual ~SimObserver() = default;
    virtual void on_meeting(AgentId a, AgentId b, bool first_time) = 0;
    virtual void on_belief_added(AgentId owner, AgentId target, GroupId g) = 0;
    virtual void on_belief_group_updated(AgentId owner, AgentId target,
                                         GroupId old_g, GroupId new_g) = 0;
    virtual void on_belief_removed(AgentId owner, AgentId target, GroupId g) = 0;
    virtual void on_group_changed(AgentId agent, GroupId old_g, GroupId new_g) = 0;
};

struct SimState {
    Tick tick = 0;
    std::vector<Agent> agents;
    Rng rng{0};
    // Rolling digest of the meeting-event stream (tick, a, b); stands in for
    // the full event log so determinism checks stay O(1) in memory.
    Fnv1a64 event_digest;
};

SimState init_world(const SimConfig& config);

void move_all(SimState& state, const SimConfig& config);

// Every unordered pair within overhearing radius this tick, ascending and
// deduplicated. Spatial hashing by cell; sub-quadratic on sparse grids.
std::vector<MeetingPair> detect_meetings(const SimState& state,
                                         const SimConfig& config);

// Met-list updates plus symmetric knowledge merge for every pair. All merges
// read pre-exchange snapshots and are applied in ascending pair order, so
// multi-way meetings are deterministic and there is no same-tick transitive
// chaining. First-hand observation is applied last and stamps `stamp_tick`.
void exchange_knowledge(SimState& state, const std::vector<MeetingPair>& pairs,
                        Tick stamp_tick, SimObserver* obs = nullptr);

void apply_forgetting(SimState& state, const SimConfig& config,
                      SimObserver* obs = nullptr);

void apply_group_changes(SimState& state, const SimConfig& config,
                         Tick stamp_tick, SimObserver* obs = nullptr);

// move -> detect -> exchange -> forget -> group change -> tick+1. Meeting
// events are folded into state.event_digest; the tick's meeting pairs are
// copied to `last_pairs` when provided.
void step(SimState& state, const SimConfig& config, SimObserver* obs = nullptr,
          std::vector<MeetingPair>* last_pairs = nullptr);

// Digest of the full agent state (positions, groups, met and known lists in
// sorted order); two states with equal digests are identical for all
// practical purposes.
std::uint64_t state_digest(const SimState& state);

}  // namespace mkperc
