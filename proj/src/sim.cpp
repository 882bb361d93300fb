#include "mkperc/sim.hpp"

#include <algorithm>
#include <cstdlib>

namespace mkperc {

SimState init_world(const SimConfig& config) {
    config.validate();
    SimState state;
    state.rng.reseed(config.seed);
    state.agents.resize(config.n_agents);
    for (AgentId i = 0; i < config.n_agents; ++i) {
        Agent& a = state.agents[i];
        a.id = i;
        a.x = static_cast<std::uint32_t>(state.rng.bounded(config.d_side));
        a.y = static_cast<std::uint32_t>(state.rng.bounded(config.d_side));
        a.group = static_cast<GroupId>(state.rng.bounded(config.ng));
        a.met.emplace(i, MetEntry{a.group, 1});   // has met itself once
        a.known.emplace(i, Belief{a.group, 0});
    }
    return state;
}

void move_all(SimState& state, const SimConfig& config) {
    if (config.m == 0) return;
    const auto d = static_cast<std::int64_t>(config.d_side);
    const auto m = static_cast<std::int64_t>(config.m);
    for (Agent& a : state.agents) {
        const std::int64_t dx = state.rng.range(-m, m);
        const std::int64_t dy = state.rng.range(-m, m);
        a.x = static_cast<std::uint32_t>((((a.x + dx) % d) + d) % d);
        a.y = static_cast<std::uint32_t>((((a.y + dy) % d) + d) % d);
    }
}

namespace {

inline std::uint64_t cell_key(std::uint32_t x, std::uint32_t y,
                              std::uint32_t d_side) {
    return static_cast<std::uint64_t>(x) * d_side + y;
}

inline std::uint32_t axis_dist(std::uint32_t a, std::uint32_t b,
                               std::uint32_t d_side) {
    const std::uint32_t diff = a > b ? a - b : b - a;
    return std::min(diff, d_side - diff);
}

inline bool within_radius(const Agent& a, const Agent& b,
                          const SimConfig& cfg) {
    const std::uint64_t ax = axis_dist(a.x, b.x, cfg.d_side);
    const std::uint64_t ay = axis_dist(a.y, b.y, cfg.d_side);
    if (cfg.metric == Metric::kChebyshev)
        return std::max(ax, ay) <= cfg.oh;
    return ax * ax + ay * ay <=
           static_cast<std::uint64_t>(cfg.oh) * cfg.oh;
}

}  // namespace

std::vector<MeetingPair> detect_meetings(const SimState& state,
                                         const SimConfig& config) {
    const std::uint32_t n = static_cast<std::uint32_t>(state.agents.size());
    const std::uint32_t d = config.d_side;
    std::vector<MeetingPair> pairs;

    // Bucket agents by cell; cells chain their occupants through next_in_cell.
    std::unordered_map<std::uint64_t, AgentId> cell_head;
    cell_head.reserve(n * 2);
    std::vector<AgentId> next_in_cell(n, UINT32_MAX);
    for (AgentId i = 0; i < n; ++i) {
        const std::uint64_t key = cell_key(state.agents[i].x, state.agents[i].y, d);
        auto [it, fresh] = cell_head.try_emplace(key, i);
        if (!fresh) {
            next_in_cell[i] = it->second;
            it->second = i;
        }
    }

    auto emit = [&](AgentId a, AgentId b) {
        if (a == b) return;
        if (config.metric == Metric::kEuclidean &&
            !within_radius(state.agents[a], state.agents[b], config))
            return;
        pairs.emplace_back(std::min(a, b), std::max(a, b));
    };

    // Co-located pairs.
    for (const auto& [key, head] : cell_head) {
        (void)key;
        for (AgentId i = head; i != UINT32_MAX; i = next_in_cell[i])
            for (AgentId j = next_in_cell[i]; j != UINT32_MAX; j = next_in_cell[j])
                emit(i, j);
    }

    // Cross-cell pairs: scan a half plane of cell offsets so each unordered
    // cell pair is considered once. Wraparound on small grids can alias two
    // offsets to one cell; the final sort+unique absorbs the duplicates.
    if (config.oh > 0 && d > 1) {
        const std::int64_t r =
            std::min<std::int64_t>(config.oh, static_cast<std::int64_t>(d) - 1);
        const auto dd = static_cast<std::int64_t>(d);
        auto wrap = [dd](std::int64_t v) { return ((v % dd) + dd) % dd; };
        for (const auto& [key, head] : cell_head) {
            const auto cx = static_cast<std::int64_t>(key / d);
            const auto cy = static_cast<std::int64_t>(key % d);
            for (std::int64_t dx = 0; dx <= r; ++dx) {
                const std::int64_t dy_lo = dx == 0 ? 1 : -r;
                for (std::int64_t dy = dy_lo; dy <= r; ++dy) {
                    const std::uint64_t nkey =
                        cell_key(static_cast<std::uint32_t>(wrap(cx + dx)),
                                 static_cast<std::uint32_t>(wrap(cy + dy)), d);
                    auto it = cell_head.find(nkey);
                    if (it == cell_head.end()) continue;
                    for (AgentId i = head; i != UINT32_MAX; i = next_in_cell[i])
                        for (AgentId j = it->second; j != UINT32_MAX;
                             j = next_in_cell[j])
                            emit(i, j);
                }
            }
        }
    }

    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    return pairs;
}

namespace {

// Merge one incoming relayed entry into `receiver`. Newer timestamps win;
// ties keep the held entry; entries about the receiver itself are ignored
// (the self entry is authoritative).
void merge_relayed(Agent& receiver, AgentId target, const Belief& incoming,
                   SimObserver* obs) {
    if (target == receiver.id) return;
    auto [it, fresh] = receiver.known.try_emplace(target, incoming);
    if (fresh) {
        if (obs) obs->on_belief_added(receiver.id, target, incoming.group);
        return;
    }
    Belief& held = it->second;
    if (held.group == incoming.group) {
        held.timestamp = std::max(held.timestamp, incoming.timestamp);
    } else if (incoming.timestamp > held.timestamp) {
        if (obs)
            obs->on_belief_group_updated(receiver.id, target, held.group,
                                         incoming.group);
        held = incoming;
    }
}

}  // namespace

void exchange_knowledge(SimState& state, const std::vector<MeetingPair>& pairs,
                        Tick stamp_tick, SimObserver* obs) {
    if (pairs.empty()) return;

    // Pre-exchange snapshots of every involved agent's known list; all merges
    // in this tick read these, never the live lists.
    std::unordered_map<AgentId, std::unordered_map<AgentId, Belief>> pre;
    for (const auto& [a, b] : pairs) {
        pre.try_emplace(a, state.agents[a].known);
        pre.try_emplace(b, state.agents[b].known);
    }

    // Met-list updates.
    for (const auto& [a, b] : pairs) {
        Agent& aa = state.agents[a];
        Agent& bb = state.agents[b];
        auto [ita, first_a] = aa.met.try_emplace(b, MetEntry{bb.group, 1});
        if (!first_a) {
            ita->second.count += 1;
            ita->second.group_seen = bb.group;
        }
        auto [itb, first_b] = bb.met.try_emplace(a, MetEntry{aa.group, 1});
        if (!first_b) {
            itb->second.count += 1;
            itb->second.group_seen = aa.group;
        }
        if (obs) obs->on_meeting(a, b, first_a);
    }

    // Relayed knowledge, ascending pair order.
    for (const auto& [a, b] : pairs) {
        Agent& aa = state.agents[a];
        Agent& bb = state.agents[b];
        for (const auto& [target, belief] : pre[b])
            merge_relayed(aa, target, belief, obs);
        for (const auto& [target, belief] : pre[a])
            merge_relayed(bb, target, belief, obs);
    }

    // First-hand observation last: each participant records the partner's
    // current group at the current tick, overriding anything relayed.
    for (const auto& [a, b] : pairs) {
        Agent& aa = state.agents[a];
        Agent& bb = state.agents[b];
        auto observe = [&](Agent& who, const Agent& seen) {
            auto [it, fresh] =
                who.known.try_emplace(seen.id, Belief{seen.group, stamp_tick});
            if (fresh) {
                if (obs) obs->on_belief_added(who.id, seen.id, seen.group);
                return;
            }
            Belief& held = it->second;
            if (held.group != seen.group && obs)
                obs->on_belief_group_updated(who.id, seen.id, held.group,
                                             seen.group);
            held.group = seen.group;
            held.timestamp = stamp_tick;
        };
        observe(aa, bb);
        observe(bb, aa);
    }
}

void apply_forgetting(SimState& state, const SimConfig& config,
                      SimObserver* obs) {
    if (config.pforg <= 0.0) return;
    for (Agent& a : state.agents) {
        if (!state.rng.bernoulli(config.pforg)) continue;
        const std::size_t forgettable = a.known.size() - 1;  // minus self
        if (forgettable == 0) continue;
        std::uint64_t idx = state.rng.bounded(forgettable);
        for (auto it = a.known.begin(); it != a.known.end(); ++it) {
            if (it->first == a.id) continue;
            if (idx-- == 0) {
                if (obs) obs->on_belief_removed(a.id, it->first, it->second.group);
                a.known.erase(it);
                break;
            }
        }
    }
}

void apply_group_changes(SimState& state, const SimConfig& config,
                         Tick stamp_tick, SimObserver* obs) {
    if (!config.chgr || config.ng < 2 || config.p_change <= 0.0) return;
    for (Agent& a : state.agents) {
        if (!state.rng.bernoulli(config.p_change)) continue;
        const GroupId old_g = a.group;
        GroupId g = static_cast<GroupId>(state.rng.bounded(config.ng - 1));
        if (g >= old_g) ++g;
        a.group = g;
        a.known[a.id] = Belief{g, stamp_tick};
        if (obs) obs->on_group_changed(a.id, old_g, g);
    }
}

void step(SimState& state, const SimConfig& config, SimObserver* obs,
          std::vector<MeetingPair>* last_pairs) {
    const Tick new_tick = state.tick + 1;
    move_all(state, config);
    std::vector<MeetingPair> pairs = detect_meetings(state, config);
    for (const auto& [a, b] : pairs) {
        state.event_digest.update_u32(new_tick);
        state.event_digest.update_u32(a);
        state.event_digest.update_u32(b);
    }
    exchange_knowledge(state, pairs, new_tick, obs);
    apply_forgetting(state, config, obs);
    apply_group_changes(state, config, new_tick, obs);
    state.tick = new_tick;
    if (last_pairs) *last_pairs = std::move(pairs);
}

std::uint64_t state_digest(const SimState& state) {
    Fnv1a64 h;
    h.update_u32(state.tick);
    std::vector<std::pair<AgentId, MetEntry>> met_sorted;
    std::vector<std::pair<AgentId, Belief>> known_sorted;
    for (const Agent& a : state.agents) {
        h.update_u32(a.id);
        h.update_u32(a.group);
        h.update_u32(a.x);
        h.update_u32(a.y);
        met_sorted.assign(a.met.begin(), a.met.end());
        std::sort(met_sorted.begin(), met_sorted.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        for (const auto& [id, e] : met_sorted) {
            h.update_u32(id);
            h.update_u32(e.group_seen);
            h.update_u32(e.count);
        }
        known_sorted.assign(a.known.begin(), a.known.end());
        std::sort(known_sorted.begin(), known_sorted.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        for (const auto& [id, b] : known_sorted) {
            h.update_u32(id);
            h.update_u32(b.group);
            h.update_u32(b.timestamp);
        }
    }
    return h.digest();
}

}  // namespace mkperc
