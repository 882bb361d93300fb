#pragma once

#include <cstdint>
#include <string>

#include "mkperc/network.hpp"

namespace mkperc {

std::string pajek_string(const MeetingNetwork& net);
std::string pajek_string(const KnowledgeNetwork& net);

void export_pajek(const MeetingNetwork& net, const std::string& path);
void export_pajek(const KnowledgeNetwork& net, const std::string& path);

// Parsed .net file; link endpoints are 0-based once loaded. *Edges sections
// come back with directed=false, *Arcs with directed=true. Knowledge arcs
// carry no group/timestamp in Pajek, so the parse target is plain links.
struct PajekGraph {
    std::uint32_t n = 0;
    bool directed = false;
    std::map<std::pair<AgentId, AgentId>, std::uint32_t> links;
};

PajekGraph parse_pajek(const std::string& text);
PajekGraph load_pajek(const std::string& path);

}  // namespace mkperc
