#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mkperc/network.hpp"

namespace mkperc {

// One per-tick row of the metrics time series. The leading ten columns are
// fixed: tick,mk,meeting_rate,K_dir,K_undir,Ps,Pb,PsG,PbG,delta_mk. K_dir is
// the directed heterogeneity ratio of the knowledge network (condition > 1),
// K_undir the undirected ratio <k^2>/<k> of the meeting network (condition
// > 2); both serialize as empty fields while undefined. Ps/Pb/PsG/PbG are the
// knowledge network's occupation and giant-cluster fractions; the meeting
// network's analogues plus raw link counts follow as trailing columns.
struct MetricsRow {
    Tick tick = 0;
    double mk = 0.0;
    double meeting_rate = 0.0;
    bool k_dir_defined = false;
    double k_dir = 0.0;
    bool k_undir_defined = false;
    double k_undir = 0.0;
    double ps = 0.0;
    double pb = 0.0;
    double psg = 0.0;
    double pbg = 0.0;
    double delta_mk = 0.0;
    double ps_meet = 0.0;
    double pb_meet = 0.0;
    double psg_meet = 0.0;
    double pbg_meet = 0.0;
    std::uint64_t arcs = 0;
    std::uint64_t edges = 0;
};

std::string metrics_csv_header();
std::string metrics_csv_line(const MetricsRow& row);
void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::string& path);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

// Edge-list exports, 0-based ids. Meeting: header a,b,weight. Knowledge:
// header i,j,group,timestamp.
void export_csv(const MeetingNetwork& net, const std::string& path);
void export_csv(const KnowledgeNetwork& net, const std::string& path);
MeetingNetwork read_meeting_csv(const std::string& path, std::uint32_t n);
KnowledgeNetwork read_knowledge_csv(const std::string& path, std::uint32_t n);

}  // namespace mkperc
