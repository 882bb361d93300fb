#include "mkperc/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mkperc/config.hpp"

namespace mkperc {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (const char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

double to_double(const std::string& s, const std::string& where) {
    try {
        return std::stod(s);
    } catch (const std::exception&) {
        throw IoError("bad numeric field '" + s + "' in " + where);
    }
}

std::uint64_t to_u64(const std::string& s, const std::string& where) {
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw IoError("bad integer field '" + s + "' in " + where);
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    return f;
}

}  // namespace

std::string metrics_csv_header() {
    return "tick,mk,meeting_rate,K_dir,K_undir,Ps,Pb,PsG,PbG,delta_mk,"
           "Ps_meet,Pb_meet,PsG_meet,PbG_meet,arcs,edges";
}

std::string metrics_csv_line(const MetricsRow& r) {
    std::string out = std::to_string(r.tick);
    out += ',' + fmt_double(r.mk);
    out += ',' + fmt_double(r.meeting_rate);
    out += ',';
    if (r.k_dir_defined) out += fmt_double(r.k_dir);
    out += ',';
    if (r.k_undir_defined) out += fmt_double(r.k_undir);
    out += ',' + fmt_double(r.ps);
    out += ',' + fmt_double(r.pb);
    out += ',' + fmt_double(r.psg);
    out += ',' + fmt_double(r.pbg);
    out += ',' + fmt_double(r.delta_mk);
    out += ',' + fmt_double(r.ps_meet);
    out += ',' + fmt_double(r.pb_meet);
    out += ',' + fmt_double(r.psg_meet);
    out += ',' + fmt_double(r.pbg_meet);
    out += ',' + std::to_string(r.arcs);
    out += ',' + std::to_string(r.edges);
    return out;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows,
                       const std::string& path) {
    std::ofstream f = open_out(path);
    f << metrics_csv_header() << '\n';
    for (const MetricsRow& r : rows) f << metrics_csv_line(r) << '\n';
    if (!f) throw IoError("write failed: " + path);
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
    std::ifstream f = open_in(path);
    std::string line;
    if (!std::getline(f, line) ||
        split_csv(line) != split_csv(metrics_csv_header()))
        throw IoError("unexpected metrics header in " + path);
    std::vector<MetricsRow> rows;
    while (std::getline(f, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv(line);
        if (fields.size() != 16)
            throw IoError("bad metrics row in " + path + ": " + line);
        MetricsRow r;
        r.tick = static_cast<Tick>(to_u64(fields[0], path));
        r.mk = to_double(fields[1], path);
        r.meeting_rate = to_double(fields[2], path);
        if (!fields[3].empty()) {
            r.k_dir_defined = true;
            r.k_dir = to_double(fields[3], path);
        }
        if (!fields[4].empty()) {
            r.k_undir_defined = true;
            r.k_undir = to_double(fields[4], path);
        }
        r.ps = to_double(fields[5], path);
        r.pb = to_double(fields[6], path);
        r.psg = to_double(fields[7], path);
        r.pbg = to_double(fields[8], path);
        r.delta_mk = to_double(fields[9], path);
        r.ps_meet = to_double(fields[10], path);
        r.pb_meet = to_double(fields[11], path);
        r.psg_meet = to_double(fields[12], path);
        r.pbg_meet = to_double(fields[13], path);
        r.arcs = to_u64(fields[14], path);
        r.edges = to_u64(fields[15], path);
        rows.push_back(r);
    }
    return rows;
}

void export_csv(const MeetingNetwork& net, const std::string& path) {
    std::ofstream f = open_out(path);
    f << "a,b,weight\n";
    for (const auto& [key, w] : net.edges)
        f << key.first << ',' << key.second << ',' << w << '\n';
    if (!f) throw IoError("write failed: " + path);
}

void export_csv(const KnowledgeNetwork& net, const std::string& path) {
    std::ofstream f = open_out(path);
    f << "i,j,group,timestamp\n";
    for (const auto& [key, b] : net.arcs)
        f << key.first << ',' << key.second << ',' << b.group << ','
          << b.timestamp << '\n';
    if (!f) throw IoError("write failed: " + path);
}

MeetingNetwork read_meeting_csv(const std::string& path, std::uint32_t n) {
    std::ifstream f = open_in(path);
    std::string line;
    if (!std::getline(f, line) || split_csv(line) != split_csv("a,b,weight"))
        throw IoError("unexpected edge-list header in " + path);
    MeetingNetwork net;
    net.n = n;
    while (std::getline(f, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv(line);
        if (fields.size() != 3)
            throw IoError("bad edge row in " + path + ": " + line);
        const auto a = static_cast<AgentId>(to_u64(fields[0], path));
        const auto b = static_cast<AgentId>(to_u64(fields[1], path));
        if (a >= n || b >= n) throw IoError("node id out of range in " + path);
        net.edges[{a, b}] = static_cast<std::uint32_t>(to_u64(fields[2], path));
    }
    return net;
}

KnowledgeNetwork read_knowledge_csv(const std::string& path, std::uint32_t n) {
    std::ifstream f = open_in(path);
    std::string line;
    if (!std::getline(f, line) ||
        split_csv(line) != split_csv("i,j,group,timestamp"))
        throw IoError("unexpected arc-list header in " + path);
    KnowledgeNetwork net;
    net.n = n;
    while (std::getline(f, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv(line);
        if (fields.size() != 4)
            throw IoError("bad arc row in " + path + ": " + line);
        const auto i = static_cast<AgentId>(to_u64(fields[0], path));
        const auto j = static_cast<AgentId>(to_u64(fields[1], path));
        if (i >= n || j >= n) throw IoError("node id out of range in " + path);
        net.arcs[{i, j}] =
            Belief{static_cast<GroupId>(to_u64(fields[2], path)),
                   static_cast<Tick>(to_u64(fields[3], path))};
    }
    return net;
}

}  // namespace mkperc
