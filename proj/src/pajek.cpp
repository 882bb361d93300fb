#include "mkperc/pajek.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "mkperc/config.hpp"

namespace mkperc {

namespace {

void append_vertices(std::string& out, std::uint32_t n) {
    out += "*Vertices " + std::to_string(n) + "\n";
    for (std::uint32_t i = 1; i <= n; ++i) {
        const std::string id = std::to_string(i);
        out += id + " \"" + id + "\"\n";
    }
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << text;
    if (!f) throw IoError("write failed: " + path);
}

}  // namespace

std::string pajek_string(const MeetingNetwork& net) {
    std::string out;
    append_vertices(out, net.n);
    out += "*Edges\n";
    for (const auto& [key, w] : net.edges)
        out += std::to_string(key.first + 1) + " " +
               std::to_string(key.second + 1) + " " + std::to_string(w) + "\n";
    return out;
}

std::string pajek_string(const KnowledgeNetwork& net) {
    std::string out;
    append_vertices(out, net.n);
    out += "*Arcs\n";
    for (const auto& [key, b] : net.arcs) {
        (void)b;
        out += std::to_string(key.first + 1) + " " +
               std::to_string(key.second + 1) + "\n";
    }
    return out;
}

void export_pajek(const MeetingNetwork& net, const std::string& path) {
    write_text(pajek_string(net), path);
}

void export_pajek(const KnowledgeNetwork& net, const std::string& path) {
    write_text(pajek_string(net), path);
}

PajekGraph parse_pajek(const std::string& text) {
    PajekGraph g;
    std::istringstream in(text);
    std::string line;
    enum class Section { kNone, kVertices, kLinks } section = Section::kNone;
    bool saw_vertices = false;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '%') continue;
        if (line[0] == '*') {
            std::istringstream ls(line);
            std::string keyword;
            ls >> keyword;
            for (char& c : keyword) c = static_cast<char>(std::tolower(c));
            if (keyword == "*vertices") {
                if (!(ls >> g.n))
                    throw IoError("pajek line " + std::to_string(lineno) +
                                  ": *Vertices without a count");
                section = Section::kVertices;
                saw_vertices = true;
            } else if (keyword == "*edges" || keyword == "*arcs") {
                g.directed = keyword == "*arcs";
                section = Section::kLinks;
            } else {
                throw IoError("pajek line " + std::to_string(lineno) +
                              ": unknown section " + keyword);
            }
            continue;
        }
        if (section == Section::kVertices) continue;
        if (section != Section::kLinks)
            throw IoError("pajek line " + std::to_string(lineno) +
                          ": data before any section header");
        std::istringstream ls(line);
        std::uint64_t a = 0;
        std::uint64_t b = 0;
        if (!(ls >> a >> b))
            throw IoError("pajek line " + std::to_string(lineno) +
                          ": expected two vertex ids");
        double w = 1.0;
        if (!(ls >> w)) w = 1.0;  // absent or unparsable weight
        if (a < 1 || b < 1 || a > g.n || b > g.n)
            throw IoError("pajek line " + std::to_string(lineno) +
                          ": vertex id out of range");
        g.links.emplace(std::make_pair(static_cast<AgentId>(a - 1),
                                       static_cast<AgentId>(b - 1)),
                        static_cast<std::uint32_t>(w));
    }
    if (!saw_vertices) throw IoError("pajek: missing *Vertices section");
    return g;
}

PajekGraph load_pajek(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_pajek(buf.str());
}

}  // namespace mkperc
