#include "mkperc/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mkperc/config.hpp"
#include "mkperc/unionfind.hpp"

namespace mkperc {

namespace {

std::vector<std::uint32_t> undirected_degrees(const MeetingNetwork& net) {
    std::vector<std::uint32_t> deg(net.n, 0);
    for (const auto& [key, w] : net.edges) {
        (void)w;
        deg[key.first] += 1;
        deg[key.second] += 1;
    }
    return deg;
}

struct DirectedDegrees {
    std::vector<std::uint32_t> in;
    std::vector<std::uint32_t> out;
};

DirectedDegrees directed_degrees(const KnowledgeNetwork& net) {
    DirectedDegrees d{std::vector<std::uint32_t>(net.n, 0),
                      std::vector<std::uint32_t>(net.n, 0)};
    for (const auto& [key, b] : net.arcs) {
        (void)b;
        d.out[key.first] += 1;
        d.in[key.second] += 1;
    }
    return d;
}

struct LineFit {
    bool ok = false;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    LineFit fit;
    const std::size_t n = x.size();
    if (n < 2) return fit;
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) return fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += e * e;
        ss_tot += (y[i] - my) * (y[i] - my);
    }
    fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.rms = std::sqrt(ss_res / n);
    fit.ok = true;
    return fit;
}

}  // namespace

DegreeStats degree_stats(const MeetingNetwork& net) {
    DegreeStats s;
    if (net.n == 0) return s;
    const auto deg = undirected_degrees(net);
    double sum_k = 0.0;
    double sum_k2 = 0.0;
    for (const std::uint32_t k : deg) {
        sum_k += k;
        sum_k2 += static_cast<double>(k) * k;
        s.histogram[k] += 1;
    }
    s.mean_k = sum_k / net.n;
    s.mean_k2 = sum_k2 / net.n;
    return s;
}

DegreeStats degree_stats(const KnowledgeNetwork& net) {
    DegreeStats s;
    if (net.n == 0) return s;
    const auto d = directed_degrees(net);
    double sum_in = 0.0;
    double sum_out = 0.0;
    double sum_inout = 0.0;
    for (std::uint32_t v = 0; v < net.n; ++v) {
        sum_in += d.in[v];
        sum_out += d.out[v];
        sum_inout += static_cast<double>(d.in[v]) * d.out[v];
        s.histogram[d.in[v] + d.out[v]] += 1;
    }
    s.mean_kin = sum_in / net.n;
    s.mean_kout = sum_out / net.n;
    s.mean_kin_kout = sum_inout / net.n;
    return s;
}

Heterogeneity heterogeneity_condition(const MeetingNetwork& net) {
    if (net.edges.empty())
        throw InvariantError("heterogeneity parameter undefined: no links");
    const DegreeStats s = degree_stats(net);
    Heterogeneity h;
    h.k = s.mean_k2 / (2.0 * s.mean_k);
    h.percolating = h.k > 1.0;
    return h;
}

Heterogeneity heterogeneity_condition(const KnowledgeNetwork& net) {
    if (net.arcs.empty())
        throw InvariantError("heterogeneity parameter undefined: no links");
    const DegreeStats s = degree_stats(net);
    Heterogeneity h;
    h.k = s.mean_kin_kout / s.mean_kin;
    h.percolating = h.k > 1.0;
    return h;
}

GiantCluster giant_cluster(
    std::uint32_t n, const std::vector<std::pair<AgentId, AgentId>>& links) {
    GiantCluster g;
    if (n == 0 || links.empty()) return g;
    UnionFind uf(n);
    for (const auto& [a, b] : links) uf.add_link(a, b);
    const std::uint32_t root = uf.giant_root();
    for (AgentId v = 0; v < n; ++v)
        if (uf.find(v) == root) g.nodes.push_back(v);
    for (const auto& link : links)
        if (uf.find(link.first) == root) g.links.push_back(link);
    return g;
}

GiantCluster giant_cluster(const MeetingNetwork& net) {
    return giant_cluster(net.n, net.edge_list());
}

GiantCluster giant_cluster(const KnowledgeNetwork& net) {
    return giant_cluster(net.n, net.arc_list());
}

std::uint32_t largest_strong_component(
    std::uint32_t n, const std::vector<std::pair<AgentId, AgentId>>& arcs) {
    if (n == 0) return 0;

    std::vector<std::uint32_t> off(n + 1, 0);
    for (const auto& [i, j] : arcs) {
        (void)j;
        off[i + 1] += 1;
    }
    std::partial_sum(off.begin(), off.end(), off.begin());
    std::vector<std::uint32_t> adj(arcs.size());
    std::vector<std::uint32_t> cursor(off.begin(), off.end() - 1);
    for (const auto& [i, j] : arcs) adj[cursor[i]++] = j;

    // Iterative Tarjan.
    constexpr std::uint32_t kUnvisited = UINT32_MAX;
    std::vector<std::uint32_t> index(n, kUnvisited);
    std::vector<std::uint32_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::uint32_t> stack;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> frames;  // node, edge cursor
    std::uint32_t counter = 0;
    std::uint32_t best = 1;

    for (std::uint32_t s = 0; s < n; ++s) {
        if (index[s] != kUnvisited) continue;
        frames.emplace_back(s, off[s]);
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = true;
        while (!frames.empty()) {
            auto& [v, cur] = frames.back();
            if (cur < off[v + 1]) {
                const std::uint32_t w = adj[cur++];
                if (index[w] == kUnvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.emplace_back(w, off[w]);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::uint32_t size = 0;
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    ++size;
                } while (w != v);
                best = std::max(best, size);
            }
            const std::uint32_t done = v;
            frames.pop_back();
            if (!frames.empty())
                low[frames.back().first] =
                    std::min(low[frames.back().first], low[done]);
        }
    }
    return best;
}

PercolationPoint percolation_point(const MeetingNetwork& net, Tick tick) {
    PercolationPoint p;
    p.tick = tick;
    p.directed = false;
    p.link_count = net.edges.size();
    if (net.n == 0) return p;
    const auto deg = undirected_degrees(net);
    double sum_k = 0.0;
    double sum_k2 = 0.0;
    std::uint32_t active = 0;
    for (const std::uint32_t k : deg) {
        sum_k += k;
        sum_k2 += static_cast<double>(k) * k;
        if (k > 0) ++active;
    }
    p.ps = static_cast<double>(active) / net.n;
    const double possible = static_cast<double>(net.n) * (net.n - 1) / 2.0;
    if (possible > 0.0) p.pb = static_cast<double>(p.link_count) / possible;
    if (sum_k > 0.0) {
        p.k_defined = true;
        p.k_condition = sum_k2 / sum_k;
        p.percolating = p.k_condition > 2.0;
    }
    if (p.link_count > 0) {
        UnionFind uf(net.n);
        for (const auto& [key, w] : net.edges) {
            (void)w;
            uf.add_link(key.first, key.second);
        }
        p.psg = static_cast<double>(uf.giant_size()) / net.n;
        if (possible > 0.0) p.pbg = static_cast<double>(uf.giant_links()) / possible;
    }
    return p;
}

PercolationPoint percolation_point(const KnowledgeNetwork& net, Tick tick) {
    PercolationPoint p;
    p.tick = tick;
    p.directed = true;
    p.link_count = net.arcs.size();
    if (net.n == 0) return p;
    const auto d = directed_degrees(net);
    double sum_in = 0.0;
    double sum_inout = 0.0;
    std::uint32_t active = 0;
    for (std::uint32_t v = 0; v < net.n; ++v) {
        sum_in += d.in[v];
        sum_inout += static_cast<double>(d.in[v]) * d.out[v];
        if (d.in[v] + d.out[v] > 0) ++active;
    }
    p.ps = static_cast<double>(active) / net.n;
    const double possible = static_cast<double>(net.n) * (net.n - 1);
    if (possible > 0.0) p.pb = static_cast<double>(p.link_count) / possible;
    if (sum_in > 0.0) {
        p.k_defined = true;
        p.k_condition = sum_inout / sum_in;
        p.percolating = p.k_condition > 1.0;
    }
    if (p.link_count > 0) {
        UnionFind uf(net.n);
        for (const auto& [key, b] : net.arcs) {
            (void)b;
            uf.add_link(key.first, key.second);
        }
        p.psg = static_cast<double>(uf.giant_size()) / net.n;
        if (possible > 0.0) p.pbg = static_cast<double>(uf.giant_links()) / possible;
    }
    return p;
}

ThresholdEstimate detect_threshold(const std::vector<PercolationPoint>& series) {
    ThresholdEstimate est;
    if (series.empty()) {
        est.diagnostic = "empty series";
        return est;
    }
    est.directed = series.front().directed;

    for (const PercolationPoint& p : series) {
        if (p.percolating) {
            est.condition_tick = p.tick;
            break;
        }
    }
    for (const PercolationPoint& p : series) {
        if (p.psg >= kGiantCutoff) {
            est.t_c = p.tick;
            est.p_c = p.pb;
            est.n_b = p.link_count;
            break;
        }
    }
    if (est.directed) {
        for (const PercolationPoint& p : series) {
            if (p.pbg >= kGiantCutoff) {
                est.class_tick = p.tick;
                break;
            }
        }
    } else {
        est.class_tick = est.t_c;
    }

    if (est.class_tick) {
        for (const PercolationPoint& p : series) {
            if (p.tick >= *est.class_tick) break;
            est.max_psg_below = std::max(est.max_psg_below, p.psg);
            est.max_pbg_below = std::max(est.max_pbg_below, p.pbg);
        }
        est.site_percolation = est.max_psg_below < kGiantCutoff;
        est.link_percolation = est.max_pbg_below < kGiantCutoff;
        if (est.site_percolation && est.link_percolation)
            est.classification = "mixed";
        else if (est.site_percolation)
            est.classification = "site percolation";
        else if (est.link_percolation)
            est.classification = "link percolation";
        else
            est.classification = "none";
    }

    if (!est.condition_tick)
        est.diagnostic += "heterogeneity condition never held; ";
    if (!est.t_c)
        est.diagnostic += "giant cluster never reached the 0.05 site cutoff; ";
    if (!est.class_tick)
        est.diagnostic +=
            "giant-link curve never reached the 0.05 cutoff, percolation type "
            "undetermined; ";
    while (!est.diagnostic.empty() &&
           (est.diagnostic.back() == ' ' || est.diagnostic.back() == ';'))
        est.diagnostic.pop_back();

    if (est.t_c && est.p_c) {
        std::vector<double> x;
        std::vector<double> y;
        for (const PercolationPoint& p : series) {
            if (p.pb > *est.p_c && p.pb <= 3.0 * *est.p_c && p.psg > 0.0) {
                x.push_back(std::log(p.pb - *est.p_c));
                y.push_back(std::log(p.psg));
            }
        }
        const LineFit fit = fit_line(x, y);
        if (fit.ok) {
            est.beta = fit.slope;
            est.beta_residual = fit.rms;
        }
    }
    return est;
}

double mk_level(const KnowledgeNetwork& net) {
    if (net.n <= 1) return 1.0;
    return static_cast<double>(net.arcs.size()) /
           (static_cast<double>(net.n) * (net.n - 1));
}

double meeting_rate(const MeetingNetwork& net) {
    if (net.n <= 1) return 1.0;
    return static_cast<double>(net.edges.size()) /
           (static_cast<double>(net.n) * (net.n - 1) / 2.0);
}

double delta_mk(const SimState& state) {
    const std::size_t n = state.agents.size();
    if (n <= 1) return 0.0;
    std::uint64_t wrong = 0;
    for (const Agent& a : state.agents)
        for (const auto& [target, belief] : a.known)
            if (target != a.id && belief.group != state.agents[target].group)
                ++wrong;
    return static_cast<double>(wrong) / (static_cast<double>(n) * (n - 1));
}

std::optional<PowerLawFit> degree_distribution_fit(
    const std::map<std::uint32_t, std::uint32_t>& histogram) {
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& [degree, count] : histogram) {
        if (degree == 0 || count == 0) continue;
        x.push_back(std::log(static_cast<double>(degree)));
        y.push_back(std::log(static_cast<double>(count)));
    }
    if (x.size() < 3) return std::nullopt;
    const LineFit fit = fit_line(x, y);
    if (!fit.ok) return std::nullopt;
    return PowerLawFit{fit.slope, fit.r2};
}

}  // namespace mkperc
