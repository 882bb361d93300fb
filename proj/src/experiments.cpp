#include "mkperc/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <thread>

#include "mkperc/rng.hpp"

namespace fs = std::filesystem;

namespace mkperc {
namespace {

const char* const kAxes[] = {"N", "d_side", "oh", "pforg", "p_change"};

bool known_axis(const std::string& axis) {
    for (const char* a : kAxes)
        if (axis == a) return true;
    return false;
}

std::uint32_t to_u32_axis(const std::string& axis, double value) {
    if (!(value >= 0.0) || value != std::floor(value) ||
        value > 4294967295.0) {
        throw ConfigError("axis " + axis + " needs a non-negative integer, got " +
                          std::to_string(value));
    }
    return static_cast<std::uint32_t>(value);
}

// Reference transition times for the knowledge network at known settings.
struct TickAnchor {
    double n;
    double d;
    double oh;
    double tc;
};

const TickAnchor kAnchors[] = {
    {1e3, 5000, 0, 18000}, {1e4, 5000, 0, 1800}, {1e5, 5000, 0, 180},
    {1e3, 1000, 0, 800},   {1e3, 10000, 0, 70000},
    {1e3, 5000, 1, 2000},  {1e3, 5000, 2, 800},
    {1e3, 5000, 3, 300},   {1e3, 5000, 4, 200},
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_opt(const std::optional<Tick>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void stat_cols(std::string& line, const Stat& s) {
    if (s.count == 0) {
        line += ",,,,";
        return;
    }
    line += "," + fmt(s.mean) + "," + fmt(s.stddev) + "," + fmt(s.min) + "," +
            fmt(s.max);
}

}  // namespace

void SweepSpec::validate() const {
    if (!known_axis(axis))
        throw ConfigError("unknown sweep axis: " + axis);
    if (values.empty())
        throw ConfigError("sweep has no axis values");
    if (replicates < 1)
        throw ConfigError("sweep needs at least one replicate");
    for (double v : values)
        apply_axis(base, axis, v).validate();
}

Stat make_stat(const std::vector<double>& xs) {
    Stat s;
    s.count = xs.size();
    if (xs.empty()) return s;
    double sum = 0.0;
    s.min = xs[0];
    s.max = xs[0];
    for (double x : xs) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size()));
    return s;
}

SimConfig apply_axis(const SimConfig& base, const std::string& axis,
                     double value) {
    SimConfig config = base;
    if (axis == "N") {
        config.n_agents = to_u32_axis(axis, value);
    } else if (axis == "d_side") {
        config.d_side = to_u32_axis(axis, value);
    } else if (axis == "oh") {
        config.oh = to_u32_axis(axis, value);
    } else if (axis == "pforg") {
        config.pforg = value;
    } else if (axis == "p_change") {
        config.p_change = value;
        config.chgr = true;  // sweeping churn implies enabling it
    } else {
        throw ConfigError("unknown sweep axis: " + axis);
    }
    return config;
}

Tick auto_max_ticks(const SimConfig& config) {
    const double n = static_cast<double>(config.n_agents);
    const double d = static_cast<double>(config.d_side);
    const double reach = 2.0 * static_cast<double>(config.oh) + 1.0;

    double best_tc = kAnchors[0].tc;
    double best_dist = -1.0;
    for (const TickAnchor& a : kAnchors) {
        const double dn = std::log(n / a.n);
        const double dd = std::log(d / a.d);
        const double doh = std::log(reach / (2.0 * a.oh + 1.0));
        const double dist = dn * dn + dd * dd + doh * doh;
        if (best_dist < 0.0 || dist < best_dist) {
            best_dist = dist;
            best_tc = a.tc;
        }
    }

    // Takeoff happens once meetings roughly match the population size;
    // meetings accrue at about N(N-1)/2 * (2oh+1)^2 / d^2 per tick.
    double estimate = 0.0;
    if (config.n_agents >= 2)
        estimate = 0.85 * d * d / ((n - 1.0) * reach * reach);

    const double ticks = std::ceil(5.0 * std::max(best_tc, estimate));
    return static_cast<Tick>(std::max(1000.0, ticks));
}

std::size_t workers_from_env() {
    const char* raw = std::getenv("MKPERC_WORKERS");
    if (raw == nullptr) return 1;
    char* end = nullptr;
    const unsigned long v = std::strtoul(raw, &end, 10);
    if (end == raw || *end != '\0' || v < 1) return 1;
    return static_cast<std::size_t>(v);
}

SweepResult run_sweep(const SweepSpec& spec, const std::string& out_dir,
                      std::size_t workers) {
    spec.validate();

    SweepResult result;
    result.spec = spec;

    struct Planned {
        SimConfig config;
        std::string dir;
    };
    std::vector<Planned> plans;
    for (std::size_t cell = 0; cell < spec.values.size(); ++cell) {
        for (std::size_t rep = 0; rep < spec.replicates; ++rep) {
            RunRecord record;
            record.cell = cell;
            record.replicate = rep;
            record.axis_value = spec.values[cell];
            record.seed = derive_seed(spec.master_seed, cell, rep);

            Planned plan;
            plan.config = apply_axis(spec.base, spec.axis, spec.values[cell]);
            if (spec.auto_ticks)
                plan.config.max_ticks = auto_max_ticks(plan.config);
            plan.config.seed = record.seed;
            if (!out_dir.empty()) {
                plan.dir = out_dir + "/cell" + std::to_string(cell) + "_rep" +
                           std::to_string(rep);
            }
            plans.push_back(std::move(plan));
            result.runs.push_back(std::move(record));
        }
    }

    if (!out_dir.empty()) fs::create_directories(out_dir);

    const auto execute = [&](std::size_t i) {
        RunRecord& record = result.runs[i];
        try {
            record.summary = run_single(plans[i].config, plans[i].dir);
            record.ok = true;
        } catch (const std::exception& e) {
            record.error = e.what();
        } catch (...) {
            record.error = "unknown failure";
        }
    };

    if (workers <= 1) {
        for (std::size_t i = 0; i < plans.size(); ++i) execute(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t count = std::min(workers, plans.size());
        for (std::size_t w = 0; w < count; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < plans.size();
                     i = next.fetch_add(1)) {
                    execute(i);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    for (std::size_t cell = 0; cell < spec.values.size(); ++cell) {
        CellAggregate agg;
        agg.axis_value = spec.values[cell];

        std::vector<const RunRecord*> ok_runs;
        std::string first_error;
        for (const RunRecord& r : result.runs) {
            if (r.cell != cell) continue;
            if (r.ok) {
                ok_runs.push_back(&r);
            } else if (first_error.empty()) {
                first_error = r.error;
            }
        }
        if (ok_runs.empty()) {
            throw InvariantError("sweep cell " + spec.axis + "=" +
                                 fmt(spec.values[cell]) +
                                 " failed in all replicates: " + first_error);
        }
        agg.runs_ok = ok_runs.size();

        const auto collect =
            [&](const std::function<std::optional<double>(const RunSummary&)>&
                    pick) {
                std::vector<double> xs;
                for (const RunRecord* r : ok_runs) {
                    if (auto v = pick(r->summary)) xs.push_back(*v);
                }
                return make_stat(xs);
            };
        const auto opt_tick = [](const std::optional<Tick>& t) {
            return t ? std::optional<double>(static_cast<double>(*t))
                     : std::nullopt;
        };

        agg.condition_tick = collect([&](const RunSummary& s) {
            return opt_tick(s.knowledge.condition_tick);
        });
        agg.t_c = collect(
            [&](const RunSummary& s) { return opt_tick(s.knowledge.t_c); });
        agg.p_c =
            collect([](const RunSummary& s) { return s.knowledge.p_c; });
        agg.n_b = collect([](const RunSummary& s) {
            return s.knowledge.n_b
                       ? std::optional<double>(
                             static_cast<double>(*s.knowledge.n_b))
                       : std::nullopt;
        });
        agg.meeting_t_c = collect(
            [&](const RunSummary& s) { return opt_tick(s.meeting.t_c); });
        agg.meeting_p_c =
            collect([](const RunSummary& s) { return s.meeting.p_c; });
        agg.final_mk = collect(
            [](const RunSummary& s) { return std::optional<double>(s.final_mk); });
        agg.t_mk_50 =
            collect([&](const RunSummary& s) { return opt_tick(s.t_mk_50); });
        agg.final_delta_mk = collect([](const RunSummary& s) {
            return std::optional<double>(s.final_delta_mk);
        });
        agg.mean_delta_mk = collect([](const RunSummary& s) {
            return std::optional<double>(s.last_quarter_mean_delta_mk);
        });
        result.cells.push_back(std::move(agg));
    }

    if (!out_dir.empty()) write_sweep_csv(result, out_dir);
    return result;
}

std::map<std::string, SweepSpec> experiment_catalog() {
    std::map<std::string, SweepSpec> catalog;

    SimConfig base;  // N=1000, d_side=5000, m=100, oh=0, pforg=0, chgr=false

    {
        SweepSpec spec;
        spec.name = "scaling";
        spec.base = base;
        spec.base.stop_pb_factor = 3.2;
        spec.axis = "N";
        spec.values = {1e3, 1e4, 1e5};
        spec.auto_ticks = true;
        catalog[spec.name] = spec;
    }
    {
        SweepSpec spec;
        spec.name = "density";
        spec.base = base;
        spec.base.stop_pb_factor = 3.2;
        spec.axis = "d_side";
        spec.values = {1000, 5000, 10000};
        spec.auto_ticks = true;
        catalog[spec.name] = spec;
    }
    {
        SweepSpec spec;
        spec.name = "overhearing";
        spec.base = base;
        spec.base.stop_pb_factor = 3.2;
        spec.axis = "oh";
        spec.values = {0, 1, 2, 3, 4};
        spec.auto_ticks = true;
        catalog[spec.name] = spec;
    }
    {
        SweepSpec spec;
        spec.name = "forgetting";
        spec.base = base;
        spec.base.oh = 3;
        spec.base.max_ticks = 8000;
        spec.axis = "pforg";
        spec.values = {0.001, 0.1, 0.5, 0.7};
        catalog[spec.name] = spec;
    }
    {
        SweepSpec spec;
        spec.name = "churn";
        spec.base = base;
        spec.base.oh = 3;
        spec.base.chgr = true;
        spec.base.max_ticks = 8000;
        spec.axis = "p_change";
        spec.values = {0.0001, 0.001, 0.01};
        catalog[spec.name] = spec;
    }
    {
        SweepSpec spec;
        spec.name = "churn-population";
        spec.base = base;
        spec.base.oh = 3;
        spec.base.chgr = true;
        spec.base.p_change = 0.001;
        spec.base.max_ticks = 8000;
        spec.axis = "N";
        spec.values = {500, 1000, 2000};
        catalog[spec.name] = spec;
    }
    {
        SweepSpec spec;
        spec.name = "churn-density";
        spec.base = base;
        spec.base.oh = 3;
        spec.base.chgr = true;
        spec.base.p_change = 0.001;
        spec.base.max_ticks = 8000;
        spec.axis = "d_side";
        spec.values = {2500, 5000, 10000};
        catalog[spec.name] = spec;
    }
    {
        // Small dense world where both the knowledge and the meeting curve
        // saturate in a feasible number of ticks.
        SweepSpec spec;
        spec.name = "curves";
        spec.base = base;
        spec.base.n_agents = 300;
        spec.base.d_side = 200;
        spec.base.oh = 1;
        spec.base.max_ticks = 400000;
        spec.axis = "N";
        spec.values = {300};
        catalog[spec.name] = spec;
    }
    return catalog;
}

SweepSpec preset_spec(const std::string& name) {
    const auto catalog = experiment_catalog();
    const auto it = catalog.find(name);
    if (it == catalog.end()) {
        std::string names;
        for (const auto& [key, value] : catalog) {
            if (!names.empty()) names += ", ";
            names += key;
        }
        throw ConfigError("unknown preset '" + name + "' (available: " + names +
                          ")");
    }
    return it->second;
}

void write_sweep_csv(const SweepResult& result, const std::string& dir) {
    fs::create_directories(dir);

    {
        std::ofstream out(dir + "/summary.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + dir + "/summary.csv");
        out << "cell,axis,value,replicate,seed,ok,ticks_run,stop_reason,"
               "condition_tick,t_c,p_c,n_b,class_tick,classification,"
               "meet_condition_tick,meet_t_c,meet_p_c,meet_classification,"
               "final_mk,t_mk_50,final_delta_mk,last_quarter_mean_delta_mk,"
               "error\n";
        for (const RunRecord& r : result.runs) {
            const RunSummary& s = r.summary;
            out << r.cell << ',' << result.spec.axis << ','
                << fmt(r.axis_value) << ',' << r.replicate << ',' << r.seed
                << ',' << (r.ok ? 1 : 0) << ',';
            if (r.ok) {
                out << s.ticks_run << ',' << s.stop_reason << ','
                    << fmt_opt(s.knowledge.condition_tick) << ','
                    << fmt_opt(s.knowledge.t_c) << ','
                    << fmt_opt(s.knowledge.p_c) << ','
                    << (s.knowledge.n_b ? std::to_string(*s.knowledge.n_b)
                                        : std::string())
                    << ',' << fmt_opt(s.knowledge.class_tick) << ','
                    << s.knowledge.classification << ','
                    << fmt_opt(s.meeting.condition_tick) << ','
                    << fmt_opt(s.meeting.t_c) << ',' << fmt_opt(s.meeting.p_c)
                    << ',' << s.meeting.classification << ','
                    << fmt(s.final_mk) << ',' << fmt_opt(s.t_mk_50) << ','
                    << fmt(s.final_delta_mk) << ','
                    << fmt(s.last_quarter_mean_delta_mk) << ',';
            } else {
                out << ",,,,,,,,,,,,,,,,";
            }
            out << csv_escape(r.error) << '\n';
        }
        if (!out) throw IoError("failed writing " + dir + "/summary.csv");
    }

    {
        std::ofstream out(dir + "/aggregates.csv", std::ios::binary);
        if (!out) throw IoError("cannot write " + dir + "/aggregates.csv");
        out << "cell,axis,value,runs_ok";
        const char* const stats[] = {
            "condition_tick", "t_c",     "p_c",           "n_b",
            "meet_t_c",       "meet_p_c", "final_mk",      "t_mk_50",
            "final_delta_mk", "mean_delta_mk"};
        for (const char* name : stats) {
            out << ',' << name << "_mean," << name << "_stddev," << name
                << "_min," << name << "_max";
        }
        out << '\n';
        for (std::size_t cell = 0; cell < result.cells.size(); ++cell) {
            const CellAggregate& a = result.cells[cell];
            std::string line = std::to_string(cell) + "," + result.spec.axis +
                               "," + fmt(a.axis_value) + "," +
                               std::to_string(a.runs_ok);
            stat_cols(line, a.condition_tick);
            stat_cols(line, a.t_c);
            stat_cols(line, a.p_c);
            stat_cols(line, a.n_b);
            stat_cols(line, a.meeting_t_c);
            stat_cols(line, a.meeting_p_c);
            stat_cols(line, a.final_mk);
            stat_cols(line, a.t_mk_50);
            stat_cols(line, a.final_delta_mk);
            stat_cols(line, a.mean_delta_mk);
            out << line << '\n';
        }
        if (!out) throw IoError("failed writing " + dir + "/aggregates.csv");
    }
}

}  // namespace mkperc
