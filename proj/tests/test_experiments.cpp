#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "mkperc/experiments.hpp"
#include "mkperc/rng.hpp"

using namespace mkperc;

namespace {

namespace fs = std::filesystem;

SweepSpec tiny_spec() {
    SweepSpec spec;
    spec.name = "tiny";
    spec.base.n_agents = 60;
    spec.base.ng = 2;
    spec.base.d_side = 30;
    spec.base.oh = 1;
    spec.base.max_ticks = 300;
    spec.base.stop_at_saturation = false;
    spec.base.snapshot_geometric = false;
    spec.axis = "N";
    spec.values = {40, 60};
    spec.replicates = 2;
    spec.master_seed = 99;
    return spec;
}

std::size_t count_lines(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    std::size_t n = 0;
    while (std::getline(f, line))
        if (!line.empty()) ++n;
    return n;
}

}  // namespace

TEST_CASE("stat summary basics") {
    const Stat s = make_stat({1.0, 2.0, 3.0, 4.0});
    CHECK(s.count == 4);
    CHECK(s.mean == doctest::Approx(2.5));
    CHECK(s.min == 1.0);
    CHECK(s.max == 4.0);
    CHECK(s.stddev == doctest::Approx(std::sqrt(1.25)));
    CHECK(s.min <= s.mean);
    CHECK(s.mean <= s.max);

    const Stat empty = make_stat({});
    CHECK(empty.count == 0);
}

TEST_CASE("apply_axis sets exactly the swept field") {
    SimConfig base;
    base.n_agents = 7;

    const SimConfig n = apply_axis(base, "N", 5000);
    CHECK(n.n_agents == 5000);
    CHECK(n.d_side == base.d_side);

    CHECK(apply_axis(base, "d_side", 123).d_side == 123);
    CHECK(apply_axis(base, "oh", 4).oh == 4);
    CHECK(apply_axis(base, "pforg", 0.25).pforg == doctest::Approx(0.25));
    const SimConfig pc = apply_axis(base, "p_change", 0.01);
    CHECK(pc.p_change == doctest::Approx(0.01));
    CHECK(pc.chgr);  // sweeping churn implies enabling it

    CHECK_THROWS_AS(apply_axis(base, "N", 250.5), ConfigError);
    CHECK_THROWS_AS(apply_axis(base, "oh", -1.0), ConfigError);
    CHECK_THROWS_AS(apply_axis(base, "bogus", 1.0), ConfigError);
}

TEST_CASE("spec validation") {
    SweepSpec spec = tiny_spec();
    CHECK_NOTHROW(spec.validate());

    spec.values.clear();
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = tiny_spec();
    spec.replicates = 0;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec = tiny_spec();
    spec.axis = "speed";
    CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("auto tick budgets scale with the expected takeoff time") {
    SimConfig cfg;
    cfg.n_agents = 1000;
    cfg.d_side = 5000;
    cfg.oh = 0;
    const Tick base = auto_max_ticks(cfg);
    CHECK(base >= 90000);
    CHECK(base <= 120000);

    cfg.oh = 2;
    const Tick oh2 = auto_max_ticks(cfg);
    CHECK(oh2 >= 3000);
    CHECK(oh2 <= 5000);
    CHECK(oh2 < base);

    cfg.oh = 0;
    cfg.n_agents = 10000;
    const Tick n4 = auto_max_ticks(cfg);
    CHECK(n4 >= 5000);
    CHECK(n4 <= 12000);

    cfg.n_agents = 10;
    cfg.d_side = 10;
    CHECK(auto_max_ticks(cfg) >= 1000);  // floor for tiny worlds
}

TEST_CASE("catalog carries the documented presets") {
    const auto catalog = experiment_catalog();
    for (const char* name :
         {"scaling", "density", "overhearing", "forgetting", "churn",
          "churn-population", "churn-density", "curves"})
        CHECK(catalog.count(name) == 1);

    const SweepSpec scaling = preset_spec("scaling");
    CHECK(scaling.axis == "N");
    CHECK(scaling.values == std::vector<double>{1000, 10000, 100000});
    CHECK(scaling.base.oh == 0);
    CHECK(scaling.base.pforg == 0.0);
    CHECK(scaling.base.m == 100);  // the studied mobility regime
    CHECK(scaling.auto_ticks);

    const SweepSpec forgetting = preset_spec("forgetting");
    CHECK(forgetting.axis == "pforg");
    CHECK(forgetting.values == std::vector<double>{0.001, 0.1, 0.5, 0.7});
    CHECK(forgetting.base.oh == 3);
    CHECK(forgetting.base.n_agents == 1000);
    CHECK(forgetting.base.d_side == 5000);
    CHECK(forgetting.base.max_ticks == 8000);

    const SweepSpec density = preset_spec("density");
    CHECK(density.axis == "d_side");
    CHECK(density.values == std::vector<double>{1000, 5000, 10000});

    const SweepSpec churn = preset_spec("churn");
    CHECK(churn.axis == "p_change");
    CHECK(churn.base.chgr);

    CHECK(preset_spec("churn-population").axis == "N");
    CHECK(preset_spec("churn-density").axis == "d_side");

    CHECK_THROWS_AS(preset_spec("warp"), ConfigError);
}

TEST_CASE("sweeps are deterministic and parallel-invariant") {
    const SweepSpec spec = tiny_spec();
    const SweepResult a = run_sweep(spec);
    const SweepResult b = run_sweep(spec);
    const SweepResult c = run_sweep(spec, "", 3);

    REQUIRE(a.runs.size() == 4);
    REQUIRE(b.runs.size() == 4);
    REQUIRE(c.runs.size() == 4);

    std::set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
        const RunRecord& ra = a.runs[i];
        CHECK(ra.ok);
        CHECK(ra.seed == b.runs[i].seed);
        CHECK(ra.seed == c.runs[i].seed);
        CHECK(ra.summary.final_state_digest ==
              b.runs[i].summary.final_state_digest);
        CHECK(ra.summary.final_state_digest ==
              c.runs[i].summary.final_state_digest);
        CHECK(ra.summary.final_mk == c.runs[i].summary.final_mk);
        seeds.insert(ra.seed);
    }
    CHECK(seeds.size() == a.runs.size());  // derived seeds never collide

    REQUIRE(a.cells.size() == 2);
    for (const CellAggregate& cell : a.cells) {
        CHECK(cell.runs_ok == 2);
        CHECK(cell.final_mk.min <= cell.final_mk.mean);
        CHECK(cell.final_mk.mean <= cell.final_mk.max);
    }
    // Different master seed, different runs.
    SweepSpec other = tiny_spec();
    other.master_seed = 100;
    const SweepResult d = run_sweep(other);
    CHECK(d.runs[0].seed != a.runs[0].seed);
}

TEST_CASE("one failed replicate is contained, a dead cell aborts") {
    const fs::path dir = fs::temp_directory_path() / "mkperc_sweep_fail";
    fs::remove_all(dir);
    fs::create_directories(dir);
    // Occupy the first run's directory name with a regular file so only that
    // run fails.
    { std::ofstream(dir / "cell0_rep0") << "in the way"; }

    SweepSpec spec = tiny_spec();
    const SweepResult result = run_sweep(spec, dir.string());
    REQUIRE(result.runs.size() == 4);
    CHECK(!result.runs[0].ok);
    CHECK(!result.runs[0].error.empty());
    CHECK(result.runs[1].ok);
    CHECK(result.cells[0].runs_ok == 1);
    CHECK(result.cells[1].runs_ok == 2);

    // summary.csv: header + one row per run; aggregates: header + per cell.
    CHECK(count_lines(dir / "summary.csv") == 5);
    CHECK(count_lines(dir / "aggregates.csv") == 3);

    fs::remove_all(dir);
    fs::create_directories(dir);
    { std::ofstream(dir / "cell0_rep0") << "in the way"; }
    spec.replicates = 1;  // now the whole first cell fails
    CHECK_THROWS_AS(run_sweep(spec, dir.string()), InvariantError);
    fs::remove_all(dir);
}

TEST_CASE("worker count comes from the environment, defensively") {
    unsetenv("MKPERC_WORKERS");
    CHECK(workers_from_env() == 1);
    setenv("MKPERC_WORKERS", "4", 1);
    CHECK(workers_from_env() == 4);
    setenv("MKPERC_WORKERS", "0", 1);
    CHECK(workers_from_env() == 1);
    setenv("MKPERC_WORKERS", "abc", 1);
    CHECK(workers_from_env() == 1);
    setenv("MKPERC_WORKERS", "2x", 1);
    CHECK(workers_from_env() == 1);
    unsetenv("MKPERC_WORKERS");
}
