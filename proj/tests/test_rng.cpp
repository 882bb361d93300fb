#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "doctest.h"
#include "mkperc/hash.hpp"
#include "mkperc/rng.hpp"

using namespace mkperc;

TEST_CASE("splitmix64 reference stream") {
    std::uint64_t state = 0;
    CHECK(splitmix64(state) == 0xe220a8397b1dcdafull);
    CHECK(splitmix64(state) == 0x6e789e6aa1b965f4ull);
    CHECK(splitmix64(state) == 0x06c45d188009454full);
}

TEST_CASE("xoshiro256** frozen stream for seed 42") {
    Rng rng(42);
    CHECK(rng.next_u64() == 0x15780b2e0c2ec716ull);
    CHECK(rng.next_u64() == 0x6104d9866d113a7eull);
    CHECK(rng.next_u64() == 0xae17533239e499a1ull);
    CHECK(rng.next_u64() == 0xecb8ad4703b360a1ull);
}

TEST_CASE("reseeding restarts the stream") {
    Rng a(7);
    Rng b(7);
    for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
    a.reseed(7);
    b.reseed(8);
    bool same = true;
    for (int i = 0; i < 8; ++i) same = same && a.next_u64() == b.next_u64();
    CHECK_FALSE(same);
}

TEST_CASE("bounded stays in range and is roughly uniform") {
    Rng rng(123);
    CHECK(rng.bounded(0) == 0);
    CHECK(rng.bounded(1) == 0);

    const std::uint64_t n = 7;
    const int draws = 70000;
    std::vector<int> counts(n, 0);
    for (int i = 0; i < draws; ++i) {
        const std::uint64_t v = rng.bounded(n);
        REQUIRE(v < n);
        counts[v] += 1;
    }
    const double expected = static_cast<double>(draws) / n;
    double chi2 = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        const double d = counts[k] - expected;
        chi2 += d * d / expected;
    }
    // 6 degrees of freedom; 22.5 is the p ~ 0.001 cutoff.
    CHECK(chi2 < 22.5);
}

TEST_CASE("range is inclusive and covers endpoints") {
    Rng rng(5);
    std::set<std::int64_t> seen;
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t v = rng.range(-3, 3);
        REQUIRE(v >= -3);
        REQUIRE(v <= 3);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
    CHECK(rng.range(4, 4) == 4);
}

TEST_CASE("u01 lies in [0,1) with a sane mean") {
    Rng rng(99);
    double sum = 0.0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) {
        const double v = rng.u01();
        REQUIRE(v >= 0.0);
        REQUIRE(v < 1.0);
        sum += v;
    }
    CHECK(std::abs(sum / draws - 0.5) < 0.005);
}

TEST_CASE("bernoulli edge and typical cases") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
    int hits = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i)
        if (rng.bernoulli(0.3)) hits += 1;
    // 4 sigma around 30000 with sigma = sqrt(n p (1-p)) ~ 145.
    CHECK(std::abs(hits - 30000) < 600);
}

TEST_CASE("derive_seed is injective over a cell/replicate grid") {
    std::set<std::uint64_t> seeds;
    for (std::uint32_t cell = 0; cell < 100; ++cell)
        for (std::uint32_t rep = 0; rep < 50; ++rep)
            seeds.insert(derive_seed(1234, cell, rep));
    CHECK(seeds.size() == 100u * 50u);
    CHECK(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
}

TEST_CASE("FNV-1a 64 reference vectors") {
    Fnv1a64 empty;
    CHECK(empty.digest() == 0xcbf29ce484222325ull);

    Fnv1a64 a;
    a.update("a", 1);
    CHECK(a.digest() == 0xaf63dc4c8601ec8cull);
    CHECK(a.hex() == "af63dc4c8601ec8c");

    Fnv1a64 foobar;
    foobar.update("foobar", 6);
    CHECK(foobar.digest() == 0x85944171f73967e8ull);
}

TEST_CASE("Fnv1a64 helpers match byte-wise updates") {
    Fnv1a64 via_helper;
    via_helper.update_u32(0xdeadbeefu);
    std::uint32_t v = 0xdeadbeefu;
    Fnv1a64 via_bytes;
    via_bytes.update(&v, sizeof(v));
    CHECK(via_helper.digest() == via_bytes.digest());

    Fnv1a64 f;
    f.update_f64(1.5);
    Fnv1a64 g;
    g.update_f64(1.5);
    CHECK(f.digest() == g.digest());
    Fnv1a64 h;
    h.update_f64(-1.5);
    CHECK(f.digest() != h.digest());
}
