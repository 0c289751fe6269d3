#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include "needleball/serialization.hpp"
#include "needleball/testfunctions.hpp"

using namespace nb;

TEST_CASE("hex float round trip is bit exact") {
    std::mt19937_64 eng(1);
    for (int i = 0; i < 2000; ++i) {
        uint64_t bits = eng();
        bits &= ~(0x7ffULL << 52); // clear exponent to avoid NaN/inf
        bits |= (uint64_t(1 + (eng() % 2045)) << 52);
        double v;
        static_assert(sizeof v == sizeof bits);
        std::memcpy(&v, &bits, sizeof v);
        double w = parse_hex_double(hex_double(v));
        CHECK(std::memcmp(&v, &w, sizeof v) == 0);
    }
    for (double v : {0.0, -0.0, 1.0, -1.0, 1e-300, -2.5e300, 3.14159
}) {
        double w = parse_hex_double(hex_double(v));
        CHECK(std::memcmp(&v, &w, sizeof v) == 0);
    }
}

TEST_CASE("grid JSON round trip preserves every bit") {
    WeightedBall ball(2, 1.5);
    NeedletGrid g = build_grid(ball, 2, GridStrategy::product);
    ojson j = grid_to_json(g);
    NeedletGrid g2 = grid_from_json(j, ball);
    CHECK(canonical_dump(grid_to_json(g2)) == canonical_dump(j));
    REQUIRE(g2.size() == g.size());
    for (size_t i = 0; i < g.size(); ++i) {
        CHECK(g2.points[i][0] == g.points[i][0]);
        CHECK(g2.weights[i] == g.weights[i]);
    }
}

TEST_CASE("frame save/load/re-save is byte identical and hash-checked") {
    FrameConfig cfg;
    cfg.dim = 2;
    cfg.mu = 1.0;
    cfg.levels = 2;
    NeedletFrame f = build_frame(cfg);
    seal_frame(f);
    std::string path = "test_frame_roundtrip.json";
    save_frame(f, path);
    NeedletFrame g = load_frame(path);
    CHECK(g.frame_hash == f.frame_hash);
    std::string path2 = "test_frame_roundtrip2.json";
    save_frame(g, path2);
    // Byte comparison of the two files.
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(slurp(path) == slurp(path2));
    std::remove(path.c_str());
    std::remove(path2.c_str());

    ojson bad = frame_to_json(f);
    bad["frame_hash"] = "0123456789abcdef";
    CHECK_THROWS_AS(frame_from_json(bad), config_error);
}

TEST_CASE("coefficient sets round trip with complex storage") {
    FrameConfig cfg;
    cfg.dim = 2;
    cfg.mu = 1.0;
    cfg.levels = 2;
    NeedletFrame f = build_frame(cfg);
    seal_frame(f);
    auto fn = random_bandlimited(f.ball, 2, 77);
    auto c = analyze(f, fn.handle);
    ojson j = coeffs_to_json(c);
    auto c2 = coeffs_from_json(j);
    CHECK(c2.frame_hash == c.frame_hash);
    REQUIRE(c2.re.size() == c.re.size());
    for (size_t lj = 0; lj < c.re.size(); ++lj)
        for (size_t i = 0; i < c.re[lj].size(); ++i) CHECK(c2.re[lj][i] == c.re[lj][i]);
    CHECK(canonical_dump(coeffs_to_json(c2)) == canonical_dump(j));
}

TEST_CASE("loaded frames compute like built frames") {
    FrameConfig cfg;
    cfg.dim = 2;
    cfg.mu = 1.0;
    cfg.levels = 2;
    NeedletFrame f = build_frame(cfg);
    seal_frame(f);
    NeedletFrame g = frame_from_json(frame_to_json(f));
    auto fn = random_bandlimited(f.ball, 2, 13);
    auto c1 = analyze(f, fn.handle);
    auto c2 = analyze(g, fn.handle);
    for (size_t lj = 0; lj < c1.re.size(); ++lj)
        for (size_t i = 0; i < c1.re[lj].size(); ++i) CHECK(c1.re[lj][i] == c2.re[lj][i]);
}
