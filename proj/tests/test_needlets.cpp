#include <doctest.h>

#include <cmath>
#include <random>

#include "needleball/needlets.hpp"
#include "needleball/serialization.hpp"
#include "needleball/testfunctions.hpp"

using namespace nb;

namespace {
constexpr double kPi = 3.14159265358979323846;

NeedletFrame small_frame(double mu = 1.0, int J = 3) {
    FrameConfig cfg;
    cfg.dim = 2;
    cfg.mu = mu;
    cfg.levels = J;
    NeedletFrame f = build_frame(cfg);
    seal_frame(f);
    return f;
}
} // namespace

TEST_CASE("frame reconstruction of polynomials (J=3)") {
    NeedletFrame frame = small_frame();
    const ProductQuad& T = frame.norm_quad();
    for (uint64_t seed : {1ull, 2ull}) {
        auto f = random_bandlimited(frame.ball, 2, seed);
        auto c = analyze(frame, f.handle);
        auto rec = synthesize_on_quad(frame, c, T);
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < T.size(); ++i) {
            double gv = f.handle.eval(T.points[i]);
            num += T.weights[i] * (rec[i] - gv) * (rec[i] - gv);
            den += T.weights[i] * gv * gv;
        }
        CHECK(std::sqrt(num / den) <= 1e-9);
    }
}

TEST_CASE("round-trip on g(x)=x1 via generic point synthesis") {
    NeedletFrame frame = small_frame();
    FunctionHandle g{[](const BallPoint& p) { return p[0]; }, 1, false};
    auto c = analyze(frame, g);
    std::mt19937_64 eng(5);
    auto unif = [&]() { return double(eng() >> 11) * 0x1p-53; };
    std::vector<BallPoint> pts;
    for (int i = 0; i < 30; ++i) {
        double r = std::sqrt(unif());
        double th = 2 * kPi * unif();
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
    }
    auto vals = synthesize(frame, c, pts);
    for (size_t i = 0; i < pts.size(); ++i)
        CHECK(std::abs(vals[i] - pts[i][0]) <= 1e-9);
}

TEST_CASE("analysis of a constant lives at level 0 only") {
    NeedletFrame frame = small_frame();
    FunctionHandle one{[](const BallPoint&) { return 1.0; }, 0, true};
    auto c = analyze(frame, one);
    for (int j = 1; j <= frame.J; ++j)
        for (double v : c.re[size_t(j)]) CHECK(std::abs(v) <= 1e-12);
    // Level 0 reconstructs the constant by itself.
    double v0 = 0.0;
    const NeedletGrid& g0 = frame.grid(0);
    for (size_t i = 0; i < g0.size(); ++i)
        v0 += c.re[0][i] * std::sqrt(g0.weights[i]) * frame.ball.b_d_mu;
    CHECK(v0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("level orthogonality: coefficients vanish above the band") {
    NeedletFrame frame = small_frame(1.0, 4);
    // degree 2 polynomial: levels with 2^{j-2} > 2, i.e. j >= 4, see nothing.
    auto f = random_bandlimited(frame.ball, 2, 7);
    auto c = analyze(frame, f.handle);
    for (double v : c.re[4]) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("eval_needlet and synthesis agree; level-0 kernel is P_0") {
    NeedletFrame frame = small_frame();
    BallPoint x(0.25, -0.4);
    CHECK(eval_needlet(frame, 1, 2, x, NeedletSide::analysis) ==
          eval_needlet(frame, 1, 2, x, NeedletSide::synthesis));
    double expect = std::sqrt(frame.grid(0).weights[1]) * frame.ball.b_d_mu;
    CHECK(eval_needlet(frame, 0, 1, x, NeedletSide::analysis) ==
          doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("needlet norms: per-ring fast path equals the direct norm") {
    NeedletFrame frame = small_frame();
    auto norms = needlet_norms(frame, 2, {2.0});
    const NeedletGrid& g = frame.grid(2);
    int nt = g.product->n_theta;
    for (size_t b = 0; b < g.product->radii.size(); b += 2) {
        double direct = needlet_norm(frame, 2, b * size_t(nt), 2.0, NeedletSide::synthesis);
        CHECK(norms[0][b] == doctest::Approx(direct).epsilon(1e-10));
    }
}

TEST_CASE("parseval surrogate near 1 for band-limited inputs") {
    NeedletFrame frame = small_frame(1.0, 4);
    auto f = random_bandlimited(frame.ball, 4, 21);
    auto c = analyze(frame, f.handle);
    double sum2 = 0.0;
    for (int j = 0; j <= frame.J; ++j)
        for (size_t i = 0; i < c.re[size_t(j)].size(); ++i) sum2 += c.abs2(j, i);
    const ProductQuad& T = frame.norm_quad();
    std::vector<double> gv(T.size());
    for (size_t i = 0; i < T.size(); ++i) gv[i] = f.handle.eval(T.points[i]);
    double l2 = norm_p(gv, T.weights, 2.0);
    CHECK(sum2 / (l2 * l2) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("analysis rejects over-degree polynomials") {
    NeedletFrame frame = small_frame(1.0, 2);
    FunctionHandle f{[](const BallPoint& p) { return p[0]; }, 100, false};
    CHECK_THROWS_AS(analyze(frame, f), config_error);
}

TEST_CASE("synthesize validates the frame hash") {
    NeedletFrame frame = small_frame();
    auto f = random_bandlimited(frame.ball, 2, 9);
    auto c = analyze(frame, f.handle);
    c.frame_hash = "ffffffffffffffff";
    CHECK_THROWS_AS(synthesize(frame, c, {BallPoint(0.0, 0.0)}), config_error);
}
