#include <doctest.h>

#include <cmath>

#include "needleball/serialization.hpp"
#include "needleball/spaces.hpp"
#include "needleball/testfunctions.hpp"

using namespace nb;

namespace {
NeedletFrame small_frame(double mu = 1.0, int J = 3) {
    FrameConfig cfg;
    cfg.dim = 2;
    cfg.mu = mu;
    cfg.levels = J;
    NeedletFrame f = build_frame(cfg);
    seal_frame(f);
    return f;
}

CoefficientSet zero_coeffs(const NeedletFrame& f) {
    CoefficientSet c;
    c.frame_hash = f.frame_hash;
    c.re.resize(size_t(f.J) + 1);
    c.im.resize(size_t(f.J) + 1);
    for (int j = 0; j <= f.J; ++j) c.re[size_t(j)].assign(f.grid(j).size(), 0.0);
    return c;
}
} // namespace

TEST_CASE("sequence F-norm: single coefficient closed form") {
    NeedletFrame frame = small_frame();
    auto c = zero_coeffs(frame);
    int j = 2;
    size_t idx = 17;
    c.re[size_t(j)][idx] = 1.0;
    SpaceParams prm{0.75, 0.5, 2.5, 2.0, SpaceFamily::F};
    double W = weight_W(frame.ball, 1 << j, frame.grid(j).points[idx]);
    double expect = std::pow(2.0, prm.s * j) * std::pow(W, -prm.rho / 2.0) *
                    std::pow(frame.grid(j).cell_measures[idx], 1.0 / prm.p - 0.5);
    CHECK(f_norm_sequence(frame, c, prm) == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("sequence F-norm at p=q=2, s=rho=0 is the l2 norm of coefficients") {
    NeedletFrame frame = small_frame();
    auto f = random_bandlimited(frame.ball, 2, 3);
    auto c = analyze(frame, f.handle);
    double sum2 = 0.0;
    for (int j = 0; j <= frame.J; ++j)
        for (size_t i = 0; i < c.re[size_t(j)].size(); ++i) sum2 += c.abs2(j, i);
    SpaceParams prm{0.0, 0.0, 2.0, 2.0, SpaceFamily::F};
    CHECK(f_norm_sequence(frame, c, prm) == doctest::Approx(std::sqrt(sum2)).epsilon(1e-9));
}

TEST_CASE("sequence b-norm: delta coefficient closed form and p=q collapse") {
    NeedletFrame frame = small_frame();
    auto c = zero_coeffs(frame);
    int j = 3;
    size_t idx = 40;
    c.re[size_t(j)][idx] = 2.0;
    double d = frame.ball.dim;
    SpaceParams prm{1.0, 0.25, 1.5, 3.0, SpaceFamily::B};
    double W = weight_W(frame.ball, 1 << j, frame.grid(j).points[idx]);
    double expect = std::pow(2.0, (prm.s - d / prm.p + d / 2.0) * j) *
                    std::pow(W, -prm.rho / d + 1.0 / prm.p - 0.5) * 2.0;
    CHECK(b_norm_sequence(frame, c, prm) == doctest::Approx(expect).epsilon(1e-12));

    // p = q: a single weighted lp sum over everything.
    auto f = random_bandlimited(frame.ball, 2, 5);
    auto cf = analyze(frame, f.handle);
    SpaceParams pq{0.5, 0.5, 1.7, 1.7, SpaceFamily::B};
    double acc = 0.0;
    for (int lj = 0; lj <= frame.J; ++lj)
        for (size_t i = 0; i < cf.re[size_t(lj)].size(); ++i) {
            double W2 = weight_W(frame.ball, 1 << lj, frame.grid(lj).points[i]);
            double term = std::pow(2.0, (pq.s - d / pq.p + d / 2.0) * lj) *
                          std::pow(W2, -pq.rho / d + 1.0 / pq.p - 0.5) *
                          std::sqrt(cf.abs2(lj, i));
            acc += std::pow(term, pq.p);
        }
    CHECK(b_norm_sequence(frame, cf, pq) == doctest::Approx(std::pow(acc, 1.0 / pq.p)));
}

TEST_CASE("kernel norms: homogeneity, monotonicity in s, band-limited truncation") {
    NeedletFrame frame = small_frame();
    auto f = random_bandlimited(frame.ball, 2, 8);
    SpaceParams prm{0.5, 0.5, 2.0, 2.0, SpaceFamily::B};
    double n1 = b_norm_kernel(frame, f.handle, prm);
    FunctionHandle g{[&](const BallPoint& p) { return -3.0 * f.handle.eval(p); }, 2, false};
    CHECK(b_norm_kernel(frame, g, prm) == doctest::Approx(3.0 * n1).epsilon(1e-12));
    SpaceParams prm2 = prm;
    prm2.s = 1.5;
    CHECK(b_norm_kernel(frame, f.handle, prm2) >= n1 * (1.0 - 1e-12));
    // q = inf takes the sup over levels.
    SpaceParams prmi = prm;
    prmi.q = std::numeric_limits<double>::infinity();
    CHECK(b_norm_kernel(frame, f.handle, prmi) <= n1 + 1e-12);
}

TEST_CASE("F-norms reject p=inf") {
    NeedletFrame frame = small_frame();
    auto f = random_bandlimited(frame.ball, 2, 2);
    SpaceParams prm{0.0, 0.0, std::numeric_limits<double>::infinity(), 2.0, SpaceFamily::F};
    CHECK_THROWS_AS(f_norm_kernel(frame, f.handle, prm), config_error);
}

TEST_CASE("besov via best approximation") {
    NeedletFrame frame = small_frame();
    // Constant: every E_n vanishes, so the A-norm reduces to ||1||_p.
    FunctionHandle one{[](const BallPoint&) { return 1.0; }, 0, true};
    double a = besov_via_best_approx(frame, one, 1.0, 2.0, 2.0);
    CHECK(a == doctest::Approx(std::sqrt(frame.ball.total_mass())).epsilon(1e-9));
    // A polynomial of degree 2: terms with 2^j >= 2 vanish.
    auto f = random_bandlimited(frame.ball, 2, 4);
    double af = besov_via_best_approx(frame, f.handle, 1.0, 2.0, 2.0);
    CHECK(std::isfinite(af));
    CHECK(af > 0.0);
}

TEST_CASE("maximal operator basics") {
    WeightedBall ball(2, 1.0);
    ProductQuad quad = build_product_quadrature(ball, 48);
    std::vector<double> ones(quad.size(), 1.0);
    double v = maximal_function(ball, ones, quad, 1.0, BallPoint(0.2, 0.0),
                                {BallPoint(0.0, 0.0)}, {0.5, 1.0});
    CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    // Indicator of a ball evaluated inside it: choosing that ball gives 1.
    BallPoint xi(0.3, 0.2);
    double r = 0.4;
    std::vector<double> ind(quad.size());
    for (size_t i = 0; i < quad.size(); ++i)
        ind[i] = ball_distance(xi, quad.points[i]) < r ? 1.0 : 0.0;
    double vin = maximal_function(ball, ind, quad, 1.0, xi, {xi}, {r, 2 * r});
    CHECK(vin == doctest::Approx(1.0).epsilon(1e-2));
    // And it decays when x moves far away.
    double vout = maximal_function(ball, ind, quad, 1.0, BallPoint(-0.9, 0.0), {xi},
                                   {r, 2 * r, 4 * r, 3.2});
    CHECK(vout < vin);
    CHECK(vout > 0.0);
}
