#include <doctest.h>

#include <cmath>
#include <random>

#include "needleball/grids.hpp"

using namespace nb;

namespace {
constexpr double kPi = 3.14159265358979323846;
std::mt19937_64 eng(4242);
double unif() { return double(eng() >> 11) * 0x1p-53; }
} // namespace

TEST_CASE("product grid masses") {
    // d=1, mu=1/2: Lebesgue, total mass 2.
    WeightedBall l(1, 0.5);
    NeedletGrid g1 = build_grid(l, 1, GridStrategy::product);
    double sw = 0.0;
    for (double w : g1.weights) sw += w;
    CHECK(sw == doctest::Approx(2.0).epsilon(1e-13));

    // d=2, mu=1: 2 pi / 3; x1^2 integrates to 2 pi / 15.
    WeightedBall b(2, 1.0);
    NeedletGrid g2 = build_grid(b, 2, GridStrategy::product);
    double sw2 = 0.0, sx2 = 0.0;
    for (size_t i = 0; i < g2.size(); ++i) {
        CHECK(g2.weights[i] > 0.0);
        sw2 += g2.weights[i];
        sx2 += g2.weights[i] * g2.points[i][0] * g2.points[i][0];
    }
    CHECK(sw2 == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-12));
    CHECK(sx2 == doctest::Approx(2.0 * kPi / 15.0).epsilon(1e-10));
}

TEST_CASE("product grid exactness against the moment oracle") {
    WeightedBall b(2, 1.5);
    for (int j : {0, 1, 2, 3}) {
        NeedletGrid g = build_grid(b, j, GridStrategy::product);
        int D = 1 << (j + 2);
        for (int trial = 0; trial < 10; ++trial) {
            double quad = 0.0, exact = 0.0, scale = 0.0;
            std::vector<std::tuple<int, int, double>> terms;
            for (int m = 0; m < 25; ++m) {
                int a = int(unif() * (D + 1));
                int bb = int(unif() * (D + 1 - a));
                double cc = 2 * unif() - 1;
                terms.emplace_back(a, bb, cc);
                exact += cc * moment_oracle(b, {a, bb});
                scale += std::abs(cc) * moment_abs_oracle(b, {a, bb});
            }
            for (size_t i = 0; i < g.size(); ++i) {
                double v = 0.0;
                for (auto& [a, bb, cc] : terms)
                    v += cc * std::pow(g.points[i][0], a) * std::pow(g.points[i][1], bb);
                quad += g.weights[i] * v;
            }
            CHECK(std::abs(quad - exact) <= 1e-9 * std::max(scale, 1e-30));
        }
    }
}

TEST_CASE("cells tile the ball and locate_cell finds them") {
    WeightedBall b(2, 1.0);
    for (auto strat : {GridStrategy::product, GridStrategy::quasi_uniform}) {
        NeedletGrid g = build_grid(b, 2, strat);
        double sm = 0.0;
        for (double m : g.cell_measures) sm += m;
        CHECK(sm == doctest::Approx(b.total_mass()).epsilon(1e-8));
        // Grid points sit inside their own cells.
        for (size_t i = 0; i < g.size(); i += 3) CHECK(locate_cell(g, g.points[i]) == i);
        // Random points land in a cell that geometrically contains them
        // (angles compared modulo 2 pi).
        for (int t = 0; t < 20000; ++t) {
            double r = std::sqrt(unif());
            double th = 2 * kPi * unif();
            BallPoint x(r * std::cos(th), r * std::sin(th));
            size_t idx = locate_cell(g, x);
            const GridCell& c = g.cells[idx];
            CHECK(r >= c.x0 - 1e-14);
            CHECK(r <= c.x1 + 1e-14);
            double tt = std::fmod(th - c.theta0, 2 * kPi);
            if (tt < 0) tt += 2 * kPi;
            CHECK(tt <= (c.theta1 - c.theta0) + 1e-12);
        }
    }
}

TEST_CASE("d=1 grids: cells, locate, no origin at level 1") {
    WeightedBall l(1, 1.0);
    for (auto strat : {GridStrategy::product, GridStrategy::quasi_uniform}) {
        NeedletGrid g = build_grid(l, 1, strat);
        double minabs = 1e300;
        for (const auto& p : g.points) minabs = std::min(minabs, std::abs(p[0]));
        CHECK(minabs > 1e-8); // 0 not in X_1
        for (size_t i = 0; i < g.size(); ++i) CHECK(locate_cell(g, g.points[i]) == i);
        double sm = 0.0;
        for (double m : g.cell_measures) sm += m;
        CHECK(sm == doctest::Approx(l.total_mass()).epsilon(1e-8));
    }
}

TEST_CASE("quasi-uniform weights: positive, exact, equivalent to ball measures") {
    WeightedBall b(2, 1.0);
    NeedletGrid g = build_grid(b, 2, GridStrategy::quasi_uniform);
    double lo = 1e300, hi = 0.0, sw = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        CHECK(g.weights[i] > 0.0);
        sw += g.weights[i];
        double pred = std::ldexp(1.0, -2 * 2) * weight_W(b, 4, g.points[i]);
        lo = std::min(lo, g.weights[i] / pred);
        hi = std::max(hi, g.weights[i] / pred);
    }
    CHECK(sw == doctest::Approx(b.total_mass()).epsilon(1e-10));
    // lambda / (2^{-jd} W) stays in a positive finite band (reported, not pinned).
    CHECK(lo > 0.0);
    CHECK(std::isfinite(hi));
    // The pinned equivalence is against metric-ball measures: band <= 50.
    double blo = 1e300, bhi = 0.0;
    for (size_t i = 0; i < g.size(); i += std::max<size_t>(1, g.size() / 50)) {
        double mb = ball_measure(b, g.points[i], 0.25);
        blo = std::min(blo, g.weights[i] / mb);
        bhi = std::max(bhi, g.weights[i] / mb);
    }
    CHECK(bhi / blo < 50.0);
    // Exactness on a couple of anchor moments.
    double m2 = 0.0;
    for (size_t i = 0; i < g.size(); ++i)
        m2 += g.weights[i] * g.points[i][0] * g.points[i][0];
    CHECK(m2 == doctest::Approx(moment_oracle(b, {2, 0})).epsilon(1e-10));
}

TEST_CASE("cell diameters scale like 2^{-j}") {
    WeightedBall b(2, 1.0);
    for (int j : {1, 2, 3}) {
        NeedletGrid g = build_grid(b, j, GridStrategy::product);
        double worst = 0.0;
        for (size_t i = 0; i < g.size(); i += 5) {
            const GridCell& c = g.cells[i];
            BallPoint p00(c.x0 * std::cos(c.theta0), c.x0 * std::sin(c.theta0));
            BallPoint p11(c.x1 * std::cos(c.theta1), c.x1 * std::sin(c.theta1));
            worst = std::max(worst, ball_distance(p00, p11) * std::ldexp(1.0, j));
        }
        CHECK(worst < 10.0);
    }
}
