#include <doctest.h>

#include <cmath>
#include <random>

#include "needleball/geometry.hpp"

using namespace nb;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::mt19937_64 eng(12345);
double unif() { return double(eng() >> 11) * 0x1p-53; }
BallPoint rnd2() {
    double r = std::sqrt(unif());
    double th = 2 * kPi * unif();
    return BallPoint(r * std::cos(th), r * std::sin(th));
}
} // namespace

TEST_CASE("ball distance basics") {
    CHECK(ball_distance(BallPoint(0.3, 0.4), BallPoint(0.3, 0.4)) == 0.0);
    CHECK(ball_distance(BallPoint(1.0, 0.0), BallPoint(-1.0, 0.0)) == doctest::Approx(kPi));
    // Independent scalar oracle: arccos(0 + 1 * sqrt(1 - 0.36)).
    double expect = std::acos(std::sqrt(1.0 - 0.36));
    CHECK(ball_distance(BallPoint(0.0, 0.0), BallPoint(0.6, 0.0)) ==
          doctest::Approx(expect).epsilon(1e-15));
    CHECK(expect == doctest::Approx(0.6435011087932844));
}

TEST_CASE("metric axioms sampled") {
    for (int i = 0; i < 2000; ++i) {
        BallPoint x = rnd2(), y = rnd2(), z = rnd2();
        double dxy = ball_distance(x, y);
        CHECK(dxy == ball_distance(y, x));
        CHECK(dxy <= ball_distance(x, z) + ball_distance(z, y) + 1e-12);
        CHECK(dxy >= 0.0);
    }
}

TEST_CASE("weights") {
    WeightedBall half(2, 0.5), one(2, 1.0), two(2, 2.0);
    CHECK(weight_w(half, BallPoint(0.77, 0.1)) == 1.0);
    CHECK(weight_w(one, BallPoint(0.0, 0.0)) == 1.0);
    CHECK(weight_w(two, BallPoint(0.6, 0.0)) == doctest::Approx(0.512).epsilon(1e-15));
    CHECK_THROWS_AS(weight_w(WeightedBall(2, 0.2), BallPoint(1.0, 0.0)), numerical_error);

    CHECK(weight_W(one, 4, BallPoint(0.0, 0.0)) == doctest::Approx(1.5625));
    CHECK(weight_W(WeightedBall(2, 0.0), 4, BallPoint(0.3, 0.4)) == 1.0);
    CHECK(weight_W(one, 8, BallPoint(1.0, 0.0)) == doctest::Approx(0.015625));
}

TEST_CASE("normalizers against closed forms") {
    WeightedBall b(2, 1.0);
    CHECK(1.0 / b.b_d_mu == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-13));
    CHECK(b.lambda == 1.5);
    // mu = 1/2: plain Lebesgue on the disk.
    WeightedBall l(2, 0.5);
    CHECK(1.0 / l.b_d_mu == doctest::Approx(kPi).epsilon(1e-13));
    // b_1: int (1-u^2)^{mu-1} du at mu=1 is 2.
    CHECK(1.0 / b.b_1_half == doctest::Approx(2.0).epsilon(1e-13));
    WeightedBall d1(1, 0.5);
    CHECK(1.0 / d1.b_d_mu == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("height-distance inequality randomized") {
    CHECK(norm_dist_bound_check(BallPoint(0.2, 0.2), BallPoint(0.2, 0.2)));
    CHECK(norm_dist_bound_check(BallPoint(1.0, 0.0), BallPoint(0.0, 0.0)));
    for (int i = 0; i < 10000; ++i) CHECK(norm_dist_bound_check(rnd2(), rnd2()));
}

TEST_CASE("ball measure oracle") {
    WeightedBall b(2, 1.0);
    CHECK(ball_measure(b, BallPoint(0.4, 0.1), kPi) ==
          doctest::Approx(b.total_mass()).epsilon(1e-7));
    // d=1, mu=1/2: the metric ball of radius pi/2 around 0 is everything.
    WeightedBall l(1, 0.5);
    CHECK(ball_measure(l, BallPoint(0.0, 1), kPi / 2.0) == doctest::Approx(2.0).epsilon(1e-8));
    // Doubling.
    for (double rr : {0.0, 0.5, 0.95})
        for (double rad : {0.05, 0.2, 0.7}) {
            double m1 = ball_measure(b, BallPoint(rr, 0.0), rad);
            double m2 = ball_measure(b, BallPoint(rr, 0.0), std::min(2.0 * rad, kPi));
            CHECK(m2 / m1 < 100.0);
        }
}

TEST_CASE("moment oracle closed forms") {
    WeightedBall b(2, 1.0);
    CHECK(moment_oracle(b, {0, 0}) == doctest::Approx(2.0 * kPi / 3.0).epsilon(1e-13));
    CHECK(moment_oracle(b, {1, 0}) == 0.0);
    CHECK(moment_oracle(b, {2, 0}) == doctest::Approx(2.0 * kPi / 15.0).epsilon(1e-13));
    // Independent cross-check of a mixed moment by adaptive radial integration:
    // int x^2 y^4 w_1 = [ang] * (1/2) B(4, 3/2).
    double ang = 2.0 * std::exp(std::lgamma(1.5) + std::lgamma(2.5) - std::lgamma(4.0));
    double rad = 0.5 * std::exp(std::lgamma(4.0) + std::lgamma(1.5) - std::lgamma(5.5));
    CHECK(moment_oracle(b, {2, 4}) == doctest::Approx(ang * rad).epsilon(1e-12));
}
