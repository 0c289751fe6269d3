#include <doctest.h>

#include <cmath>
#include <random>

#include "needleball/kernels.hpp"
#include "needleball/testfunctions.hpp"

using namespace nb;

namespace {
constexpr double kPi = 3.14159265358979323846;
std::mt19937_64 eng(99);
double unif() { return double(eng() >> 11) * 0x1p-53; }
BallPoint rnd2() {
    double r = std::sqrt(unif());
    double th = 2 * kPi * unif();
    return BallPoint(r * std::cos(th), r * std::sin(th));
}
} // namespace

TEST_CASE("P_0 is the constant b_d^mu and P_n is symmetric") {
    WeightedBall ball(2, 1.0);
    KernelConfig cfg(ball, make_pair_self_dual());
    for (int i = 0; i < 5; ++i) {
        BallPoint x = rnd2(), y = rnd2();
        CHECK(eval_Pn(cfg, 0, x, y) == doctest::Approx(ball.b_d_mu).epsilon(1e-14));
        CHECK(eval_Pn(cfg, 9, x, y) == eval_Pn(cfg, 9, y, x));
    }
    // P_0 reproduces constants: b_d^mu * mass = 1.
    CHECK(ball.b_d_mu * ball.total_mass() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("P_1 against the orthonormal-basis closed form") {
    // V_1 is spanned by x_i / ||x_i||_2, so P_1(x,y) = <x,y> / ||x_1||_2^2.
    for (double mu : {0.5, 1.0, 2.0}) {
        WeightedBall ball(2, mu);
        KernelConfig cfg(ball, make_pair_self_dual());
        double m2 = moment_oracle(ball, {2, 0});
        BallPoint x = rnd2(), y = rnd2();
        CHECK(eval_Pn(cfg, 1, x, y) == doctest::Approx(dot(x, y) / m2).epsilon(1e-12));
    }
}

TEST_CASE("reproducing kernel on polynomials (small)") {
    WeightedBall ball(2, 1.0);
    KernelConfig cfg(ball, make_pair_self_dual());
    int n = 6;
    auto f = random_bandlimited(ball, n, 3);
    SpectralKernel L = smoothed_kernel(cfg, n, cfg.window_a);
    ProductQuad S = build_product_quadrature(ball, 3 * n);
    std::vector<double> fv(S.size());
    double sup = 0.0;
    for (size_t i = 0; i < S.size(); ++i) {
        fv[i] = f.handle.eval(S.points[i]);
        sup = std::max(sup, std::abs(fv[i]));
    }
    std::vector<BallPoint> targets;
    for (int i = 0; i < 25; ++i) targets.push_back(rnd2());
    auto conv = convolve_points(L, targets, S, fv);
    for (size_t i = 0; i < targets.size(); ++i)
        CHECK(std::abs(conv[i] - f.handle.eval(targets[i])) <= 1e-11 * sup);
}

TEST_CASE("type (b) window kills constants; mu=0 rejected") {
    WeightedBall ball(2, 1.0);
    KernelConfig cfg(ball, make_pair_self_dual());
    SpectralKernel L = smoothed_kernel(cfg, 8, cfg.pair.a_hat);
    ProductQuad S = build_product_quadrature(ball, 20);
    std::vector<double> ones(S.size(), 1.0);
    auto conv = convolve_points(L, {rnd2()}, S, ones);
    CHECK(std::abs(conv[0]) <= 1e-12);
    CHECK_THROWS_AS(KernelConfig(WeightedBall(2, 0.0), make_pair_self_dual()), config_error);
}

TEST_CASE("band kernels: level 0 is P_0, far levels orthogonal") {
    WeightedBall ball(2, 1.0);
    KernelConfig cfg(ball, make_pair_self_dual());
    BallPoint x = rnd2(), y = rnd2();
    CHECK(eval_Phi_j(cfg, 0, x, y) == doctest::Approx(ball.b_d_mu));
    CHECK(eval_Phi_j(cfg, 1, x, y) == eval_Psi_j(cfg, 1, x, y)); // self-dual
    // int Phi_2(x,.) Phi_5(z,.) w = 0: disjoint spectral bands.
    SpectralKernel K2 = band_kernel(cfg, 2, cfg.pair.a_hat);
    SpectralKernel K5 = band_kernel(cfg, 5, cfg.pair.a_hat);
    ProductQuad q = build_product_quadrature(ball, 40);
    double acc = 0.0, scale = 0.0;
    for (size_t i = 0; i < q.size(); ++i) {
        acc += q.weights[i] * K2.eval(x, q.points[i]) * K5.eval(y, q.points[i]);
        scale += q.weights[i] * std::abs(K2.eval(x, q.points[i]) * K5.eval(y, q.points[i]));
    }
    CHECK(std::abs(acc) <= 1e-12 * std::max(1.0, scale));
}

TEST_CASE("projector orthogonality and idempotence") {
    WeightedBall ball(2, 1.0);
    KernelConfig cfg(ball, make_pair_self_dual());
    BallPoint x = rnd2(), y = rnd2();
    SpectralKernel P3 = projector_kernel(cfg, 3), P5 = projector_kernel(cfg, 5);
    ProductQuad q = build_product_quadrature(ball, 10);
    double i33 = 0.0, i35 = 0.0;
    for (size_t i = 0; i < q.size(); ++i) {
        i33 += q.weights[i] * P3.eval(x, q.points[i]) * P3.eval(y, q.points[i]);
        i35 += q.weights[i] * P3.eval(x, q.points[i]) * P5.eval(y, q.points[i]);
    }
    double scale = std::sqrt(P3.eval(x, x) * P3.eval(y, y));
    CHECK(std::abs(i33 - P3.eval(x, y)) <= 1e-10 * scale);
    CHECK(std::abs(i35) <= 1e-10 * scale);
}

TEST_CASE("circulant fast path agrees with the dense path") {
    WeightedBall ball(2, 1.0);
    KernelConfig cfg(ball, make_pair_self_dual());
    SpectralKernel K = band_kernel(cfg, 2, cfg.pair.a_hat);
    ProductQuad S = build_product_quadrature(ball, 17, 5); // n_theta multiple of 5
    PolarPoints T{{0.2, 0.7, 0.95}, 5};
    std::vector<double> f(S.size());
    for (size_t i = 0; i < S.size(); ++i) f[i] = std::sin(3.0 * S.points[i][0]) + S.points[i][1];
    auto fast = convolve_grid(K, T, S, f);
    std::vector<BallPoint> tp(T.size());
    for (size_t i = 0; i < T.size(); ++i) tp[i] = T.point(i);
    auto dense = convolve_points(K, tp, S, f);
    for (size_t i = 0; i < fast.size(); ++i)
        CHECK(fast[i] == doctest::Approx(dense[i]).epsilon(1e-12));

    // Kernel tables: circulant and non-commensurate entries match direct evals.
    KernelTable tab = build_kernel_table(K, T, S.rings());
    for (size_t t = 0; t < T.size(); t += 7)
        for (size_t s = 0; s < S.size(); s += 13)
            CHECK(tab.entry(t, s) ==
                  doctest::Approx(K.eval(T.point(t), S.points[s])).epsilon(1e-13));
    PolarPoints T2{{0.3, 0.8}, 7}; // 7 and S.n_theta non-commensurate
    KernelTable tab2 = build_kernel_table(K, T2, S.rings());
    for (size_t t = 0; t < T2.size(); t += 3)
        for (size_t s = 0; s < S.size(); s += 17)
            CHECK(tab2.entry(t, s) ==
                  doctest::Approx(K.eval(T2.point(t), S.points[s])).epsilon(1e-13));
}

TEST_CASE("column norms match direct computation") {
    WeightedBall ball(2, 1.0);
    KernelConfig cfg(ball, make_pair_self_dual());
    SpectralKernel L = smoothed_kernel(cfg, 8, cfg.pair.a_hat);
    ProductQuad quad = build_product_quadrature(ball, 32, 1);
    PolarPoints src{{0.0, 0.6, 0.99}, 1};
    auto norms = kernel_column_norms(L, quad, src, {1.0, 2.0});
    for (size_t b = 0; b < src.radii.size(); ++b) {
        BallPoint s(src.radii[b], 0.0);
        std::vector<double> col(quad.size());
        for (size_t i = 0; i < quad.size(); ++i) col[i] = L.eval(quad.points[i], s);
        CHECK(norms[0][b] == doctest::Approx(norm_p(col, quad.weights, 1.0)).epsilon(1e-12));
        CHECK(norms[1][b] == doctest::Approx(norm_p(col, quad.weights, 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("localization diagnostics produce finite stable constants") {
    WeightedBall ball(2, 1.0);
    KernelConfig cfg(ball, make_pair_self_dual());
    std::vector<std::pair<BallPoint, BallPoint>> pairs;
    for (int i = 0; i < 150; ++i) pairs.emplace_back(rnd2(), rnd2());
    for (int i = 0; i < 30; ++i) {
        BallPoint x = rnd2();
        pairs.emplace_back(x, x);
    }
    double c16 = localization_constant(cfg, 16, 6.0, pairs);
    double c32 = localization_constant(cfg, 32, 6.0, pairs);
    CHECK(c16 > 0.0);
    CHECK(std::isfinite(c16));
    CHECK(std::max(c16, c32) / std::min(c16, c32) < 6.0);
    // k = 0: no distance penalty, still finite.
    CHECK(std::isfinite(localization_constant(cfg, 16, 0.0, pairs)));
}

TEST_CASE("nikolskii ratios") {
    WeightedBall ball(2, 1.0);
    KernelConfig cfg(ball, make_pair_self_dual());
    ProductQuad quad = build_product_quadrature(ball, 24);
    auto f = random_bandlimited(ball, 8, 11);
    // p = q: plain ratio is exactly 1.
    auto same = nikolskii_check(cfg, 8, f.handle.eval, 2.0, 2.0, 0.0, quad);
    CHECK(same.plain == doctest::Approx(1.0).epsilon(1e-12));
    auto r = nikolskii_check(cfg, 8, f.handle.eval, std::numeric_limits<double>::infinity(), 2.0,
                             0.5, quad);
    CHECK(r.plain > 0.0);
    CHECK(r.plain < 20.0);
    CHECK(r.weighted < 20.0);
    CHECK_THROWS_AS(nikolskii_check(cfg, 8, f.handle.eval, 1.0, 2.0, 0.0, quad), config_error);
}
