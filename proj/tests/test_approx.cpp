#include <doctest.h>

#include <cmath>

#include "needleball/approx.hpp"
#include "needleball/serialization.hpp"
#include "needleball/spaces.hpp"
#include "needleball/testfunctions.hpp"

using namespace nb;

namespace {
NeedletFrame small_frame(int J = 3) {
    FrameConfig cfg;
    cfg.dim = 2;
    cfg.mu = 1.0;
    cfg.levels = J;
    NeedletFrame f = build_frame(cfg);
    seal_frame(f);
    return f;
}
} // namespace

TEST_CASE("near-best error vanishes on polynomials and decreases for f_alpha") {
    NeedletFrame frame = small_frame();
    auto f = random_bandlimited(frame.ball, 4, 6);
    const ProductQuad& T = frame.norm_quad();
    std::vector<double> fv(T.size());
    for (size_t i = 0; i < T.size(); ++i) fv[i] = f.handle.eval(T.points[i]);
    double scale = norm_p(fv, T.weights, 2.0);
    CHECK(best_poly_error(frame, f.handle, 4, 2.0) <= 1e-11 * scale);

    auto fa = make_test_function(frame.ball, "boundary_power:alpha=0.75");
    double prev = 1e300;
    for (int n : {2, 4, 8}) {
        double e = best_poly_error(frame, fa.handle, n, 2.0);
        CHECK(e <= prev + 1e-12);
        CHECK(e > 0.0);
        prev = e;
    }
}

TEST_CASE("greedy selection basics") {
    NeedletFrame frame = small_frame();
    auto f = random_bandlimited(frame.ball, 2, 10);
    auto c = analyze(frame, f.handle);
    auto sel0 = greedy_nterm(frame, c, 0, 2.0);
    CHECK(sel0.keys.empty());
    auto sel5 = greedy_nterm(frame, c, 5, 2.0);
    CHECK(sel5.keys.size() == 5);
    // Oversized request returns everything with a nonzero score.
    auto selall = greedy_nterm(frame, c, 1u << 20, 2.0);
    CHECK(selall.keys.size() <= c.total());
    // Kept coefficients match the source at the selected keys.
    for (auto [j, idx] : sel5.keys)
        CHECK(sel5.kept.re[size_t(j)][idx] == c.re[size_t(j)][idx]);
}

TEST_CASE("n-term errors: norm at n=0, monotone, tiny at full selection") {
    NeedletFrame frame = small_frame();
    auto f = random_bandlimited(frame.ball, 2, 11);
    auto c = analyze(frame, f.handle);
    std::vector<size_t> ns = {0, 1, 2, 4, 8, 16, 64, 256, c.total()};
    auto errs = nterm_errors(frame, c, f.handle, ns, 2.0);
    const ProductQuad& T = frame.norm_quad();
    std::vector<double> fv(T.size());
    for (size_t i = 0; i < T.size(); ++i) fv[i] = f.handle.eval(T.points[i]);
    double l2 = norm_p(fv, T.weights, 2.0);
    CHECK(errs[0] == doctest::Approx(l2).epsilon(1e-9));
    for (size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] <= errs[i - 1] + 1e-10 * l2);
    CHECK(errs.back() <= 1e-7 * l2);
    // Gram route and residual-grid route agree (p=2 vs generic path).
    auto errs_g = nterm_errors(frame, c, f.handle, {4, 16}, 2.0000001);
    auto errs_2 = nterm_errors(frame, c, f.handle, {4, 16}, 2.0);
    CHECK(errs_g[0] == doctest::Approx(errs_2[0]).epsilon(1e-6));
    CHECK(errs_g[1] == doctest::Approx(errs_2[1]).epsilon(1e-5).scale(l2));
}

TEST_CASE("p=2 least-squares refit never increases the error") {
    NeedletFrame frame = small_frame();
    auto f = random_bandlimited(frame.ball, 2, 12);
    auto c = analyze(frame, f.handle);
    auto plain = nterm_errors(frame, c, f.handle, {8, 32}, 2.0, -1.0, false);
    auto refit = nterm_errors(frame, c, f.handle, {8, 32}, 2.0, -1.0, true);
    CHECK(refit[0] <= plain[0] + 1e-12);
    CHECK(refit[1] <= plain[1] + 1e-12);
}

TEST_CASE("jackson diagnostic on a boundary-singular function (small)") {
    NeedletFrame frame = small_frame(4);
    auto fa = make_test_function(frame.ball, "boundary_power:alpha=1.5");
    std::vector<size_t> ns = {8, 16, 32, 64};
    auto rep = jackson_diagnostic(frame, fa.handle, 0.8, 2.0, ns, fa.exact_l2sq);
    CHECK(rep.tau == doctest::Approx(1.0 / (0.8 / 2.0 + 0.5)));
    CHECK(rep.btau > 0.0);
    CHECK(std::isfinite(rep.btau));
    CHECK(rep.slope < 0.0);
    for (double s : rep.sigma) CHECK(std::isfinite(s));
    for (size_t i = 1; i < rep.sigma.size(); ++i) CHECK(rep.sigma[i] <= rep.sigma[i - 1] + 1e-12);
}

TEST_CASE("greedy requires the self-dual frame") {
    FrameConfig cfg;
    cfg.dim = 2;
    cfg.mu = 1.0;
    cfg.levels = 2;
    cfg.cutoff = "pair:plateau";
    NeedletFrame frame = build_frame(cfg);
    seal_frame(frame);
    auto f = random_bandlimited(frame.ball, 2, 3);
    auto c = analyze(frame, f.handle);
    CHECK_THROWS_AS(greedy_nterm(frame, c, 3, 2.0), config_error);
}
