#include <doctest.h>

#include <cmath>
#include <random>

#include "needleball/orthopoly.hpp"

using namespace nb;

TEST_CASE("gegenbauer recurrence values") {
    CHECK(eval_gegenbauer(0.8, 0, -0.3) == 1.0);
    CHECK(eval_gegenbauer(1.5, 1, 0.5) == doctest::Approx(1.5));
    // Three-term oracle: C_2^1(t) = 4t^2 - 1.
    CHECK(eval_gegenbauer(1.0, 2, 0.0) == doctest::Approx(-1.0));
    for (double t : {-0.9, -0.2, 0.4, 1.0})
        CHECK(eval_gegenbauer(1.0, 2, t) == doctest::Approx(4 * t * t - 1).epsilon(1e-14));
}

TEST_CASE("gegenbauer sequence consistency and endpoint") {
    std::mt19937_64 eng(7);
    auto unif = [&]() { return double(eng() >> 11) * 0x1p-53; };
    for (int it = 0; it < 40; ++it) {
        double lam = 0.3 + 2.5 * unif();
        double t = 2 * unif() - 1;
        auto seq = eval_gegenbauer_sequence(lam, 64, t);
        CHECK(seq[0] == 1.0);
        CHECK(seq[1] == doctest::Approx(2 * lam * t));
        int k = 1 + int(unif() * 63);
        double direct = eval_gegenbauer(lam, k, t);
        CHECK(seq[size_t(k)] ==
              doctest::Approx(direct).epsilon(1e-13).scale(std::max(1.0, std::abs(direct))));
    }
    // t = 1 closed form for integer 2*lambda: C_k(1) = binom(k + 2l - 1, k).
    auto seq = eval_gegenbauer_sequence(1.5, 5, 1.0);
    CHECK(seq[5] == doctest::Approx(gegenbauer_at_one(1.5, 5)).epsilon(1e-13));
    // lambda = 1 -> C_k(1) = k + 1.
    auto s2 = eval_gegenbauer_sequence(1.0, 6, 1.0);
    CHECK(s2[6] == doctest::Approx(7.0).epsilon(1e-13));
}

TEST_CASE("recurrence stays below the t=1 extremum") {
    std::mt19937_64 eng(8);
    auto unif = [&]() { return double(eng() >> 11) * 0x1p-53; };
    for (int it = 0; it < 150; ++it) {
        double lam = 0.3 + 2.5 * unif();
        int n = 1 + int(unif() * 256);
        double t = 2 * unif() - 1;
        CHECK(std::abs(eval_gegenbauer(lam, n, t)) <=
              gegenbauer_at_one(lam, n) * (1.0 + 1e-12));
    }
}

TEST_CASE("gauss-jacobi rule") {
    // mu = 1 is Legendre: 2-node rule has nodes +-1/sqrt(3), weights 1.
    auto rule = gauss_jacobi_rule(1.0, 2);
    REQUIRE(rule.nodes.size() == 2);
    CHECK(rule.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(rule.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(rule.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rule.weights[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(rule.exact_degree == 3);

    // Mass = int (1-u^2)^{mu-1} du (Beta closed form) for several mu.
    for (double mu : {0.5, 1.0, 1.5, 2.3}) {
        auto r = gauss_jacobi_rule(mu, 6);
        double sw = 0.0;
        for (double w : r.weights) {
            CHECK(w > 0.0);
            sw += w;
        }
        double mass = std::sqrt(3.14159265358979323846) *
                      std::exp(std::lgamma(mu) - std::lgamma(mu + 0.5));
        CHECK(sw == doctest::Approx(mass).epsilon(1e-12));
    }

    // mu = 1.5, k = 8: u^14 against the Beta value, relative 1e-11.
    auto r8 = gauss_jacobi_rule(1.5, 8);
    double q = 0.0;
    for (size_t i = 0; i < r8.nodes.size(); ++i)
        q += r8.weights[i] * std::pow(r8.nodes[i], 14);
    double exact = std::exp(std::lgamma(7.5) + std::lgamma(1.5) - std::lgamma(9.0));
    CHECK(q == doctest::Approx(exact).epsilon(1e-11));
}

TEST_CASE("general jacobi rule for the radial factor") {
    // (1-x)^{1/2}(1+x)^0: mass = 2^{3/2} B(3/2,1) = 2^{3/2} * 2/3.
    auto r = gauss_jacobi_general(0.5, 0.0, 5);
    double sw = 0.0;
    for (double w : r.weights) sw += w;
    CHECK(sw == doctest::Approx(std::pow(2.0, 1.5) * 2.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(gauss_jacobi_general(-1.2, 0.0, 3), config_error);
    CHECK_THROWS_AS(gauss_jacobi_rule(0.0, 3), config_error);
}
