#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "needleball/errors.hpp"

namespace nb {

// Point in the closed unit ball B^d, d <= 3.
struct BallPoint {
    std::array<double, 3> c{0.0, 0.0, 0.0};
    int dim = 2;

    BallPoint() = default;
    BallPoint(double x, int d1 = 1) : c{x, 0.0, 0.0}, dim(d1) {}
    BallPoint(double x, double y) : c{x, y, 0.0}, dim(2) {}
    BallPoint(double x, double y, double z) : c{x, y, z}, dim(3) {}

    double operator[](int i) const { return c[static_cast<size_t>(i)]; }
    double& operator[](int i) { return c[static_cast<size_t>(i)]; }

    double norm2() const {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += c[size_t(i)] * c[size_t(i)];
        return s;
    }
    double norm() const { return std::sqrt(norm2()); }

    // sqrt(1-|x|^2), clamped against roundoff slightly above 1.
    double height() const {
        double h2 = 1.0 - norm2();
        return h2 > 0.0 ? std::sqrt(h2) : 0.0;
    }
};

inline double dot(const BallPoint& x, const BallPoint& y) {
    double s = 0.0;
    for (int i = 0; i < x.dim; ++i) s += x[i] * y[i];
    return s;
}

// Ambient weight and normalization data for B^d with w_mu(x) = (1-|x|^2)^(mu-1/2).
struct WeightedBall {
    int dim = 2;
    double mu = 1.0;
    double lambda = 1.5;   // mu + (dim-1)/2
    double b_d_mu = 0.0;   // 1 / integral of w_mu over B^d
    double b_1_half = 0.0; // 1 / integral of (1-u^2)^(mu-1) over [-1,1]

    WeightedBall() = default;
    WeightedBall(int d, double mu_);

    double total_mass() const { return 1.0 / b_d_mu; }
    // Requires mu > 0; the mu = 0 kernel formula is out of scope.
    void require_kernel_mu() const {
        if (!(mu > 0.0)) throw config_error("unsupported-mu: kernel evaluation requires mu > 0");
    }
};

// Intrinsic distance d(x,y) = arccos(<x,y> + sqrt(1-|x|^2) sqrt(1-|y|^2)), in [0, pi].
double ball_distance(const BallPoint& x, const BallPoint& y);

// w_mu(x). Signals divergent-weight for mu < 1/2 at |x| = 1.
double weight_w(const WeightedBall& ball, const BallPoint& x);

// W_mu(n;x) = (sqrt(1-|x|^2) + 1/n)^(2 mu).
double weight_W(const WeightedBall& ball, int n, const BallPoint& x);
double weight_W_radial(const WeightedBall& ball, int n, double height);

// m(B_xi(r)) by adaptive quadrature over the metric ball; test oracle, target
// relative tolerance 1e-8. Throws numerical_error on tolerance failure.
double ball_measure(const WeightedBall& ball, const BallPoint& center, double r);

// |sqrt(1-|x|^2) - sqrt(1-|y|^2)| <= sqrt(2) d(x,y); used by property tests.
bool norm_dist_bound_check(const BallPoint& x, const BallPoint& y);

// Closed-form int_{B^d} x^alpha w_mu dx (zero when any alpha_i is odd),
// and the companion with |x^alpha| for conditioning-aware test scales.
double moment_oracle(const WeightedBall& ball, const std::vector<int>& alpha);
double moment_abs_oracle(const WeightedBall& ball, const std::vector<int>& alpha);

// Adaptive 1-D quadrature (Simpson-based) used by the measure oracles.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_floor = 1e-300);

// int_a^b (1-x^2)^{mu-1/2} dx on [-1,1], via the singularity-free phi chart.
double interval_weight_measure(const WeightedBall& ball, double a, double b);

} // namespace nb
