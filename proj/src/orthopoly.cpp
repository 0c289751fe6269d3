#include "needleball/orthopoly.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace nb {

double eval_gegenbauer(double lambda, int n, double t) {
    if (n == 0) return 1.0;
    double y0 = 1.0, y1 = 2.0 * lambda * t;
    for (int k = 2; k <= n; ++k) {
        double y2 = (2.0 * t * (k + lambda - 1.0) * y1 - (k + 2.0 * lambda - 2.0) * y0) / k;
        y0 = y1;
        y1 = y2;
    }
    return y1;
}

std::vector<double> eval_gegenbauer_sequence(double lambda, int n_max, double t) {
    std::vector<double> out(size_t(n_max) + 1);
    out[0] = 1.0;
    if (n_max >= 1) out[1] = 2.0 * lambda * t;
    for (int k = 2; k <= n_max; ++k)
        out[size_t(k)] =
            (2.0 * t * (k + lambda - 1.0) * out[size_t(k - 1)] -
             (k + 2.0 * lambda - 2.0) * out[size_t(k - 2)]) /
            k;
    return out;
}

double gegenbauer_at_one(double lambda, int n) {
    // binom(n + 2 lambda - 1, n) = Gamma(n + 2 lambda) / (Gamma(2 lambda) n!)
    return std::exp(std::lgamma(n + 2.0 * lambda) - std::lgamma(2.0 * lambda) -
                    std::lgamma(n + 1.0));
}

namespace {

QuadratureRule golub_welsch(double a, double b, int k, double weight_exponent) {
    if (k < 1) throw config_error("quadrature rule needs at least one node");
    // Monic Jacobi recurrence coefficients for (1-x)^a (1+x)^b.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(k, k);
    auto diag = [&](int n) {
        double s = 2.0 * n + a + b;
        if (n == 0) return (b - a) / (a + b + 2.0);
        return (b * b - a * a) / (s * (s + 2.0));
    };
    auto offdiag2 = [&](int n) { // beta_n for n >= 1
        double s = 2.0 * n + a + b;
        if (n == 1) return 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b));
        return 4.0 * n * (n + a) * (n + b) * (n + a + b) / (s * s * (s + 1.0) * (s - 1.0));
    };
    for (int n = 0; n < k; ++n) J(n, n) = diag(n);
    for (int n = 1; n < k; ++n) {
        double bn = offdiag2(n);
        J(n, n - 1) = J(n - 1, n) = std::sqrt(bn);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    if (es.info() != Eigen::Success)
        throw numerical_error("gauss rule eigensolver failed to converge");
    // Zeroth moment int_{-1}^1 (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
    double mom0 = std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) +
                           std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
    QuadratureRule rule;
    rule.weight_exponent = weight_exponent;
    rule.exact_degree = 2 * k - 1;
    rule.nodes.resize(size_t(k));
    rule.weights.resize(size_t(k));
    for (int i = 0; i < k; ++i) {
        rule.nodes[size_t(i)] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        rule.weights[size_t(i)] = mom0 * v0 * v0;
    }
    return rule;
}

} // namespace

QuadratureRule gauss_jacobi_rule(double mu, int k) {
    if (!(mu > 0.0)) throw config_error("gauss_jacobi_rule requires mu > 0");
    return golub_welsch(mu - 1.0, mu - 1.0, k, mu - 1.0);
}

QuadratureRule gauss_jacobi_general(double a, double b, int k) {
    if (!(a > -1.0) || !(b > -1.0)) throw config_error("Jacobi exponents must exceed -1");
    return golub_welsch(a, b, k, a);
}

} // namespace nb
