#pragma once

#include <vector>

#include "needleball/errors.hpp"

namespace nb {

// Positive quadrature rule on (-1,1) against (1-u^2)^(weight_exponent), built so
// that a k-node rule integrates polynomials up to degree 2k-1 exactly.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    double weight_exponent = 0.0; // rule integrates against (1-u^2)^weight_exponent
    int exact_degree = 0;
};

// Gegenbauer polynomial C_n^lambda(t) by forward three-term recurrence.
double eval_gegenbauer(double lambda, int n, double t);

// All degrees 0..n_max at once; entry k equals eval_gegenbauer(lambda, k, t).
std::vector<double> eval_gegenbauer_sequence(double lambda, int n_max, double t);

// C_n^lambda(1) = binom(n + 2 lambda - 1, n).
double gegenbauer_at_one(double lambda, int n);

// k-node Gauss rule for the weight (1-u^2)^(mu-1) on [-1,1] (Jacobi a=b=mu-1),
// nodes and weights from the symmetric tridiagonal eigenproblem. Requires mu > 0.
QuadratureRule gauss_jacobi_rule(double mu, int k);

// General Gauss-Jacobi rule for (1-x)^a (1+x)^b on [-1,1]; used internally by the
// grids module for the radial factor of product cubature (a != b there).
QuadratureRule gauss_jacobi_general(double a, double b, int k);

} // namespace nb
