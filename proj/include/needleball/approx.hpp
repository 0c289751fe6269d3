#pragma once

#include <cstdint>

#include "needleball/needlets.hpp"

namespace nb {

// Near-best polynomial approximation error ||f - L_n*f||_p (type (a) window),
// an upper surrogate for E_n(f)_p.
double best_poly_error(const NeedletFrame& frame, const FunctionHandle& f, int n, double p);

// Greedy n-term selection: the n keys maximizing ||c_xi psi_xi||_p, with norms
// by quadrature. Requires a self-dual frame.
struct GreedySelection {
    std::vector<std::pair<int, size_t>> keys; // (level, index) in selection order
    CoefficientSet kept;                      // selected coefficients, rest zero
};
GreedySelection greedy_nterm(const NeedletFrame& frame, const CoefficientSet& c, size_t n,
                             double p);

// sigma-hat_n for each n (greedy nesting: one ranking, prefix errors).
// p = 2 uses the exact frame Gram identity; other p evaluate the residual on
// the norm grid. exact_l2sq < 0 means compute ||f||_2^2 by quadrature (p = 2
// path needs the function values only in that case). refit_p2 re-solves the
// coefficients on the selected set by least squares (optional, p = 2 only).
std::vector<double> nterm_errors(const NeedletFrame& frame, const CoefficientSet& c,
                                 const FunctionHandle& f, const std::vector<size_t>& n_values,
                                 double p, double exact_l2sq = -1.0, bool refit_p2 = false);

struct JacksonReport {
    std::vector<size_t> n_values;
    std::vector<double> sigma;         // sigma-hat_n
    std::vector<double> jackson_ratio; // sigma-hat_n n^s / ||f||_{B_tau^s}
    double slope = 0.0;                // log-log least-squares slope of sigma-hat
    double btau = 0.0;
    double tau = 0.0;
};

// Greedy decay diagnostic against the direct estimate: slope of sigma-hat_n and
// the empirical Jackson constant, with tau from 1/tau = s/d + 1/p and the
// B_tau^s norm from the coefficient b-norm at s = rho.
JacksonReport jackson_diagnostic(const NeedletFrame& frame, const FunctionHandle& f, double s,
                                 double p, const std::vector<size_t>& n_values,
                                 double exact_l2sq = -1.0);

} // namespace nb
