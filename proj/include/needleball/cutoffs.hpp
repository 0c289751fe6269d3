#pragma once

#include <functional>
#include <string>

#include "needleball/errors.hpp"

namespace nb {

enum class CutoffKind { type_a, type_b };

// Admissible C^inf cutoff: type_a is 1 on [0,1] with support [0,2]; type_b has
// support [1/2,2] and a positive floor on [3/5,5/3].
struct Cutoff {
    CutoffKind kind = CutoffKind::type_b;
    std::string name;                         // construction tag, serialized
    std::function<double(double)> evaluator;
    double support_lo = 0.5, support_hi = 2.0;
    double floor = 0.0;                       // measured min |a| on [3/5,5/3]

    double operator()(double t) const { return evaluator(t); }
};

// Dual pair satisfying conj(a(t)) b(t) + conj(a(2t)) b(2t) = 1 on [1/2,1].
struct CutoffPair {
    Cutoff a_hat;
    Cutoff b_hat;
    std::string name;
    bool self_dual = false;
};

double eval_cutoff(const Cutoff& c, double t);

// Canonical cutoffs from the smooth transition h(t) = exp(-1/t):
//   type_a: 1 - s(t-1); type_b: sqrt(s(2t-1) - s(t-1)) with s = h/(h + h(1-.)).
Cutoff make_bump_cutoff(CutoffKind kind);

// Self-dual pair (b = a >= 0, a(t)^2 + a(2t)^2 = 1 on [1/2,1]); the default frame pair.
CutoffPair make_pair_self_dual();

// A second, genuinely different admissible system: a plateau bump a2 (1 on
// [3/5,5/3]) with b2 = a2 / (a2(t)^2 + a2(2t)^2 + a2(t/2)^2). Used for the
// cutoff-independence cross-checks.
CutoffPair make_pair_plateau();

CutoffPair make_pair_by_name(const std::string& name); // "self-dual" | "pair:plateau"

// Smooth transition s(t): 0 for t<=0, 1 for t>=1 (exposed for tests).
double smooth_step(double t);

} // namespace nb
