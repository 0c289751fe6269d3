#pragma once

#include <cstdint>
#include <string>

#include "needleball/needlets.hpp"

namespace nb {

// Named test inputs shared by the CLI, the verification suites, and the tests.
struct TestFunction {
    std::string descriptor;
    FunctionHandle handle;
    double exact_l2sq = -1.0; // ||f||_{L2(w_mu)}^2 when known in closed form
};

// descriptor grammar: family[:key=value[,key=value...]]
//   constant[:value=<c>]
//   coordinate:index=<i>
//   boundary_power:alpha=<a>          (1-|x|^2)^a
//   gaussian_bump[:cx=,cy=,width=]
//   random_bandlimited:degree=<n>[,seed=<s>]
TestFunction make_test_function(const WeightedBall& ball, const std::string& descriptor,
                                uint64_t default_seed = 1);

// Random polynomial of the given total degree with coefficients in the bounded
// Chebyshev ball basis (band-limited input generator).
TestFunction random_bandlimited(const WeightedBall& ball, int degree, uint64_t seed);

} // namespace nb
