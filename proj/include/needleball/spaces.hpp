#pragma once

#include "needleball/needlets.hpp"

namespace nb {

enum class SpaceFamily { F, B };

// Parameters (s, rho, p, q) of the weighted Triebel-Lizorkin / Besov scales.
struct SpaceParams {
    double s = 0.0;
    double rho = 0.0;
    double p = 2.0;
    double q = 2.0;
    SpaceFamily family = SpaceFamily::F;
};

// Kernel-side band convolutions: values of the level-j band kernels applied to
// f on the frame norm grid, j = 0..J. A non-null pair overrides the frame's
// cutoff system (used by the cutoff-independence check).
using BandValues = std::vector<std::vector<double>>;
BandValues band_convolutions(const NeedletFrame& frame, const FunctionHandle& f,
                             const CutoffPair* pair = nullptr);

// Norm reductions over precomputed band convolutions (one convolution pass can
// serve a whole (s, rho, p, q) grid).
double f_norm_from_bands(const NeedletFrame& frame, const BandValues& conv,
                         const SpaceParams& prm);
double b_norm_from_bands(const NeedletFrame& frame, const BandValues& conv,
                         const SpaceParams& prm);

// || ( sum_j (2^{sj} W(2^j;.)^{-rho/d} |Phi_j*f|)^q )^{1/q} ||_p  (levels 0..J;
// exact for inputs band-limited under 2^{J-1}, truncated otherwise). p < inf.
double f_norm_kernel(const NeedletFrame& frame, const FunctionHandle& f, const SpaceParams& prm,
                     const CutoffPair* pair = nullptr);

// ( sum_j (2^{sj} ||W(2^j;.)^{-rho/d} Phi_j*f||_p)^q )^{1/q}.
double b_norm_kernel(const NeedletFrame& frame, const FunctionHandle& f, const SpaceParams& prm,
                     const CutoffPair* pair = nullptr);

// Precomputed common refinement of the level partitions: per refinement cell,
// its w_mu-measure and, per level, the containing grid cell with its weights.
// Reusable across coefficient sets and parameters for one frame.
struct SequenceNormContext {
    struct Cell {
        double measure;
        std::vector<size_t> index; // per level
    };
    std::vector<Cell> cells;
    // W_mu(2^j; xi) and m(R_xi)^{-1/2} per level per grid point.
    std::vector<std::vector<double>> W, inv_sqrt_m;
};
SequenceNormContext build_sequence_norm_context(const NeedletFrame& frame);

// Sequence-space norms of needlet coefficients. The F-version integrates the
// piecewise-constant cell functions exactly over the common refinement of the
// level partitions (ctx optional, built on the fly when null).
double f_norm_sequence(const NeedletFrame& frame, const CoefficientSet& c, const SpaceParams& prm,
                       const SequenceNormContext* ctx = nullptr);
double b_norm_sequence(const NeedletFrame& frame, const CoefficientSet& c, const SpaceParams& prm);

// ||f||_p + ( sum_{j<=J} (2^{sj} E-hat_{2^j}(f)_p)^q )^{1/q} with the near-best
// surrogate E-hat_n = ||f - L_n*f||_p.
double besov_via_best_approx(const NeedletFrame& frame, const FunctionHandle& f, double s, double p,
                             double q);

// Discretized maximal operator: sup over candidate balls containing x of
// (m(B)^{-1} int_B |f|^t w)^{1/t}, balls from centers x radii, integrals and
// measures by the given quadrature (a lower bound for the true sup).
double maximal_function(const WeightedBall& ball, const std::vector<double>& f_on_quad,
                        const ProductQuad& quad, double t, const BallPoint& x,
                        const std::vector<BallPoint>& centers, const std::vector<double>& radii);

} // namespace nb
