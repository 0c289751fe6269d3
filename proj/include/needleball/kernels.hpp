#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "needleball/cutoffs.hpp"
#include "needleball/geometry.hpp"
#include "needleball/orthopoly.hpp"

namespace nb {

// Kernel of the form sum_{nu=lo}^{hi} coef[nu-lo] C_nu^lambda(z) integrated over
// the u-variable: K(x,y) = sum_k w_k G(<x,y> + u_k sqrt(1-|x|^2) sqrt(1-|y|^2)).
// The projector normalization b_d^mu b_1^{mu-1/2} (nu+lambda)/lambda is folded
// into coef, so P_n, L_n, Phi_j, Psi_j and spectral products are all instances.
struct SpectralKernel {
    double lambda = 1.0;
    int lo = 0;
    std::vector<double> coef;
    QuadratureRule u_rule; // exact for the top Gegenbauer degree

    int degree() const { return lo + int(coef.size()) - 1; }
    double eval_sum(double z) const;                            // G(z)
    double eval_geo(double dotxy, double sx, double sy) const;  // inner product form
    double eval(const BallPoint& x, const BallPoint& y) const;
};

// Shared evaluation context: ball + cutoff systems + cached u-rules.
struct KernelConfig {
    WeightedBall ball;
    CutoffPair pair;          // type (b) analysis/synthesis pair
    Cutoff window_a;          // type (a) cutoff for reproducing kernels
    int degree_cap = 512;

    KernelConfig() = default;
    KernelConfig(const WeightedBall& b, CutoffPair p);

    const QuadratureRule& u_rule_for_degree(int deg) const;

  private:
    mutable std::map<int, QuadratureRule> rules_;
};

// Kernel builders. Phi_0 = Psi_0 = P_0 (the constant kernel b_d^mu reproducing
// constants); for j >= 1 the bands are a(nu / 2^{j-1}) over nu in [2^{j-2}, 2^j].
SpectralKernel projector_kernel(const KernelConfig& cfg, int n);                  // P_n
SpectralKernel smoothed_kernel(const KernelConfig& cfg, int n, const Cutoff& a);  // L_n
SpectralKernel band_kernel(const KernelConfig& cfg, int j, const Cutoff& a);      // Phi_j / Psi_j
// sum_nu a(nu/2^{j-1}) b(nu/2^{jp-1}) A_nu C_nu: the kernel of x -> <K_j(.,x), K_jp(.,y)>.
SpectralKernel band_product_kernel(const KernelConfig& cfg, int j, const Cutoff& a, int jp,
                                   const Cutoff& b);
// sum_k |a(k/n)|^2 A_k C_k; its diagonal value is the exact L2(w_mu) norm^2 of L_n(x,.).
SpectralKernel smoothed_squared_kernel(const KernelConfig& cfg, int n, const Cutoff& a);

// Spec-facing wrappers.
double eval_Pn(const KernelConfig& cfg, int n, const BallPoint& x, const BallPoint& y);
double eval_Ln(const KernelConfig& cfg, int n, const BallPoint& x, const BallPoint& y);
double eval_Phi_j(const KernelConfig& cfg, int j, const BallPoint& x, const BallPoint& y);
double eval_Psi_j(const KernelConfig& cfg, int j, const BallPoint& x, const BallPoint& y);

// ---------------------------------------------------------------------------
// Product-structure evaluation paths (d=2 polar grids, d=1 lines).

// Equispaced-angle ring set: point (ring a, angle m) = radii[a] * (cos, sin)(2 pi m / n_theta).
struct PolarPoints {
    std::vector<double> radii;
    int n_theta = 1;
    size_t size() const { return radii.size() * size_t(n_theta); }
    BallPoint point(size_t flat) const;
};

// Product quadrature grid for integrals against w_mu over B^d.
// d=2: ring-major flattening, weight per point = radial_w[a] * 2 pi / n_theta.
struct ProductQuad {
    int dim = 2;
    int exact_degree = 0;
    std::vector<double> radii, radial_w; // d=2 radial factor (already includes r dr and weight)
    int n_theta = 1;
    std::vector<double> nodes1, weights1; // d=1
    std::vector<BallPoint> points;        // flattened
    std::vector<double> weights;          // flattened

    size_t size() const { return points.size(); }
    PolarPoints rings() const { return PolarPoints{radii, n_theta}; }
};

// Product quadrature exact on Pi_degree against w_mu. For d=2 the angular count
// is the smallest multiple of theta_multiple that is >= degree+1 (theta_multiple
// <= 0 means just degree+1), enabling the circulant kernel path against ring
// sets with commensurate angles.
ProductQuad build_product_quadrature(const WeightedBall& ball, int degree, int theta_multiple = 0,
                                     int radial_nodes_min = 0);

// out[t] = sum_i g[i] K(T[t], S_i): the weighted kernel application underlying
// both convolution (g = quadrature weights * f) and needlet synthesis (g =
// coefficients * lambda^{1/2}).  The polar path uses angular tables when the
// angle counts are commensurate and falls back to the dense loop otherwise.
std::vector<double> kernel_apply(const SpectralKernel& K, const PolarPoints& targets,
                                 const PolarPoints& source, const std::vector<double>& g);
std::vector<double> kernel_apply(const SpectralKernel& K, const std::vector<BallPoint>& targets,
                                 const std::vector<BallPoint>& source,
                                 const std::vector<double>& g);

// Dense row-major targets x source matrix of kernel values (angular tables used
// when commensurate).
std::vector<double> kernel_matrix(const SpectralKernel& K, const PolarPoints& targets,
                                  const PolarPoints& source);
std::vector<double> kernel_matrix(const SpectralKernel& K, const std::vector<BallPoint>& targets,
                                  const std::vector<BallPoint>& source);

// Reusable kernel-value table between two polar ring sets. When the angle
// counts are commensurate only the angular profiles are stored (size
// rings_t * rings_s * L); otherwise the dense matrix is kept.
struct KernelTable {
    bool circulant = false;
    size_t tr = 0, ts = 0; // ring counts
    int nt = 0, ns = 0;    // angle counts
    int L = 0, ct = 1, cs = 1;
    std::vector<double> data;

    size_t rows() const { return tr * size_t(nt); }
    size_t cols() const { return ts * size_t(ns); }
    size_t bytes() const { return data.size() * sizeof(double); }
    double entry(size_t t, size_t s) const;
    // out[t] += sum_s table(t,s) g[s]
    void apply_add(const std::vector<double>& g, std::vector<double>& out) const;
};

KernelTable build_kernel_table(const SpectralKernel& K, const PolarPoints& targets,
                               const PolarPoints& source);

// out[t] = sum_i S.weights[i] K(T[t], S.points[i]) f[i].
std::vector<double> convolve_grid(const SpectralKernel& K, const PolarPoints& targets,
                                  const ProductQuad& source, const std::vector<double>& f);
std::vector<double> convolve_points(const SpectralKernel& K, const std::vector<BallPoint>& targets,
                                    const ProductQuad& source, const std::vector<double>& f);

// L_p(w_mu) norms over the quadrature of x -> K(x, s) for every ring of a polar
// source set, for several p at once; requires quad.n_theta % source.n_theta == 0
// (the norm is then constant along each source ring). Result [ip][ring].
std::vector<std::vector<double>> kernel_column_norms(const SpectralKernel& K,
                                                     const ProductQuad& quad,
                                                     const PolarPoints& source,
                                                     const std::vector<double>& ps);

// (sum_i w_i |v_i|^p)^{1/p}; p = inf -> max |v_i|.
double norm_p(const std::vector<double>& values, const std::vector<double>& weights, double p);

// ---------------------------------------------------------------------------
// Diagnostics.

// max over pairs of |L_n(x,y)| (1 + n d(x,y))^k sqrt(W(n;x) W(n;y)) / n^d.
double localization_constant(const KernelConfig& cfg, int n, double k,
                             const std::vector<std::pair<BallPoint, BallPoint>>& pairs);

// Empirical constant of the Lip-1 property of L_n around base points.
double lipschitz_constant(const KernelConfig& cfg, int n, double k,
                          const std::vector<std::pair<BallPoint, BallPoint>>& near_pairs,
                          const std::vector<BallPoint>& probe_ys);

struct NikolskiiRatios {
    double plain = 0.0;    // ||g||_p / (n^{(d+2mu)(1/q-1/p)} ||g||_q)
    double weighted = 0.0; // ||W^g g||_p / (n^{d(1/q-1/p)} ||W^{g+1/p-1/q} g||_q)
};
NikolskiiRatios nikolskii_check(const KernelConfig& cfg, int n,
                                const std::function<double(const BallPoint&)>& g, double p,
                                double q, double gamma, const ProductQuad& quad);

} // namespace nb
