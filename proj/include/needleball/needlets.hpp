#pragma once

#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "needleball/grids.hpp"
#include "needleball/kernels.hpp"

namespace nb {

// Evaluable input for analysis and norm operators. poly_degree >= 0 activates
// the exact-quadrature path; radial marks rotation-invariant functions.
struct FunctionHandle {
    std::function<double(const BallPoint&)> eval;
    int poly_degree = -1;
    bool radial = false;
};

enum class NeedletSide { analysis, synthesis };

struct FrameConfig {
    int dim = 2;
    double mu = 1.0;
    int levels = 4; // J
    GridStrategy strategy = GridStrategy::product;
    std::string cutoff = "self-dual";
    double mesh_constant = 0.0;
    int analysis_radial_boost = 0;           // extra radial nodes for generic f
    size_t cache_budget_bytes = size_t(512) << 20;
};

// Byte cache for kernel tables, bounded by an explicit budget; entries beyond
// budget are simply not retained and callers recompute.
class KernelCache {
  public:
    explicit KernelCache(size_t budget = size_t(512) << 20) : budget_(budget) {}
    const KernelTable* find(const std::string& key) const;
    const KernelTable* insert(const std::string& key, KernelTable value);
    size_t bytes() const { return bytes_; }
    void set_budget(size_t b) { budget_ = b; }

  private:
    size_t budget_, bytes_ = 0;
    std::map<std::string, KernelTable> store_;
};

struct NeedletFrame {
    WeightedBall ball;
    KernelConfig kernels;
    FrameConfig config;
    int J = 0;
    std::vector<NeedletGrid> levels; // 0..J
    int analysis_degree = 0;         // 2^{J+2}
    std::string frame_hash;          // content hash, set after build/load

    mutable KernelCache cache{};
    mutable std::map<std::string, ProductQuad> quad_cache;

    const NeedletGrid& grid(int j) const { return levels.at(size_t(j)); }
    size_t total_points() const;
    bool self_dual() const { return kernels.pair.self_dual; }

    // Quadrature exact on Pi_degree whose angular count is a multiple of
    // theta_multiple (cached). radial_min requests extra radial oversampling.
    const ProductQuad& quadrature(int degree, int theta_multiple, int radial_min = 0) const;
    // Default L_p evaluation grid: degree 2^{J+1}, angles commensurate with the
    // top level grid.
    const ProductQuad& norm_quad() const;

    // Cached table of the level-j analysis/synthesis kernel between `targets`
    // rings and the level grid rings (d=2 product strategy).
    const KernelTable& level_table(int j, NeedletSide side, const PolarPoints& targets,
                                   const std::string& target_id) const;
};

NeedletFrame build_frame(const FrameConfig& cfg);

// Dense per-level coefficients; imaginary parts empty means identically zero.
struct CoefficientSet {
    std::string frame_hash;
    int aliasing_degree = 0; // quadrature degree used when f was not polynomial
    std::vector<std::vector<double>> re, im;

    size_t total() const;
    bool has_imag() const;
    double abs2(int j, size_t i) const {
        double a = re[size_t(j)][i];
        double b = im.empty() || im[size_t(j)].empty() ? 0.0 : im[size_t(j)][i];
        return a * a + b * b;
    }
};

// lambda_xi^{1/2} Phi_j(x, xi) (analysis) or lambda_xi^{1/2} Psi_j(x, xi).
double eval_needlet(const NeedletFrame& frame, int j, size_t xi_index, const BallPoint& x,
                    NeedletSide side);

// Needlet coefficients <f, phi_xi> for all levels 0..J. Polynomial inputs use
// exact per-level quadrature (error: insufficient-quadrature-degree beyond the
// cap); generic inputs use the frame analysis quadrature, degree 2^{J+2}.
CoefficientSet analyze(const NeedletFrame& frame, const FunctionHandle& f);

// sum_xi c_xi psi_xi at the target points (coefficient imaginary parts carried
// through; real frames with real coefficients produce zero imaginary part).
std::vector<double> synthesize(const NeedletFrame& frame, const CoefficientSet& c,
                               const std::vector<BallPoint>& targets);
// Fast path onto a product quadrature grid (values at quad.points order).
std::vector<double> synthesize_on_quad(const NeedletFrame& frame, const CoefficientSet& c,
                                       const ProductQuad& quad);

// Per-ring L_p norms of the synthesis needlets of level j over the frame's norm
// grid (product strategy; cached). Result [ip][ring]; expand by grid layout.
std::vector<std::vector<double>> needlet_norms(const NeedletFrame& frame, int j,
                                               const std::vector<double>& ps);
// Norm of one needlet (any strategy).
double needlet_norm(const NeedletFrame& frame, int j, size_t xi_index, double p,
                    NeedletSide side);

struct LocalizationReport {
    double c_k = 0.0;        // empirical decay constant at order k
    double diag_min = 0.0;   // min over sampled xi of |psi_xi(xi)| (W/2^{jd})^{1/2}
    double diag_max = 0.0;
    double local_max_min = 0.0;   // min over xi of cell-local max, same scaling
    double kernel_diag_min = 0.0; // min of Psi_j(xi,xi) W(2^j;xi) / 2^{jd}
};
LocalizationReport needlet_localization_report(const NeedletFrame& frame, int j, double k,
                                               size_t samples, uint64_t seed);
// Grid-supplied variant (for levels beyond the frame's J).
LocalizationReport needlet_localization_report(const KernelConfig& kernels,
                                               const NeedletGrid& grid, int j, double k,
                                               size_t samples, uint64_t seed);

} // namespace nb
