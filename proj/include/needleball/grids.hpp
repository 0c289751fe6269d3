#pragma once

#include <optional>
#include <string>
#include <vector>

#include "needleball/geometry.hpp"
#include "needleball/kernels.hpp"

namespace nb {

enum class GridStrategy { product, quasi_uniform };

std::string to_string(GridStrategy s);
GridStrategy strategy_from_string(const std::string& s);

// Partition cell. d=1: interval [x0,x1]. d=2: annular sector r in [r0,r1],
// theta in [theta0, theta0 + dtheta) with dtheta = 2 pi / sectors-in-band.
struct GridCell {
    double x0 = 0.0, x1 = 0.0;      // d=1 interval or d=2 radial interval
    double theta0 = 0.0, theta1 = 0.0; // d=2 angular interval
};

// Per-level point set X_j with positive cubature weights exact on Pi_{2^{j+2}}
// and a tiling of B^d by cells around the points.
struct NeedletGrid {
    int level = 0;
    int dim = 2;
    GridStrategy strategy = GridStrategy::product;
    std::vector<BallPoint> points;
    std::vector<double> weights;
    std::vector<GridCell> cells;
    std::vector<double> cell_measures;

    // Product structure (product strategy): ring-major layout.
    std::optional<ProductQuad> product;

    // Quasi-uniform band structure (d=2): band m covers phi in
    // [band_phi[m], band_phi[m+1]) with band_sectors[m] staggered sectors;
    // flat index = band_start[m] + sector.
    std::vector<double> band_phi;
    std::vector<int> band_sectors;
    std::vector<size_t> band_start;

    size_t size() const { return points.size(); }
    int exact_degree() const { return (1 << (level + 2)); }
    PolarPoints rings() const; // product strategy only
};

// Build the level-j grid. Product is the default construction; quasi_uniform
// places near equal-area cells of intrinsic diameter ~ 2^{-j} and fits strictly
// positive weights matching all moments of degree <= 2^{j+2}. mesh_constant <= 0
// picks the default (0.3); the fit escalates density up to two times before
// signalling nnls-infeasible.
NeedletGrid build_grid(const WeightedBall& ball, int j, GridStrategy strategy,
                       double mesh_constant = 0.0);

// Index of the unique cell containing x (ties toward lower index).
size_t locate_cell(const NeedletGrid& grid, const BallPoint& x);

} // namespace nb
