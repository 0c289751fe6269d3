#include "needleball/grids.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "needleball/polybasis.hpp"

namespace nb {

namespace {

constexpr double kPi = 3.14159265358979323846;

// phi-measure of a radial band: int_{p0}^{p1} cos^{2mu}(phi) sin(phi) dphi in
// closed form via t = sin^2 phi:  (1/2) int (1-t)^{mu-1/2} dt.
double band_phi_measure(double mu, double p0, double p1) {
    double t0 = std::sin(p0) * std::sin(p0), t1 = std::sin(p1) * std::sin(p1);
    return 0.5 * (std::pow(1.0 - t0, mu + 0.5) - std::pow(1.0 - t1, mu + 0.5)) / (mu + 0.5);
}

using MomentBasis = ChebyshevBallBasis;

// Minimal-norm multiplicative correction of initial weights w0 > 0 so that the
// scaled-basis moments match those of the exact product rule. Returns empty on
// loss of positivity.
std::vector<double> fit_weights(const WeightedBall& ball, int D,
                                const std::vector<BallPoint>& pts,
                                const std::vector<double>& w0) {
    MomentBasis basis(ball.dim, D);
    const size_t E = basis.count, N = pts.size();
    Eigen::MatrixXd A(E, N);
    std::vector<double> row(E);
    for (size_t i = 0; i < N; ++i) {
        basis.eval(pts[i], row.data());
        for (size_t e = 0; e < E; ++e) A(long(e), long(i)) = row[e];
    }
    // Exact moments from the product rule of the same degree.
    ProductQuad exact = build_product_quadrature(ball, D);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(long(E));
    for (size_t i = 0; i < exact.size(); ++i) {
        basis.eval(exact.points[i], row.data());
        for (size_t e = 0; e < E; ++e) b(long(e)) += exact.weights[i] * row[e];
    }
    Eigen::VectorXd w0v = Eigen::VectorXd::Zero(long(N));
    for (size_t i = 0; i < N; ++i) w0v(long(i)) = w0[i];
    Eigen::VectorXd r = b - A * w0v;
    Eigen::MatrixXd B = A * w0v.asDiagonal();
    Eigen::MatrixXd G = B * B.transpose();
    Eigen::VectorXd delta = B.transpose() * G.ldlt().solve(r);
    std::vector<double> lam(N);
    for (size_t i = 0; i < N; ++i) {
        double m = 1.0 + delta(long(i));
        if (!(m > 1e-6)) return {};
        lam[i] = w0[i] * m;
    }
    // Residual acceptance in the scaled basis.
    double resid = (A * Eigen::Map<Eigen::VectorXd>(lam.data(), long(N)) - b).norm();
    double scale = std::max(1.0, b.norm());
    if (!(resid <= 1e-10 * scale))
        throw numerical_error("nnls-infeasible: moment residual " + std::to_string(resid));
    return lam;
}

NeedletGrid build_product_grid(const WeightedBall& ball, int j) {
    NeedletGrid g;
    g.level = j;
    g.dim = ball.dim;
    g.strategy = GridStrategy::product;
    const int D = 1 << (j + 2);
    const double mu = ball.mu;
    if (ball.dim == 1) {
        ProductQuad q = build_product_quadrature(ball, D);
        g.product = q;
        g.points = q.points;
        g.weights = q.weights;
        // Interval cells split at phi-midpoints.
        size_t n = q.nodes1.size();
        std::vector<double> bnd(n + 1);
        bnd[0] = -1.0;
        bnd[n] = 1.0;
        for (size_t i = 0; i + 1 < n; ++i) {
            double pm = 0.5 * (std::asin(q.nodes1[i]) + std::asin(q.nodes1[i + 1]));
            bnd[i + 1] = std::sin(pm);
        }
        for (size_t i = 0; i < n; ++i) {
            GridCell c;
            c.x0 = bnd[i];
            c.x1 = bnd[i + 1];
            g.cells.push_back(c);
            g.cell_measures.push_back(interval_weight_measure(ball, c.x0, c.x1));
        }
        return g;
    }
    ProductQuad q = build_product_quadrature(ball, D); // n_theta = D+1 as pinned
    g.product = q;
    g.points = q.points;
    g.weights = q.weights;
    size_t nr = q.radii.size();
    int nt = q.n_theta;
    std::vector<double> rb(nr + 1);
    rb[0] = 0.0;
    rb[nr] = 1.0;
    for (size_t i = 0; i + 1 < nr; ++i) {
        double pm = 0.5 * (std::asin(q.radii[i]) + std::asin(q.radii[i + 1]));
        rb[i + 1] = std::sin(pm);
    }
    double dth = 2.0 * kPi / nt;
    for (size_t a = 0; a < nr; ++a) {
        double t0 = rb[a] * rb[a], t1 = rb[a + 1] * rb[a + 1];
        double radm = 0.5 * (std::pow(1.0 - t0, mu + 0.5) - std::pow(1.0 - t1, mu + 0.5)) / (mu + 0.5);
        for (int m = 0; m < nt; ++m) {
            GridCell c;
            c.x0 = rb[a];
            c.x1 = rb[a + 1];
            c.theta0 = (m - 0.5) * dth;
            c.theta1 = (m + 0.5) * dth;
            g.cells.push_back(c);
            g.cell_measures.push_back(radm * dth);
        }
    }
    return g;
}

NeedletGrid build_quasi_grid(const WeightedBall& ball, int j, double mesh_constant) {
    NeedletGrid g;
    g.level = j;
    g.dim = ball.dim;
    g.strategy = GridStrategy::quasi_uniform;
    const int D = 1 << (j + 2);
    const double mu = ball.mu;
    if (ball.dim == 1) {
        double dphi = mesh_constant * std::ldexp(1.0, -j);
        int M = std::max(2, int(std::ceil(kPi / dphi)));
        dphi = kPi / M;
        std::vector<BallPoint> pts;
        std::vector<double> w0;
        for (int i = 0; i < M; ++i) {
            double p0 = -kPi / 2.0 + i * dphi, p1 = p0 + dphi;
            double pc = 0.5 * (p0 + p1);
            double x = std::sin(pc);
            if (j == 1 && std::abs(x) < 1e-12) x = std::ldexp(1.0, -j - 3); // keep 0 out of X_1
            pts.emplace_back(x, 1);
            GridCell c;
            c.x0 = std::sin(p0);
            c.x1 = std::sin(p1);
            g.cells.push_back(c);
            g.cell_measures.push_back(interval_weight_measure(ball, c.x0, c.x1));
            w0.push_back(g.cell_measures.back());
        }
        auto lam = fit_weights(ball, D, pts, w0);
        if (lam.empty()) return {};
        g.points = pts;
        g.weights = lam;
        return g;
    }
    if (ball.dim != 2) throw config_error("quasi_uniform grids implemented for d in {1,2}");
    double dphi = mesh_constant * std::ldexp(1.0, -j);
    int M = std::max(2, int(std::ceil((kPi / 2.0) / dphi)));
    dphi = (kPi / 2.0) / M;
    // Sector counts of at least 8 make every angular moment k <= 2^{j+2} vanish
    // identically up to O(r^8) at the innermost radii, so per-band weights only
    // need to match the radial (k = 0) moments.
    const int kMinSectors = 8;
    std::vector<BallPoint> pts;
    std::vector<double> w0;         // per-point initial weights (sector measures)
    std::vector<double> band_r;     // band center radius (0 for the disk)
    g.band_phi.resize(size_t(M) + 1);
    for (int m = 0; m <= M; ++m) g.band_phi[size_t(m)] = m * dphi;
    // Band 0: disk cell around the origin.
    g.band_sectors.push_back(1);
    g.band_start.push_back(0);
    {
        double x0 = (j == 1) ? std::ldexp(1.0, -j - 3) : 0.0;
        pts.emplace_back(x0, 0.0);
        band_r.push_back(x0);
        GridCell c;
        c.x0 = 0.0;
        c.x1 = std::sin(dphi);
        c.theta0 = 0.0;
        c.theta1 = 2.0 * kPi;
        g.cells.push_back(c);
        g.cell_measures.push_back(2.0 * kPi * band_phi_measure(mu, 0.0, dphi));
        w0.push_back(g.cell_measures.back());
    }
    for (int m = 1; m < M; ++m) {
        double p0 = g.band_phi[size_t(m)], p1 = g.band_phi[size_t(m + 1)];
        double pm = 0.5 * (p0 + p1);
        int Nm = std::max(kMinSectors, int(std::lround(2.0 * kPi * std::sin(pm) / dphi)));
        // The reduced fit drops angular moment rows on the grounds that their
        // coefficients carry r^{Nm}; where that is not negligible, push the
        // sector count past the moment degree so the rows vanish identically.
        if (Nm <= D && std::pow(std::sin(pm), Nm) > 1e-10) Nm = D + 1;
        g.band_sectors.push_back(Nm);
        g.band_start.push_back(pts.size());
        double bm = band_phi_measure(mu, p0, p1) * 2.0 * kPi / Nm;
        double rc = std::sin(pm);
        band_r.push_back(rc);
        for (int i = 0; i < Nm; ++i) {
            double th0 = i * 2.0 * kPi / Nm;
            double thc = th0 + kPi / Nm;
            pts.emplace_back(rc * std::cos(thc), rc * std::sin(thc));
            GridCell c;
            c.x0 = std::sin(p0);
            c.x1 = std::sin(p1);
            c.theta0 = th0;
            c.theta1 = th0 + 2.0 * kPi / Nm;
            g.cells.push_back(c);
            g.cell_measures.push_back(bm);
            w0.push_back(bm);
        }
    }
    if (j == 1) {
        // The nudged origin point breaks the band symmetry, so level 1 fits
        // every weight against the full moment system (small at this level).
        auto lam = fit_weights(ball, D, pts, w0);
        if (lam.empty()) return {};
        g.points = pts;
        g.weights = lam;
        return g;
    }
    // Reduced moment system over per-band weights: rows are the radial basis
    // elements T_{m'}(2r^2-1), columns the bands (count folded in).
    size_t nb = g.band_sectors.size();
    int mprime = D / 2 + 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(mprime, long(nb));
    for (size_t b = 0; b < nb; ++b) {
        double t = 2.0 * band_r[b] * band_r[b] - 1.0;
        double T0 = 1.0, T1 = t;
        for (int mp = 0; mp < mprime; ++mp) {
            double Tv = mp == 0 ? 1.0 : (mp == 1 ? t : 2.0 * t * T1 - T0);
            if (mp >= 2) {
                T0 = T1;
                T1 = Tv;
            }
            A(mp, long(b)) = g.band_sectors[b] * Tv;
        }
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mprime);
    {
        ProductQuad exact = build_product_quadrature(ball, D);
        for (size_t i = 0; i < exact.radii.size(); ++i) {
            double t = 2.0 * exact.radii[i] * exact.radii[i] - 1.0;
            double wring = exact.radial_w[i] * 2.0 * kPi;
            double T0 = 1.0, T1 = t;
            for (int mp = 0; mp < mprime; ++mp) {
                double Tv = mp == 0 ? 1.0 : (mp == 1 ? t : 2.0 * t * T1 - T0);
                if (mp >= 2) {
                    T0 = T1;
                    T1 = Tv;
                }
                rhs(mp) += wring * Tv;
            }
        }
    }
    Eigen::VectorXd u0 = Eigen::VectorXd::Zero(long(nb));
    for (size_t b = 0; b < nb; ++b) u0(long(b)) = w0[g.band_start[b]];
    Eigen::VectorXd resid = rhs - A * u0;
    Eigen::MatrixXd B = A * u0.asDiagonal();
    Eigen::VectorXd delta = B.transpose() * (B * B.transpose()).ldlt().solve(resid);
    std::vector<double> band_w(nb);
    for (size_t b = 0; b < nb; ++b) {
        double mult = 1.0 + delta(long(b));
        if (!(mult > 1e-6)) return {};
        band_w[b] = u0(long(b)) * mult;
    }
    double fit_err = (A * Eigen::Map<Eigen::VectorXd>(band_w.data(), long(nb)) - rhs).norm();
    if (!(fit_err <= 1e-10 * std::max(1.0, rhs.norm())))
        throw numerical_error("nnls-infeasible: radial moment residual " + std::to_string(fit_err));
    g.points = pts;
    g.weights.resize(pts.size());
    for (size_t b = 0; b < nb; ++b)
        for (int i = 0; i < g.band_sectors[b]; ++i) g.weights[g.band_start[b] + size_t(i)] = band_w[b];
    return g;
}

} // namespace

std::string to_string(GridStrategy s) {
    return s == GridStrategy::product ? "product" : "quasi-uniform";
}

GridStrategy strategy_from_string(const std::string& s) {
    if (s == "product") return GridStrategy::product;
    if (s == "quasi-uniform" || s == "quasi_uniform") return GridStrategy::quasi_uniform;
    throw config_error("unknown grid strategy: " + s);
}

PolarPoints NeedletGrid::rings() const {
    if (!product || dim != 2) throw config_error("rings() requires a d=2 product grid");
    return PolarPoints{product->radii, product->n_theta};
}

NeedletGrid build_grid(const WeightedBall& ball, int j, GridStrategy strategy,
                       double mesh_constant) {
    if (j < 0) throw config_error("grid level must be >= 0");
    if (ball.dim != 1 && ball.dim != 2) throw config_error("grids require d in {1,2}");
    if (strategy == GridStrategy::product) return build_product_grid(ball, j);
    // Cells of intrinsic size ~0.7 * 2^{-j}: large enough that their measures
    // track m(B_xi(2^{-j})) without a big mesh-constant power, small enough to
    // leave the radial moment system underdetermined.
    double c = mesh_constant > 0.0 ? mesh_constant : 0.7;
    for (int attempt = 0; attempt < 3; ++attempt) {
        NeedletGrid g = build_quasi_grid(ball, j, c);
        if (!g.points.empty()) return g;
        c *= 0.7; // raise density and refit
    }
    throw numerical_error("nnls-infeasible: positive moment-matching weights not found");
}

size_t locate_cell(const NeedletGrid& grid, const BallPoint& x) {
    if (grid.dim == 1) {
        double v = x[0];
        size_t lo = 0, hi = grid.cells.size() - 1;
        while (lo < hi) {
            size_t mid = (lo + hi) / 2;
            if (v <= grid.cells[mid].x1)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }
    double r = x.norm();
    double theta = std::atan2(x[1], x[0]);
    if (theta < 0.0) theta += 2.0 * kPi;
    if (grid.strategy == GridStrategy::product) {
        const auto& q = *grid.product;
        size_t nr = q.radii.size();
        // Radial slot: first band whose upper radius is >= r.
        size_t a = 0;
        while (a + 1 < nr && r > grid.cells[a * size_t(q.n_theta)].x1) ++a;
        int nt = q.n_theta;
        // Sector m covers [(m-1/2), (m+1/2)) * dth; exact boundary goes to the
        // lower index.
        double u = theta / (2.0 * kPi / nt) + 0.5;
        long m = long(std::floor(u));
        if (double(m) == u && m > 0) --m;
        m %= nt;
        if (m < 0) m += nt;
        return a * size_t(nt) + size_t(m);
    }
    double phi = std::asin(std::min(1.0, r));
    size_t M = grid.band_sectors.size();
    size_t band = std::min(M - 1, size_t(phi / (grid.band_phi[1] - grid.band_phi[0])));
    // Guard against roundoff at band edges.
    while (band + 1 < M && phi >= grid.band_phi[band + 1]) ++band;
    while (band > 0 && phi < grid.band_phi[band]) --band;
    if (band == 0) return 0;
    int Nm = grid.band_sectors[band];
    long s = long(theta / (2.0 * kPi / Nm));
    if (s >= Nm) s = Nm - 1;
    return grid.band_start[band] + size_t(s);
}

} // namespace nb
