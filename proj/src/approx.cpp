#include "needleball/approx.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "needleball/spaces.hpp"

namespace nb {

namespace {

std::string quad_id(const ProductQuad& q) {
    return std::to_string(q.exact_degree) + "." + std::to_string(q.n_theta) + "." +
           std::to_string(q.radii.size());
}

} // namespace

double best_poly_error(const NeedletFrame& frame, const FunctionHandle& f, int n, double p) {
    const ProductQuad& T = frame.norm_quad();
    int deg = f.poly_degree >= 0 ? 2 * n + f.poly_degree : std::max(4 * n, frame.analysis_degree);
    int rmin = f.poly_degree >= 0 ? 0 : frame.config.analysis_radial_boost;
    const ProductQuad& S = frame.quadrature(deg, frame.ball.dim == 2 ? T.n_theta : 0, rmin);
    std::vector<double> gv(S.size());
    for (size_t i = 0; i < S.size(); ++i) gv[i] = S.weights[i] * f.eval(S.points[i]);
    SpectralKernel K = smoothed_kernel(frame.kernels, n, frame.kernels.window_a);
    std::vector<double> approx(T.size(), 0.0);
    if (frame.ball.dim == 2) {
        std::string key = "ln:" + std::to_string(n) + ":" + quad_id(S) + ">" + quad_id(T);
        const KernelTable* tab = frame.cache.find(key);
        if (!tab) tab = frame.cache.insert(key, build_kernel_table(K, T.rings(), S.rings()));
        if (tab)
            tab->apply_add(gv, approx);
        else
            approx = kernel_apply(K, T.rings(), S.rings(), gv);
    } else {
        approx = kernel_apply(K, T.points, S.points, gv);
    }
    std::vector<double> resid(T.size());
    for (size_t i = 0; i < T.size(); ++i) resid[i] = f.eval(T.points[i]) - approx[i];
    return norm_p(resid, T.weights, p);
}

namespace {

struct RankedKeys {
    // (score, level, index) sorted by descending score; ties by (level, index).
    std::vector<std::tuple<double, int, size_t>> order;
};

RankedKeys rank_by_term_norm(const NeedletFrame& frame, const CoefficientSet& c, double p) {
    RankedKeys r;
    r.order.reserve(c.total());
    for (int j = 0; j <= frame.J; ++j) {
        const NeedletGrid& g = frame.grid(j);
        auto norms = needlet_norms(frame, j, {p});
        bool per_ring = frame.ball.dim == 2 && g.product;
        int nt = per_ring ? g.product->n_theta : 1;
        for (size_t i = 0; i < g.size(); ++i) {
            double nn = per_ring ? norms[0][i / size_t(nt)] : norms[0][i];
            double score = std::sqrt(c.abs2(j, i)) * nn;
            if (score > 0.0) r.order.emplace_back(score, j, i);
        }
    }
    std::sort(r.order.begin(), r.order.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });
    return r;
}

} // namespace

GreedySelection greedy_nterm(const NeedletFrame& frame, const CoefficientSet& c, size_t n,
                             double p) {
    if (!frame.self_dual())
        throw config_error("greedy_nterm requires the self-dual frame (b = a)");
    auto ranked = rank_by_term_norm(frame, c, p);
    GreedySelection sel;
    sel.kept.frame_hash = c.frame_hash;
    sel.kept.aliasing_degree = c.aliasing_degree;
    sel.kept.re.resize(c.re.size());
    sel.kept.im.resize(c.re.size());
    for (size_t j = 0; j < c.re.size(); ++j) sel.kept.re[j].assign(c.re[j].size(), 0.0);
    size_t take = std::min(n, ranked.order.size());
    for (size_t i = 0; i < take; ++i) {
        auto [score, j, idx] = ranked.order[i];
        (void)score;
        sel.keys.emplace_back(j, idx);
        sel.kept.re[size_t(j)][idx] = c.re[size_t(j)][idx];
    }
    return sel;
}

namespace {

// Exact Gram entry <psi_xi, psi_eta> = lambda^{1/2} lambda'^{1/2} *
// (sum_nu b(nu/2^{j-1}) b(nu/2^{j'-1}) A_nu C_nu)(xi, eta); zero for |j-j'|>=2.
struct GramEvaluator {
    const NeedletFrame& frame;
    std::map<std::pair<int, int>, SpectralKernel> kernels;

    explicit GramEvaluator(const NeedletFrame& f) : frame(f) {}
    double operator()(int j1, size_t i1, int j2, size_t i2) {
        if (std::abs(j1 - j2) >= 2) return 0.0;
        auto key = std::minmax(j1, j2);
        auto it = kernels.find(key);
        if (it == kernels.end()) {
            it = kernels
                     .emplace(key, band_product_kernel(frame.kernels, key.first,
                                                       frame.kernels.pair.b_hat, key.second,
                                                       frame.kernels.pair.b_hat))
                     .first;
        }
        const NeedletGrid& g1 = frame.grid(j1);
        const NeedletGrid& g2 = frame.grid(j2);
        return std::sqrt(g1.weights[i1] * g2.weights[i2]) *
               it->second.eval(g1.points[i1], g2.points[i2]);
    }
};

} // namespace

std::vector<double> nterm_errors(const NeedletFrame& frame, const CoefficientSet& c,
                                 const FunctionHandle& f, const std::vector<size_t>& n_values,
                                 double p, double exact_l2sq, bool refit_p2) {
    if (!frame.self_dual())
        throw config_error("nterm_errors requires the self-dual frame (b = a)");
    auto ranked = rank_by_term_norm(frame, c, p);
    std::vector<double> out(n_values.size(), 0.0);
    if (p == 2.0) {
        double f2 = exact_l2sq;
        const ProductQuad& T = frame.norm_quad();
        if (f2 < 0.0) {
            std::vector<double> fv(T.size());
            for (size_t i = 0; i < T.size(); ++i) fv[i] = f.eval(T.points[i]);
            double nf = norm_p(fv, T.weights, 2.0);
            f2 = nf * nf;
        }
        GramEvaluator gram(frame);
        size_t kmax = 0;
        for (size_t n : n_values) kmax = std::max(kmax, n);
        kmax = std::min(kmax, ranked.order.size());
        std::vector<double> cv(kmax);
        std::vector<int> lv(kmax);
        std::vector<size_t> iv(kmax);
        for (size_t k = 0; k < kmax; ++k) {
            lv[k] = std::get<1>(ranked.order[k]);
            iv[k] = std::get<2>(ranked.order[k]);
            cv[k] = c.re[size_t(lv[k])][iv[k]];
        }
        // Incremental quadratic form Q(n) = sum_{a,b<n} c_a c_b <psi_a, psi_b>.
        Eigen::MatrixXd G;
        if (refit_p2) G = Eigen::MatrixXd::Zero(long(kmax), long(kmax));
        double S1 = 0.0, Q = 0.0;
        size_t done = 0;
        std::vector<double> row(kmax);
        std::vector<double> sig2_at(kmax + 1, f2);
        for (size_t k = 0; k < kmax; ++k) {
            double diag = 0.0;
            double cross = 0.0;
            for (size_t a = 0; a <= k; ++a) {
                double gv = gram(lv[k], iv[k], lv[a], iv[a]);
                if (refit_p2) {
                    G(long(k), long(a)) = gv;
                    G(long(a), long(k)) = gv;
                }
                if (a == k)
                    diag = gv;
                else
                    cross += cv[a] * gv;
            }
            S1 += cv[k] * cv[k];
            Q += cv[k] * cv[k] * diag + 2.0 * cv[k] * cross;
            sig2_at[k + 1] = f2 - 2.0 * S1 + Q;
            ++done;
        }
        (void)done;
        for (size_t m = 0; m < n_values.size(); ++m) {
            size_t n = std::min(n_values[m], kmax);
            double s2 = sig2_at[n];
            if (refit_p2 && n > 0) {
                // Least-squares coefficients on the selected set: sigma^2 = ||f||^2 - c^T a.
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(long(n));
                for (size_t a = 0; a < n; ++a) rhs(long(a)) = cv[a];
                Eigen::VectorXd sol = G.topLeftCorner(long(n), long(n)).ldlt().solve(rhs);
                s2 = f2 - rhs.dot(sol);
            }
            out[m] = std::sqrt(std::max(0.0, s2));
        }
        return out;
    }
    // General p: incremental residual on the norm grid.
    const ProductQuad& T = frame.norm_quad();
    std::vector<double> resid(T.size());
    for (size_t i = 0; i < T.size(); ++i) resid[i] = f.eval(T.points[i]);
    std::vector<size_t> order_idx(n_values.size());
    std::iota(order_idx.begin(), order_idx.end(), 0);
    std::sort(order_idx.begin(), order_idx.end(),
              [&](size_t a, size_t b) { return n_values[a] < n_values[b]; });
    size_t placed = 0;
    for (size_t oi : order_idx) {
        size_t n = std::min(n_values[oi], ranked.order.size());
        for (; placed < n; ++placed) {
            auto [score, j, idx] = ranked.order[placed];
            (void)score;
            const NeedletGrid& g = frame.grid(j);
            SpectralKernel K = band_kernel(frame.kernels, j, frame.kernels.pair.b_hat);
            double amp = c.re[size_t(j)][idx] * std::sqrt(g.weights[idx]);
            const BallPoint& xi = g.points[idx];
            double sxi = xi.height();
            for (size_t i = 0; i < T.size(); ++i)
                resid[i] -= amp * K.eval_geo(dot(T.points[i], xi), T.points[i].height(), sxi);
        }
        out[oi] = norm_p(resid, T.weights, p);
    }
    return out;
}

JacksonReport jackson_diagnostic(const NeedletFrame& frame, const FunctionHandle& f, double s,
                                 double p, const std::vector<size_t>& n_values,
                                 double exact_l2sq) {
    JacksonReport rep;
    rep.n_values = n_values;
    rep.tau = 1.0 / (s / frame.ball.dim + 1.0 / p);
    CoefficientSet c = analyze(frame, f);
    rep.sigma = nterm_errors(frame, c, f, n_values, p, exact_l2sq, false);
    SpaceParams prm;
    prm.s = s;
    prm.rho = s;
    prm.p = rep.tau;
    prm.q = rep.tau;
    prm.family = SpaceFamily::B;
    rep.btau = b_norm_sequence(frame, c, prm);
    rep.jackson_ratio.resize(n_values.size());
    for (size_t i = 0; i < n_values.size(); ++i)
        rep.jackson_ratio[i] = rep.sigma[i] * std::pow(double(n_values[i]), s) / rep.btau;
    // Log-log least-squares slope over the positive entries.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (size_t i = 0; i < n_values.size(); ++i) {
        if (rep.sigma[i] <= 0.0) continue;
        double X = std::log(double(n_values[i])), Y = std::log(rep.sigma[i]);
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
        ++m;
    }
    rep.slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx) : 0.0;
    return rep;
}

} // namespace nb
