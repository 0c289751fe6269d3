#include "needleball/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nb {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp1(double t) { return std::min(1.0, std::max(-1.0, t)); }

} // namespace

double SpectralKernel::eval_sum(double z) const {
    // Forward Gegenbauer recurrence, accumulating coef on the fly.
    int hi = degree();
    double acc = 0.0;
    double y0 = 1.0;
    if (lo == 0) acc += coef[0] * y0;
    if (hi == 0) return acc;
    double y1 = 2.0 * lambda * z;
    if (1 >= lo) acc += coef[size_t(1 - lo)] * y1;
    for (int k = 2; k <= hi; ++k) {
        double y2 = (2.0 * z * (k + lambda - 1.0) * y1 - (k + 2.0 * lambda - 2.0) * y0) / k;
        y0 = y1;
        y1 = y2;
        if (k >= lo) acc += coef[size_t(k - lo)] * y2;
    }
    return acc;
}

double SpectralKernel::eval_geo(double dotxy, double sx, double sy) const {
    double ss = sx * sy;
    double acc = 0.0;
    for (size_t k = 0; k < u_rule.nodes.size(); ++k)
        acc += u_rule.weights[k] * eval_sum(clamp1(dotxy + u_rule.nodes[k] * ss));
    return acc;
}

double SpectralKernel::eval(const BallPoint& x, const BallPoint& y) const {
    return eval_geo(dot(x, y), x.height(), y.height());
}

KernelConfig::KernelConfig(const WeightedBall& b, CutoffPair p) : ball(b), pair(std::move(p)) {
    ball.require_kernel_mu();
    window_a = make_bump_cutoff(CutoffKind::type_a);
}

const QuadratureRule& KernelConfig::u_rule_for_degree(int deg) const {
    int k = std::max(1, (deg + 2) / 2); // ceil((deg+1)/2)
    auto it = rules_.find(k);
    if (it == rules_.end()) it = rules_.emplace(k, gauss_jacobi_rule(ball.mu, k)).first;
    return it->second;
}

namespace {

double proj_amp(const WeightedBall& ball, int nu) {
    return ball.b_d_mu * ball.b_1_half * (nu + ball.lambda) / ball.lambda;
}

SpectralKernel make_kernel(const KernelConfig& cfg, int lo, int hi,
                           const std::function<double(int)>& weight) {
    SpectralKernel k;
    k.lambda = cfg.ball.lambda;
    k.lo = lo;
    k.coef.resize(size_t(hi - lo) + 1);
    for (int nu = lo; nu <= hi; ++nu)
        k.coef[size_t(nu - lo)] = weight(nu) * proj_amp(cfg.ball, nu);
    k.u_rule = cfg.u_rule_for_degree(hi);
    return k;
}

} // namespace

SpectralKernel projector_kernel(const KernelConfig& cfg, int n) {
    return make_kernel(cfg, n, n, [](int) { return 1.0; });
}

SpectralKernel smoothed_kernel(const KernelConfig& cfg, int n, const Cutoff& a) {
    return make_kernel(cfg, 0, 2 * n, [&](int nu) { return a(double(nu) / n); });
}

SpectralKernel smoothed_squared_kernel(const KernelConfig& cfg, int n, const Cutoff& a) {
    return make_kernel(cfg, 0, 2 * n, [&](int nu) {
        double v = a(double(nu) / n);
        return v * v;
    });
}

namespace {

// Band [2^{j-2}, 2^j] for j >= 1 where a(nu/2^{j-1}) can be nonzero.
std::pair<int, int> band_range(int j) {
    int hi = 1 << j;
    int lo = j >= 2 ? (1 << (j - 2)) : (j == 1 ? 1 : 0);
    return {lo, hi};
}

} // namespace

SpectralKernel band_kernel(const KernelConfig& cfg, int j, const Cutoff& a) {
    if (j == 0) return projector_kernel(cfg, 0);
    auto [lo, hi] = band_range(j);
    double scale = std::ldexp(1.0, 1 - j); // 1 / 2^{j-1}
    return make_kernel(cfg, lo, hi, [&](int nu) { return a(nu * scale); });
}

SpectralKernel band_product_kernel(const KernelConfig& cfg, int j, const Cutoff& a, int jp,
                                   const Cutoff& b) {
    if (j == 0 && jp == 0) return projector_kernel(cfg, 0);
    if (j == 0 || jp == 0) {
        // P_0 band meets a j >= 1 band only at nu = 0 where type (b) cutoffs vanish.
        SpectralKernel k;
        k.lambda = cfg.ball.lambda;
        k.lo = 0;
        k.coef = {0.0};
        k.u_rule = cfg.u_rule_for_degree(0);
        return k;
    }
    auto [lo1, hi1] = band_range(j);
    auto [lo2, hi2] = band_range(jp);
    int lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
    if (lo > hi) {
        SpectralKernel k;
        k.lambda = cfg.ball.lambda;
        k.lo = 0;
        k.coef = {0.0};
        k.u_rule = cfg.u_rule_for_degree(0);
        return k;
    }
    double sj = std::ldexp(1.0, 1 - j), sjp = std::ldexp(1.0, 1 - jp);
    return make_kernel(cfg, lo, hi, [&](int nu) { return a(nu * sj) * b(nu * sjp); });
}

double eval_Pn(const KernelConfig& cfg, int n, const BallPoint& x, const BallPoint& y) {
    return projector_kernel(cfg, n).eval(x, y);
}
double eval_Ln(const KernelConfig& cfg, int n, const BallPoint& x, const BallPoint& y) {
    return smoothed_kernel(cfg, n, cfg.pair.a_hat).eval(x, y);
}
double eval_Phi_j(const KernelConfig& cfg, int j, const BallPoint& x, const BallPoint& y) {
    return band_kernel(cfg, j, cfg.pair.a_hat).eval(x, y);
}
double eval_Psi_j(const KernelConfig& cfg, int j, const BallPoint& x, const BallPoint& y) {
    return band_kernel(cfg, j, cfg.pair.b_hat).eval(x, y);
}

BallPoint PolarPoints::point(size_t flat) const {
    size_t a = flat / size_t(n_theta), m = flat % size_t(n_theta);
    double th = 2.0 * kPi * double(m) / n_theta;
    return BallPoint(radii[a] * std::cos(th), radii[a] * std::sin(th));
}

ProductQuad build_product_quadrature(const WeightedBall& ball, int degree, int theta_multiple,
                                     int radial_nodes_min) {
    ProductQuad q;
    q.dim = ball.dim;
    q.exact_degree = degree;
    if (ball.dim == 1) {
        int k = (degree + 2) / 2;
        k = std::max(k, radial_nodes_min);
        if (k % 2 == 1) ++k; // even count keeps 0 out of the node set
        auto rule = gauss_jacobi_general(ball.mu - 0.5, ball.mu - 0.5, k);
        q.nodes1 = rule.nodes;
        q.weights1 = rule.weights;
        q.points.reserve(q.nodes1.size());
        for (double x : q.nodes1) q.points.emplace_back(x, 1);
        q.weights = q.weights1;
        return q;
    }
    if (ball.dim != 2) throw config_error("product quadrature implemented for d in {1,2}");
    // Radial factor: int_0^1 F(r) r (1-r^2)^{mu-1/2} dr, t = r^2 ->
    // (1/2) int_0^1 F(sqrt t) (1-t)^{mu-1/2} dt with a (mu-1/2, 0) Jacobi rule on [-1,1].
    int kr = std::max((degree + 2) / 2, std::max(1, radial_nodes_min));
    auto rule = gauss_jacobi_general(ball.mu - 0.5, 0.0, kr);
    double pow2 = std::pow(2.0, -(ball.mu + 0.5));
    q.radii.resize(rule.nodes.size());
    q.radial_w.resize(rule.nodes.size());
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        double t = 0.5 * (rule.nodes[i] + 1.0);
        q.radii[i] = std::sqrt(t);
        q.radial_w[i] = 0.5 * pow2 * rule.weights[i];
    }
    int nt = degree + 1;
    if (theta_multiple > 0) nt = theta_multiple * ((degree + theta_multiple) / theta_multiple);
    q.n_theta = std::max(nt, 1);
    q.points.reserve(q.radii.size() * size_t(q.n_theta));
    q.weights.reserve(q.points.capacity());
    for (size_t a = 0; a < q.radii.size(); ++a) {
        double wpt = q.radial_w[a] * 2.0 * kPi / q.n_theta;
        for (int m = 0; m < q.n_theta; ++m) {
            double th = 2.0 * kPi * m / q.n_theta;
            q.points.emplace_back(q.radii[a] * std::cos(th), q.radii[a] * std::sin(th));
            q.weights.push_back(wpt);
        }
    }
    return q;
}

namespace {

// Angular profile of K between rings of radii rt, rs at dtheta = 2 pi delta / L.
void angular_profile(const SpectralKernel& K, double rt, double rs, int L,
                     std::vector<double>& out) {
    out.resize(size_t(L));
    double st = std::sqrt(std::max(0.0, 1.0 - rt * rt));
    double ss = std::sqrt(std::max(0.0, 1.0 - rs * rs));
    double rr = rt * rs;
    for (int d = 0; d < L; ++d)
        out[size_t(d)] = K.eval_geo(rr * std::cos(2.0 * kPi * d / L), st, ss);
}

bool commensurate(int nt, int ns) { return nt % ns == 0 || ns % nt == 0; }

} // namespace

std::vector<double> kernel_apply(const SpectralKernel& K, const PolarPoints& T,
                                 const PolarPoints& S, const std::vector<double>& g) {
    const int Nt = T.n_theta, Ns = S.n_theta;
    std::vector<double> out(T.size(), 0.0);
    if (!commensurate(Nt, Ns)) {
        std::vector<BallPoint> tp(T.size()), sp(S.size());
        for (size_t i = 0; i < T.size(); ++i) tp[i] = T.point(i);
        for (size_t i = 0; i < S.size(); ++i) sp[i] = S.point(i);
        return kernel_apply(K, tp, sp, g);
    }
    const int L = std::max(Nt, Ns);
    const int ct = L / Nt, cs = L / Ns;
    std::vector<double> kv;
    for (size_t b = 0; b < S.radii.size(); ++b) {
        const double* gb = &g[b * size_t(Ns)];
        for (size_t a = 0; a < T.radii.size(); ++a) {
            angular_profile(K, T.radii[a], S.radii[b], L, kv);
            double* o = &out[a * size_t(Nt)];
            for (int m = 0; m < Nt; ++m) {
                long base = long(m) * ct;
                double acc = 0.0;
                for (int m2 = 0; m2 < Ns; ++m2) {
                    long d = (base - long(m2) * cs) % L;
                    if (d < 0) d += L;
                    acc += kv[size_t(d)] * gb[m2];
                }
                o[m] += acc;
            }
        }
    }
    return out;
}

std::vector<double> kernel_apply(const SpectralKernel& K, const std::vector<BallPoint>& targets,
                                 const std::vector<BallPoint>& source,
                                 const std::vector<double>& g) {
    std::vector<double> out(targets.size(), 0.0);
    std::vector<double> sh(source.size());
    for (size_t i = 0; i < source.size(); ++i) sh[i] = source[i].height();
    for (size_t t = 0; t < targets.size(); ++t) {
        double acc = 0.0;
        double sx = targets[t].height();
        for (size_t i = 0; i < source.size(); ++i)
            if (g[i] != 0.0) acc += g[i] * K.eval_geo(dot(targets[t], source[i]), sx, sh[i]);
        out[t] = acc;
    }
    return out;
}

std::vector<double> kernel_matrix(const SpectralKernel& K, const PolarPoints& T,
                                  const PolarPoints& S) {
    const int Nt = T.n_theta, Ns = S.n_theta;
    std::vector<double> M(T.size() * S.size());
    if (commensurate(Nt, Ns)) {
        const int L = std::max(Nt, Ns);
        const int ct = L / Nt, cs = L / Ns;
        std::vector<double> kv;
        for (size_t a = 0; a < T.radii.size(); ++a)
            for (size_t b = 0; b < S.radii.size(); ++b) {
                angular_profile(K, T.radii[a], S.radii[b], L, kv);
                for (int m = 0; m < Nt; ++m) {
                    double* row = &M[(a * size_t(Nt) + size_t(m)) * S.size() + b * size_t(Ns)];
                    long base = long(m) * ct;
                    for (int m2 = 0; m2 < Ns; ++m2) {
                        long d = (base - long(m2) * cs) % L;
                        if (d < 0) d += L;
                        row[m2] = kv[size_t(d)];
                    }
                }
            }
        return M;
    }
    // Non-commensurate: evaluate per angular offset pair, sharing profiles over
    // the distinct cos(dtheta) values per ring pair.
    for (size_t a = 0; a < T.radii.size(); ++a) {
        double rt = T.radii[a];
        double st = std::sqrt(std::max(0.0, 1.0 - rt * rt));
        for (size_t b = 0; b < S.radii.size(); ++b) {
            double rs = S.radii[b];
            double ss = std::sqrt(std::max(0.0, 1.0 - rs * rs));
            // Distinct dtheta values: m/Nt - m2/Ns = (m Ns - m2 Nt)/(Nt Ns); cache by
            // residue of (m Ns - m2 Nt) mod (Nt Ns) exploiting cos symmetry.
            long LL = long(Nt) * Ns;
            std::vector<double> cache(size_t(LL / 2 + 1), std::numeric_limits<double>::quiet_NaN());
            for (int m = 0; m < Nt; ++m) {
                double* row = &M[(a * size_t(Nt) + size_t(m)) * S.size() + b * size_t(Ns)];
                for (int m2 = 0; m2 < Ns; ++m2) {
                    long d = (long(m) * Ns - long(m2) * Nt) % LL;
                    if (d < 0) d += LL;
                    if (d > LL / 2) d = LL - d;
                    double& slot = cache[size_t(d)];
                    if (std::isnan(slot))
                        slot = K.eval_geo(rt * rs * std::cos(2.0 * kPi * double(d) / double(LL)), st, ss);
                    row[m2] = slot;
                }
            }
        }
    }
    return M;
}

std::vector<double> kernel_matrix(const SpectralKernel& K, const std::vector<BallPoint>& T,
                                  const std::vector<BallPoint>& S) {
    std::vector<double> M(T.size() * S.size());
    for (size_t t = 0; t < T.size(); ++t) {
        double sx = T[t].height();
        for (size_t i = 0; i < S.size(); ++i)
            M[t * S.size() + i] = K.eval_geo(dot(T[t], S[i]), sx, S[i].height());
    }
    return M;
}

double KernelTable::entry(size_t t, size_t s) const {
    if (!circulant) return data[t * cols() + s];
    size_t a = t / size_t(nt), m = t % size_t(nt);
    size_t b = s / size_t(ns), m2 = s % size_t(ns);
    long d = (long(m) * ct - long(m2) * cs) % L;
    if (d < 0) d += L;
    return data[(a * ts + b) * size_t(L) + size_t(d)];
}

void KernelTable::apply_add(const std::vector<double>& g, std::vector<double>& out) const {
    if (!circulant) {
        for (size_t t = 0; t < rows(); ++t) {
            const double* row = &data[t * cols()];
            double acc = 0.0;
            for (size_t s = 0; s < cols(); ++s) acc += row[s] * g[s];
            out[t] += acc;
        }
        return;
    }
    for (size_t a = 0; a < tr; ++a)
        for (size_t b = 0; b < ts; ++b) {
            const double* kv = &data[(a * ts + b) * size_t(L)];
            const double* gb = &g[b * size_t(ns)];
            double* o = &out[a * size_t(nt)];
            for (int m = 0; m < nt; ++m) {
                long base = long(m) * ct;
                double acc = 0.0;
                for (int m2 = 0; m2 < ns; ++m2) {
                    long d = (base - long(m2) * cs) % L;
                    if (d < 0) d += L;
                    acc += kv[size_t(d)] * gb[m2];
                }
                o[size_t(m)] += acc;
            }
        }
}

KernelTable build_kernel_table(const SpectralKernel& K, const PolarPoints& T,
                               const PolarPoints& S) {
    KernelTable tab;
    tab.tr = T.radii.size();
    tab.ts = S.radii.size();
    tab.nt = T.n_theta;
    tab.ns = S.n_theta;
    if (commensurate(T.n_theta, S.n_theta)) {
        tab.circulant = true;
        tab.L = std::max(T.n_theta, S.n_theta);
        tab.ct = tab.L / T.n_theta;
        tab.cs = tab.L / S.n_theta;
        tab.data.resize(tab.tr * tab.ts * size_t(tab.L));
        std::vector<double> kv;
        for (size_t a = 0; a < tab.tr; ++a)
            for (size_t b = 0; b < tab.ts; ++b) {
                angular_profile(K, T.radii[a], S.radii[b], tab.L, kv);
                std::copy(kv.begin(), kv.end(), tab.data.begin() + long((a * tab.ts + b) * size_t(tab.L)));
            }
        return tab;
    }
    tab.circulant = false;
    tab.data = kernel_matrix(K, T, S);
    return tab;
}

std::vector<double> convolve_grid(const SpectralKernel& K, const PolarPoints& T,
                                  const ProductQuad& S, const std::vector<double>& f) {
    if (S.dim != 2) {
        std::vector<BallPoint> tp(T.size());
        for (size_t i = 0; i < T.size(); ++i) tp[i] = T.point(i);
        return convolve_points(K, tp, S, f);
    }
    std::vector<double> g(S.size());
    for (size_t i = 0; i < S.size(); ++i) g[i] = S.weights[i] * f[i];
    return kernel_apply(K, T, S.rings(), g);
}

std::vector<double> convolve_points(const SpectralKernel& K, const std::vector<BallPoint>& targets,
                                    const ProductQuad& S, const std::vector<double>& f) {
    std::vector<double> g(S.size());
    for (size_t i = 0; i < S.size(); ++i) g[i] = S.weights[i] * f[i];
    return kernel_apply(K, targets, S.points, g);
}

std::vector<std::vector<double>> kernel_column_norms(const SpectralKernel& K,
                                                     const ProductQuad& quad,
                                                     const PolarPoints& source,
                                                     const std::vector<double>& ps) {
    std::vector<std::vector<double>> out(ps.size(),
                                         std::vector<double>(source.radii.size(), 0.0));
    if (quad.dim != 2) {
        for (size_t b = 0; b < source.radii.size(); ++b) {
            BallPoint s(source.radii[b], 1);
            std::vector<double> col(quad.points.size());
            for (size_t i = 0; i < quad.points.size(); ++i) col[i] = K.eval(quad.points[i], s);
            for (size_t ip = 0; ip < ps.size(); ++ip)
                out[ip][b] = norm_p(col, quad.weights, ps[ip]);
        }
        return out;
    }
    if (quad.n_theta % source.n_theta != 0)
        throw config_error("kernel_column_norms requires commensurate angular grids");
    const int L = quad.n_theta;
    std::vector<double> kv;
    for (size_t b = 0; b < source.radii.size(); ++b) {
        std::vector<double> acc(ps.size(), 0.0);
        for (size_t a = 0; a < quad.radii.size(); ++a) {
            angular_profile(K, quad.radii[a], source.radii[b], L, kv);
            double w = quad.radial_w[a] * 2.0 * kPi / L;
            for (size_t ip = 0; ip < ps.size(); ++ip) {
                double p = ps[ip];
                if (std::isinf(p)) {
                    for (double v : kv) acc[ip] = std::max(acc[ip], std::abs(v));
                } else {
                    double s = 0.0;
                    for (double v : kv) s += std::pow(std::abs(v), p);
                    acc[ip] += w * s;
                }
            }
        }
        for (size_t ip = 0; ip < ps.size(); ++ip)
            out[ip][b] = std::isinf(ps[ip]) ? acc[ip] : std::pow(acc[ip], 1.0 / ps[ip]);
    }
    return out;
}

double norm_p(const std::vector<double>& values, const std::vector<double>& weights, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (size_t i = 0; i < values.size(); ++i) s += weights[i] * std::pow(std::abs(values[i]), p);
    return std::pow(s, 1.0 / p);
}

double localization_constant(const KernelConfig& cfg, int n, double k,
                             const std::vector<std::pair<BallPoint, BallPoint>>& pairs) {
    auto L = smoothed_kernel(cfg, n, cfg.pair.a_hat);
    double nd = std::pow(double(n), cfg.ball.dim);
    double c = 0.0;
    for (const auto& [x, y] : pairs) {
        double v = std::abs(L.eval(x, y));
        double w = std::sqrt(weight_W(cfg.ball, n, x) * weight_W(cfg.ball, n, y));
        // Kernel values below the roundoff floor relative to the local peak
        // scale n^d / sqrt(W W) say nothing about decay; skip them.
        if (v < 1e-11 * nd / w) continue;
        double pen = std::pow(1.0 + n * ball_distance(x, y), k);
        c = std::max(c, v * pen * w / nd);
    }
    return c;
}

double lipschitz_constant(const KernelConfig& cfg, int n, double k,
                          const std::vector<std::pair<BallPoint, BallPoint>>& near_pairs,
                          const std::vector<BallPoint>& probe_ys) {
    auto L = smoothed_kernel(cfg, n, cfg.pair.a_hat);
    double scale = std::pow(double(n), cfg.ball.dim + 1);
    double c = 0.0;
    for (const auto& [x, xi] : near_pairs) {
        double dxxi = ball_distance(x, xi);
        if (dxxi <= 0.0) continue;
        for (const auto& y : probe_ys) {
            double lhs = std::abs(L.eval(x, y) - L.eval(xi, y));
            double w = std::sqrt(weight_W(cfg.ball, n, y) * weight_W(cfg.ball, n, xi));
            // Differences at the roundoff floor of the evaluation carry no
            // information about the Lip-1 constant.
            if (lhs < 1e-11 * std::pow(double(n), cfg.ball.dim) / w) continue;
            double pen = std::pow(1.0 + n * ball_distance(y, xi), k);
            c = std::max(c, lhs * w * pen / (scale * dxxi));
        }
    }
    return c;
}

NikolskiiRatios nikolskii_check(const KernelConfig& cfg, int n,
                                const std::function<double(const BallPoint&)>& g, double p,
                                double q, double gamma, const ProductQuad& quad) {
    if (q > p) throw config_error("nikolskii_check requires q <= p");
    std::vector<double> gv(quad.size()), gw(quad.size()), gwq(quad.size());
    for (size_t i = 0; i < quad.size(); ++i) {
        gv[i] = g(quad.points[i]);
        double W = weight_W(cfg.ball, n, quad.points[i]);
        gw[i] = std::pow(W, gamma) * gv[i];
        gwq[i] = std::pow(W, gamma + 1.0 / p - 1.0 / q) * gv[i];
    }
    double d = cfg.ball.dim, mu = cfg.ball.mu;
    NikolskiiRatios r;
    double denom = std::pow(double(n), (d + 2.0 * mu) * (1.0 / q - 1.0 / p)) *
                   norm_p(gv, quad.weights, q);
    r.plain = norm_p(gv, quad.weights, p) / denom;
    double denom2 =
        std::pow(double(n), d * (1.0 / q - 1.0 / p)) * norm_p(gwq, quad.weights, q);
    r.weighted = norm_p(gw, quad.weights, p) / denom2;
    return r;
}

} // namespace nb
