#include "needleball/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "needleball/approx.hpp"

namespace nb {

namespace {

constexpr double kPi = 3.14159265358979323846;

double lq_combine(const std::vector<double>& terms, double q) {
    if (std::isinf(q)) {
        double m = 0.0;
        for (double t : terms) m = std::max(m, t);
        return m;
    }
    double s = 0.0;
    for (double t : terms) s += std::pow(t, q);
    return std::pow(s, 1.0 / q);
}

std::string quad_id(const ProductQuad& q) {
    return std::to_string(q.exact_degree) + "." + std::to_string(q.n_theta) + "." +
           std::to_string(q.radii.size());
}

} // namespace

std::vector<std::vector<double>> band_convolutions(const NeedletFrame& frame,
                                                   const FunctionHandle& f,
                                                   const CutoffPair* pair) {
    const CutoffPair& P = pair ? *pair : frame.kernels.pair;
    const ProductQuad& T = frame.norm_quad();
    std::vector<std::vector<double>> out(size_t(frame.J) + 1);
    for (int j = 0; j <= frame.J; ++j) {
        int deg = f.poly_degree >= 0 ? (1 << j) + f.poly_degree : frame.analysis_degree;
        int rmin = f.poly_degree >= 0 ? 0 : frame.config.analysis_radial_boost;
        const ProductQuad& S = frame.quadrature(deg, frame.ball.dim == 2 ? T.n_theta : 0, rmin);
        std::vector<double> gv(S.size());
        for (size_t i = 0; i < S.size(); ++i) gv[i] = S.weights[i] * f.eval(S.points[i]);
        SpectralKernel K = band_kernel(frame.kernels, j, P.a_hat);
        std::vector<double> conv(T.size(), 0.0);
        if (frame.ball.dim == 2) {
            std::string key = "bc:" + P.name + ":" + std::to_string(j) + ":" + quad_id(S) + ">" +
                              quad_id(T);
            const KernelTable* tab = frame.cache.find(key);
            if (!tab) tab = frame.cache.insert(key, build_kernel_table(K, T.rings(), S.rings()));
            if (tab)
                tab->apply_add(gv, conv);
            else
                conv = kernel_apply(K, T.rings(), S.rings(), gv);
        } else {
            conv = kernel_apply(K, T.points, S.points, gv);
        }
        out[size_t(j)] = std::move(conv);
    }
    return out;
}

double f_norm_from_bands(const NeedletFrame& frame, const BandValues& conv,
                         const SpaceParams& prm) {
    if (std::isinf(prm.p)) throw config_error("F-norms require p < inf");
    const ProductQuad& T = frame.norm_quad();
    std::vector<double> inner(T.size());
    std::vector<double> terms(size_t(frame.J) + 1);
    for (size_t i = 0; i < T.size(); ++i) {
        for (int j = 0; j <= frame.J; ++j) {
            double W = weight_W(frame.ball, 1 << j, T.points[i]);
            terms[size_t(j)] = std::pow(2.0, prm.s * j) *
                               std::pow(W, -prm.rho / frame.ball.dim) *
                               std::abs(conv[size_t(j)][i]);
        }
        inner[i] = lq_combine(terms, prm.q);
    }
    return norm_p(inner, T.weights, prm.p);
}

double b_norm_from_bands(const NeedletFrame& frame, const BandValues& conv,
                         const SpaceParams& prm) {
    const ProductQuad& T = frame.norm_quad();
    std::vector<double> terms(size_t(frame.J) + 1);
    std::vector<double> level(T.size());
    for (int j = 0; j <= frame.J; ++j) {
        for (size_t i = 0; i < T.size(); ++i) {
            double W = weight_W(frame.ball, 1 << j, T.points[i]);
            level[i] = std::pow(W, -prm.rho / frame.ball.dim) * conv[size_t(j)][i];
        }
        terms[size_t(j)] = std::pow(2.0, prm.s * j) * norm_p(level, T.weights, prm.p);
    }
    return lq_combine(terms, prm.q);
}

double f_norm_kernel(const NeedletFrame& frame, const FunctionHandle& f, const SpaceParams& prm,
                     const CutoffPair* pair) {
    return f_norm_from_bands(frame, band_convolutions(frame, f, pair), prm);
}

double b_norm_kernel(const NeedletFrame& frame, const FunctionHandle& f, const SpaceParams& prm,
                     const CutoffPair* pair) {
    return b_norm_from_bands(frame, band_convolutions(frame, f, pair), prm);
}

namespace {

// Common refinement machinery for the exact sequence F-norm.
struct Refinement {
    // d=1: intervals; d=2: radial intervals x angular intervals.
    std::vector<double> rad;   // sorted breakpoints (d=1: x; d=2: r)
    std::vector<double> ang;   // d=2 only, sorted in [0, 2pi)
};

double norm_angle(double t) {
    t = std::fmod(t, 2.0 * kPi);
    return t < 0.0 ? t + 2.0 * kPi : t;
}

Refinement build_refinement(const NeedletFrame& frame) {
    Refinement R;
    std::set<double> rs, as;
    for (int j = 0; j <= frame.J; ++j) {
        for (const auto& c : frame.grid(j).cells) {
            rs.insert(c.x0);
            rs.insert(c.x1);
            if (frame.ball.dim == 2) {
                as.insert(norm_angle(c.theta0));
                as.insert(norm_angle(c.theta1));
            }
        }
    }
    R.rad.assign(rs.begin(), rs.end());
    R.ang.assign(as.begin(), as.end());
    return R;
}

} // namespace

SequenceNormContext build_sequence_norm_context(const NeedletFrame& frame) {
    SequenceNormContext ctx;
    const double mu = frame.ball.mu;
    ctx.W.resize(size_t(frame.J) + 1);
    ctx.inv_sqrt_m.resize(size_t(frame.J) + 1);
    for (int j = 0; j <= frame.J; ++j) {
        const NeedletGrid& g = frame.grid(j);
        ctx.W[size_t(j)].resize(g.size());
        ctx.inv_sqrt_m[size_t(j)].resize(g.size());
        for (size_t i = 0; i < g.size(); ++i) {
            ctx.W[size_t(j)][i] = weight_W(frame.ball, 1 << j, g.points[i]);
            ctx.inv_sqrt_m[size_t(j)][i] = 1.0 / std::sqrt(g.cell_measures[i]);
        }
    }
    Refinement R = build_refinement(frame);
    auto add_cell = [&](double measure, const BallPoint& probe) {
        SequenceNormContext::Cell cell;
        cell.measure = measure;
        cell.index.resize(size_t(frame.J) + 1);
        for (int j = 0; j <= frame.J; ++j) cell.index[size_t(j)] = locate_cell(frame.grid(j), probe);
        ctx.cells.push_back(std::move(cell));
    };
    if (frame.ball.dim == 1) {
        for (size_t i = 0; i + 1 < R.rad.size(); ++i) {
            double a = R.rad[i], b = R.rad[i + 1];
            if (!(b > a)) continue;
            add_cell(interval_weight_measure(frame.ball, a, b), BallPoint(0.5 * (a + b), 1));
        }
        return ctx;
    }
    for (size_t i = 0; i + 1 < R.rad.size(); ++i) {
        double r0 = R.rad[i], r1 = R.rad[i + 1];
        if (!(r1 > r0)) continue;
        double t0 = r0 * r0, t1 = r1 * r1;
        double radm = 0.5 * (std::pow(1.0 - t0, mu + 0.5) - std::pow(1.0 - t1, mu + 0.5)) / (mu + 0.5);
        double rm = 0.5 * (r0 + r1);
        size_t na = R.ang.size();
        for (size_t k = 0; k < na; ++k) {
            double a0 = R.ang[k];
            double a1 = k + 1 < na ? R.ang[k + 1] : R.ang[0] + 2.0 * kPi;
            if (!(a1 > a0)) continue;
            double am = 0.5 * (a0 + a1);
            add_cell(radm * (a1 - a0), BallPoint(rm * std::cos(am), rm * std::sin(am)));
        }
    }
    return ctx;
}

double f_norm_sequence(const NeedletFrame& frame, const CoefficientSet& c, const SpaceParams& prm,
                       const SequenceNormContext* ctx_in) {
    if (std::isinf(prm.p)) throw config_error("F-norms require p < inf");
    const double d = frame.ball.dim;
    SequenceNormContext local;
    const SequenceNormContext* ctx = ctx_in;
    if (!ctx) {
        local = build_sequence_norm_context(frame);
        ctx = &local;
    }
    std::vector<double> pow2sj(size_t(frame.J) + 1);
    for (int j = 0; j <= frame.J; ++j) pow2sj[size_t(j)] = std::pow(2.0, prm.s * j);
    std::vector<double> terms(size_t(frame.J) + 1);
    double acc = 0.0;
    for (const auto& cell : ctx->cells) {
        for (int j = 0; j <= frame.J; ++j) {
            size_t idx = cell.index[size_t(j)];
            double h = std::sqrt(c.abs2(j, idx));
            terms[size_t(j)] = pow2sj[size_t(j)] * h *
                               std::pow(ctx->W[size_t(j)][idx], -prm.rho / d) *
                               ctx->inv_sqrt_m[size_t(j)][idx];
        }
        acc += cell.measure * std::pow(lq_combine(terms, prm.q), prm.p);
    }
    return std::pow(acc, 1.0 / prm.p);
}

double b_norm_sequence(const NeedletFrame& frame, const CoefficientSet& c, const SpaceParams& prm) {
    const double d = frame.ball.dim;
    std::vector<double> terms(size_t(frame.J) + 1);
    for (int j = 0; j <= frame.J; ++j) {
        const NeedletGrid& g = frame.grid(j);
        double wexp = -prm.rho / d + 1.0 / prm.p - 0.5;
        double inner;
        if (std::isinf(prm.p)) {
            inner = 0.0;
            for (size_t i = 0; i < g.size(); ++i) {
                double W = weight_W(frame.ball, 1 << j, g.points[i]);
                inner = std::max(inner, std::pow(W, -prm.rho / d - 0.5) * std::sqrt(c.abs2(j, i)));
            }
            terms[size_t(j)] = std::pow(2.0, (prm.s + d / 2.0) * j) * inner;
        } else {
            inner = 0.0;
            for (size_t i = 0; i < g.size(); ++i) {
                double W = weight_W(frame.ball, 1 << j, g.points[i]);
                inner += std::pow(std::pow(W, wexp) * std::sqrt(c.abs2(j, i)), prm.p);
            }
            terms[size_t(j)] = std::pow(2.0, (prm.s - d / prm.p + d / 2.0) * j) *
                               std::pow(inner, 1.0 / prm.p);
        }
    }
    return lq_combine(terms, prm.q);
}

double besov_via_best_approx(const NeedletFrame& frame, const FunctionHandle& f, double s, double p,
                             double q) {
    const ProductQuad& T = frame.norm_quad();
    std::vector<double> fv(T.size());
    for (size_t i = 0; i < T.size(); ++i) fv[i] = f.eval(T.points[i]);
    double base = norm_p(fv, T.weights, p);
    std::vector<double> terms(size_t(frame.J) + 1);
    for (int j = 0; j <= frame.J; ++j)
        terms[size_t(j)] = std::pow(2.0, s * j) * best_poly_error(frame, f, 1 << j, p);
    return base + lq_combine(terms, q);
}

double maximal_function(const WeightedBall& ball, const std::vector<double>& f_on_quad,
                        const ProductQuad& quad, double t, const BallPoint& x,
                        const std::vector<BallPoint>& centers, const std::vector<double>& radii) {
    if (!(t > 0.0)) throw config_error("maximal_function requires t > 0");
    double best = 0.0;
    for (const auto& c : centers) {
        double dcx = ball_distance(c, x);
        for (double r : radii) {
            if (dcx >= r) continue; // ball must contain x
            double mass = 0.0, num = 0.0;
            for (size_t i = 0; i < quad.size(); ++i) {
                if (ball_distance(c, quad.points[i]) < r) {
                    mass += quad.weights[i];
                    num += quad.weights[i] * std::pow(std::abs(f_on_quad[i]), t);
                }
            }
            if (mass > 0.0) best = std::max(best, std::pow(num / mass, 1.0 / t));
        }
    }
    (void)ball;
    return best;
}

} // namespace nb
