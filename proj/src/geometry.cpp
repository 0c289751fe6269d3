#include "needleball/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace nb {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp1(double t) { return std::min(1.0, std::max(-1.0, t)); }

// log Gamma via std::lgamma (sign irrelevant: all arguments positive here).
double lg(double x) { return std::lgamma(x); }

} // namespace

WeightedBall::WeightedBall(int d, double mu_) : dim(d), mu(mu_) {
    if (d < 1 || d > 3) throw config_error("dimension must be 1, 2, or 3");
    if (mu < 0.0) throw config_error("mu must be >= 0");
    lambda = mu + (d - 1) / 2.0;
    // (b_d^mu)^{-1} = pi^{d/2} Gamma(mu+1/2) / Gamma(mu + d/2 + 1/2)
    double inv_bd = std::pow(kPi, d / 2.0) * std::exp(lg(mu + 0.5) - lg(mu + d / 2.0 + 0.5));
    b_d_mu = 1.0 / inv_bd;
    // (b_1^{mu-1/2})^{-1} = int_{-1}^1 (1-u^2)^{mu-1} du = sqrt(pi) Gamma(mu) / Gamma(mu+1/2)
    // Only meaningful for mu > 0 (diverges at mu = 0); left 0 in that case.
    b_1_half = mu > 0.0 ? 1.0 / (std::sqrt(kPi) * std::exp(lg(mu) - lg(mu + 0.5))) : 0.0;
}

double ball_distance(const BallPoint& x, const BallPoint& y) {
    // arccos(<x,y> + h_x h_y) evaluated through the hemisphere chord
    // 2 asin(|X - Y|/2), X = (x, h_x): same value, exact at coincident points
    // and stable near the diagonal where the arccos argument rounds to 1.
    double c2 = x.height() - y.height();
    double chord2 = c2 * c2;
    for (int i = 0; i < x.dim; ++i) {
        double d = x[i] - y[i];
        chord2 += d * d;
    }
    return 2.0 * std::asin(clamp1(0.5 * std::sqrt(chord2)));
}

double weight_w(const WeightedBall& ball, const BallPoint& x) {
    double h2 = std::max(0.0, 1.0 - x.norm2());
    double e = ball.mu - 0.5;
    if (h2 == 0.0 && e < 0.0)
        throw numerical_error("divergent-weight: w_mu at |x|=1 with mu < 1/2");
    return std::pow(h2, e);
}

double weight_W_radial(const WeightedBall& ball, int n, double height) {
    return std::pow(height + 1.0 / n, 2.0 * ball.mu);
}

double weight_W(const WeightedBall& ball, int n, const BallPoint& x) {
    return weight_W_radial(ball, n, x.height());
}

bool norm_dist_bound_check(const BallPoint& x, const BallPoint& y) {
    return std::abs(x.height() - y.height()) <= std::sqrt(2.0) * ball_distance(x, y) + 1e-14;
}

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, double abs_floor) {
    if (!(b > a)) return 0.0;
    // Composite start: split into 16 panels so narrow features are not missed,
    // then refine each panel adaptively.
    const int n0 = 16;
    double h = (b - a) / n0;
    // First pass for the magnitude scale.
    double scale = 0.0;
    std::vector<double> fs(2 * n0 + 1);
    for (int i = 0; i <= 2 * n0; ++i) {
        fs[size_t(i)] = f(a + 0.5 * h * i);
        scale += std::abs(fs[size_t(i)]);
    }
    scale = scale / (2 * n0 + 1) * (b - a);

    struct LocalState {
        const std::function<double(double)>& f;
        double rel_tol, abs_floor, scale, span;
        double adapt(double x0, double x1, double f0, double fm, double f1, double whole,
                     int depth) const {
            double m = 0.5 * (x0 + x1);
            double lm = 0.5 * (x0 + m), rm = 0.5 * (m + x1);
            double flm = f(lm), frm = f(rm);
            double left = simpson(f0, flm, fm, x0, m);
            double right = simpson(fm, frm, f1, m, x1);
            double err = left + right - whole;
            double tol = rel_tol * std::max(scale, abs_floor) * ((x1 - x0) / span);
            if (std::abs(err) <= 15.0 * tol || depth <= 0) {
                if (depth <= 0 && std::abs(err) > 1e6 * tol)
                    throw numerical_error("integration-failure: adaptive quadrature depth exhausted");
                return left + right + err / 15.0;
            }
            return adapt(x0, m, f0, flm, fm, left, depth - 1) +
                   adapt(m, x1, fm, frm, f1, right, depth - 1);
        }
    };
    LocalState st{f, rel_tol, abs_floor, std::max(scale, abs_floor), b - a};
    double total = 0.0;
    for (int i = 0; i < n0; ++i) {
        double x0 = a + h * i, x1 = a + h * (i + 1);
        double f0 = fs[size_t(2 * i)], fm = fs[size_t(2 * i + 1)], f1 = fs[size_t(2 * i + 2)];
        total += st.adapt(x0, x1, f0, fm, f1, simpson(f0, fm, f1, x0, x1), 28);
    }
    return total;
}

double interval_weight_measure(const WeightedBall& ball, double a, double b) {
    double pa = std::asin(clamp1(a)), pb = std::asin(clamp1(b));
    double mu = ball.mu;
    return integrate_adaptive([mu](double p) { return std::pow(std::cos(p), 2.0 * mu); }, pa, pb,
                              1e-10);
}

double ball_measure(const WeightedBall& ball, const BallPoint& center, double r) {
    if (!(r > 0.0) || r > kPi + 1e-12)
        throw config_error("ball_measure requires 0 < r <= pi");
    const double mu = ball.mu;
    if (ball.dim == 1) {
        // Hemisphere chart x = sin(phi), phi in [-pi/2, pi/2]; metric is |phi - phi'|,
        // and w_mu(x) dx = cos(phi)^{2 mu} dphi.
        double phic = std::asin(clamp1(center[0]));
        double lo = std::max(-kPi / 2.0, phic - r);
        double hi = std::min(kPi / 2.0, phic + r);
        return integrate_adaptive([&](double p) { return std::pow(std::cos(p), 2.0 * mu); },
                                  lo, hi, 1e-9);
    }
    if (ball.dim == 2) {
        // Chart (phi, theta), radius = sin(phi), phi in [0, pi/2]:
        // cos d = sin(phi) sin(phi') cos(dtheta) + cos(phi) cos(phi'),
        // w_mu r dr dtheta = cos(phi)^{2 mu} sin(phi) dphi dtheta.
        double rc = center.norm();
        double phic = std::asin(clamp1(rc));
        double cr = std::cos(r);
        auto theta_extent = [&](double phi) {
            double sp = std::sin(phi), cp = std::cos(phi);
            double spc = std::sin(phic), cpc = std::cos(phic);
            if (sp * spc < 1e-300) {
                // One of the points is the origin: distance is |phi - phic|.
                // (<= keeps the integrand continuous up to the domain endpoint.)
                return std::abs(phi - phic) <= r ? 2.0 * kPi : 0.0;
            }
            double cosdt = (cr - cp * cpc) / (sp * spc);
            if (cosdt <= -1.0) return 2.0 * kPi;
            if (cosdt >= 1.0) return 0.0;
            return 2.0 * std::acos(cosdt);
        };
        double lo = std::max(0.0, phic - r);
        double hi = std::min(kPi / 2.0, phic + r);
        if (!(hi > lo)) return 0.0;
        // The theta-extent has square-root kinks where the metric circle is
        // tangent to a latitude; split the domain there so each piece is smooth.
        std::vector<double> brk = {lo, hi};
        for (double b : {phic - r, phic + r, r - phic, kPi - phic - r})
            if (b > lo + 1e-15 && b < hi - 1e-15) brk.push_back(b);
        std::sort(brk.begin(), brk.end());
        double total = 0.0;
        for (size_t i = 0; i + 1 < brk.size(); ++i)
            total += integrate_adaptive(
                [&](double phi) {
                    return std::pow(std::cos(phi), 2.0 * mu) * std::sin(phi) * theta_extent(phi);
                },
                brk[i], brk[i + 1], 1e-9);
        return total;
    }
    throw config_error("ball_measure implemented for d in {1,2}");
}

namespace {

// int_0^{2pi} |cos t|^a |sin t|^b dt = 2 B((a+1)/2, (b+1)/2); signed version is 0
// unless both exponents are even, in which case it coincides with the |.| value.
double angular_abs(int a, int b) {
    return 2.0 * std::exp(lg((a + 1) / 2.0) + lg((b + 1) / 2.0) - lg((a + b) / 2.0 + 1.0));
}

} // namespace

double moment_abs_oracle(const WeightedBall& ball, const std::vector<int>& alpha) {
    int total = 0;
    for (int a : alpha) total += a;
    double mu = ball.mu;
    if (ball.dim == 1) {
        // int_{-1}^1 |x|^a (1-x^2)^{mu-1/2} dx = B((a+1)/2, mu+1/2)
        int a = alpha.at(0);
        return std::exp(lg((a + 1) / 2.0) + lg(mu + 0.5) - lg((a + 1) / 2.0 + mu + 0.5));
    }
    if (ball.dim == 2) {
        int a = alpha.at(0), b = alpha.size() > 1 ? alpha.at(1) : 0;
        double ang = angular_abs(a, b);
        // radial: int_0^1 r^{a+b+1} (1-r^2)^{mu-1/2} dr = (1/2) B((a+b)/2+1, mu+1/2)
        double rad =
            0.5 * std::exp(lg(total / 2.0 + 1.0) + lg(mu + 0.5) - lg(total / 2.0 + 1.0 + mu + 0.5));
        return ang * rad;
    }
    throw config_error("moment oracle implemented for d in {1,2}");
}

double moment_oracle(const WeightedBall& ball, const std::vector<int>& alpha) {
    for (int a : alpha)
        if (a % 2 != 0) return 0.0;
    return moment_abs_oracle(ball, alpha);
}

} // namespace nb
