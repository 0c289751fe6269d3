#include "needleball/cutoffs.hpp"

#include <algorithm>
#include <cmath>

namespace nb {

namespace {

double hexp(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double measure_floor(const std::function<double(double)>& f) {
    double lo = 3.0 / 5.0, hi = 5.0 / 3.0;
    double m = 1e300;
    const int n = 20000;
    for (int i = 0; i <= n; ++i) m = std::min(m, std::abs(f(lo + (hi - lo) * i / n)));
    return m;
}

} // namespace

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = hexp(t), b = hexp(1.0 - t);
    return a / (a + b);
}

double eval_cutoff(const Cutoff& c, double t) { return c.evaluator(t); }

Cutoff make_bump_cutoff(CutoffKind kind) {
    Cutoff c;
    c.kind = kind;
    if (kind == CutoffKind::type_a) {
        c.name = "bump-a";
        c.support_lo = 0.0;
        c.support_hi = 2.0;
        c.evaluator = [](double t) { return t < 0.0 ? 0.0 : 1.0 - smooth_step(t - 1.0); };
    } else {
        c.name = "bump-b";
        c.support_lo = 0.5;
        c.support_hi = 2.0;
        // s(2t-1) - s(t-1) >= 0 on [1/2,2]: s is nondecreasing and 2t-1 >= t-1.
        c.evaluator = [](double t) {
            if (t <= 0.5 || t >= 2.0) return 0.0;
            double v = smooth_step(2.0 * t - 1.0) - smooth_step(t - 1.0);
            return v > 0.0 ? std::sqrt(v) : 0.0;
        };
    }
    c.floor = measure_floor(c.evaluator);
    return c;
}

CutoffPair make_pair_self_dual() {
    CutoffPair p;
    p.a_hat = make_bump_cutoff(CutoffKind::type_b);
    p.b_hat = p.a_hat;
    p.name = "self-dual";
    p.self_dual = true;
    return p;
}

CutoffPair make_pair_plateau() {
    // Plateau profile: rises 0->1 on [1/2,3/5], 1 on [3/5,5/3], falls 1->0 on [5/3,2].
    auto a2 = [](double t) {
        if (t <= 0.5 || t >= 2.0) return 0.0;
        double up = smooth_step((t - 0.5) / 0.1);
        double down = 1.0 - smooth_step((t - 5.0 / 3.0) / (1.0 / 3.0));
        return up * down;
    };
    // On supp a2, D(t) = a2(t)^2 + a2(2t)^2 + a2(t/2)^2 >= 1: one of 2t, t/2 lands
    // on the plateau whenever t is off it.
    auto dsum = [a2](double t) {
        double x = a2(t), y = a2(2.0 * t), z = a2(t / 2.0);
        return x * x + y * y + z * z;
    };
    CutoffPair p;
    p.name = "pair:plateau";
    p.self_dual = false;
    p.a_hat.kind = CutoffKind::type_b;
    p.a_hat.name = "plateau-a";
    p.a_hat.support_lo = 0.5;
    p.a_hat.support_hi = 2.0;
    p.a_hat.evaluator = [a2](double t) { return a2(t); };
    p.a_hat.floor = measure_floor(p.a_hat.evaluator);
    p.b_hat.kind = CutoffKind::type_b;
    p.b_hat.name = "plateau-b";
    p.b_hat.support_lo = 0.5;
    p.b_hat.support_hi = 2.0;
    p.b_hat.evaluator = [a2, dsum](double t) {
        if (t <= 0.5 || t >= 2.0) return 0.0;
        return a2(t) / dsum(t);
    };
    p.b_hat.floor = measure_floor(p.b_hat.evaluator);
    return p;
}

CutoffPair make_pair_by_name(const std::string& name) {
    if (name == "self-dual") return make_pair_self_dual();
    if (name == "pair:plateau" || name == "plateau") return make_pair_plateau();
    throw config_error("unknown cutoff pair: " + name);
}

} // namespace nb
