#include "needleball/testfunctions.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "needleball/polybasis.hpp"

namespace nb {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::map<std::string, double> parse_params(const std::string& s) {
    std::map<std::string, double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw config_error("unknown-family: bad parameter '" + item + "'");
        out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

double get(const std::map<std::string, double>& m, const std::string& k, double dflt) {
    auto it = m.find(k);
    return it == m.end() ? dflt : it->second;
}

} // namespace

TestFunction random_bandlimited(const WeightedBall& ball, int degree, uint64_t seed) {
    auto basis = std::make_shared<ChebyshevBallBasis>(ball.dim, degree);
    std::mt19937_64 eng(seed);
    auto coef = std::make_shared<std::vector<double>>(basis->count);
    for (auto& c : *coef) c = 2.0 * (double(eng() >> 11) * 0x1p-53) - 1.0;
    TestFunction f;
    f.descriptor = "random_bandlimited:degree=" + std::to_string(degree) +
                   ",seed=" + std::to_string(seed);
    f.handle.poly_degree = degree;
    f.handle.radial = false;
    f.handle.eval = [basis, coef](const BallPoint& p) { return basis->combine(p, *coef); };
    return f;
}

TestFunction make_test_function(const WeightedBall& ball, const std::string& descriptor,
                                uint64_t default_seed) {
    std::string family = descriptor, params;
    auto colon = descriptor.find(':');
    if (colon != std::string::npos) {
        family = descriptor.substr(0, colon);
        params = descriptor.substr(colon + 1);
    }
    auto kv = parse_params(params);
    TestFunction f;
    f.descriptor = descriptor;
    if (family == "constant") {
        double c = get(kv, "value", 1.0);
        f.handle.eval = [c](const BallPoint&) { return c; };
        f.handle.poly_degree = 0;
        f.handle.radial = true;
        f.exact_l2sq = c * c / ball.b_d_mu;
        return f;
    }
    if (family == "coordinate") {
        int i = int(get(kv, "index", 0));
        if (i < 0 || i >= ball.dim) throw config_error("coordinate index out of range");
        f.handle.eval = [i](const BallPoint& p) { return p[i]; };
        f.handle.poly_degree = 1;
        // ||x_i||_2^2 = moment of x_i^2
        std::vector<int> alpha(size_t(ball.dim), 0);
        alpha[size_t(i)] = 2;
        f.exact_l2sq = moment_oracle(ball, alpha);
        return f;
    }
    if (family == "boundary_power") {
        double alpha = get(kv, "alpha", 1.0);
        if (alpha < 0.0) throw config_error("boundary_power needs alpha >= 0");
        f.handle.eval = [alpha](const BallPoint& p) {
            return std::pow(std::max(0.0, 1.0 - p.norm2()), alpha);
        };
        f.handle.radial = true;
        double ia;
        f.handle.poly_degree =
            (std::modf(alpha, &ia) == 0.0) ? int(2 * alpha) : -1;
        // ||f||_2^2 = int (1-|x|^2)^{2 alpha} w_mu = 1/b_d^{2 alpha + mu}
        double g = 2.0 * alpha + ball.mu;
        f.exact_l2sq = std::pow(kPi, ball.dim / 2.0) *
                       std::exp(std::lgamma(g + 0.5) - std::lgamma(g + ball.dim / 2.0 + 0.5));
        return f;
    }
    if (family == "gaussian_bump") {
        double cx = get(kv, "cx", 0.0), cy = get(kv, "cy", 0.0), w = get(kv, "width", 0.35);
        if (!(w > 0.0)) throw config_error("gaussian_bump needs width > 0");
        int dim = ball.dim;
        f.handle.eval = [cx, cy, w, dim](const BallPoint& p) {
            double d2 = (p[0] - cx) * (p[0] - cx);
            if (dim >= 2) d2 += (p[1] - cy) * (p[1] - cy);
            return std::exp(-d2 / (w * w));
        };
        f.handle.radial = (cx == 0.0 && cy == 0.0);
        return f;
    }
    if (family == "random_bandlimited") {
        int degree = int(get(kv, "degree", 8));
        uint64_t seed = uint64_t(get(kv, "seed", double(default_seed)));
        auto g = random_bandlimited(ball, degree, seed);
        g.descriptor = descriptor;
        return g;
    }
    throw config_error("unknown-family: " + family);
}

} // namespace nb
