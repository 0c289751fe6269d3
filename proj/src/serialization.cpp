#include "needleball/serialization.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace nb {

std::string hex_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double parse_hex_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw config_error("bad hex-float literal: " + s);
    return v;
}

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string canonical_dump(const ojson& j) { return j.dump(); }

namespace {

ojson reals_to_json(const std::vector<double>& v) {
    ojson a = ojson::array();
    for (double x : v) a.push_back(hex_double(x));
    return a;
}

std::vector<double> reals_from_json(const ojson& a) {
    std::vector<double> v;
    v.reserve(a.size());
    for (const auto& x : a) v.push_back(parse_hex_double(x.get<std::string>()));
    return v;
}

} // namespace

ojson grid_to_json(const NeedletGrid& g) {
    ojson j;
    j["level"] = g.level;
    j["strategy"] = to_string(g.strategy);
    ojson pts = ojson::array();
    for (const auto& p : g.points) {
        ojson c = ojson::array();
        for (int i = 0; i < g.dim; ++i) c.push_back(hex_double(p[i]));
        pts.push_back(std::move(c));
    }
    j["points"] = std::move(pts);
    j["weights"] = reals_to_json(g.weights);
    ojson cells = ojson::array();
    for (const auto& c : g.cells) {
        ojson e = ojson::array();
        e.push_back(hex_double(c.x0));
        e.push_back(hex_double(c.x1));
        if (g.dim == 2) {
            e.push_back(hex_double(c.theta0));
            e.push_back(hex_double(c.theta1));
        }
        cells.push_back(std::move(e));
    }
    j["cells"] = std::move(cells);
    j["cell_measures"] = reals_to_json(g.cell_measures);
    if (g.product) {
        ojson p;
        p["radii"] = reals_to_json(g.product->radii);
        p["radial_w"] = reals_to_json(g.product->radial_w);
        p["n_theta"] = g.product->n_theta;
        p["exact_degree"] = g.product->exact_degree;
        if (g.dim == 1) {
            p["nodes"] = reals_to_json(g.product->nodes1);
            p["node_weights"] = reals_to_json(g.product->weights1);
        }
        j["polar"] = std::move(p);
    }
    if (!g.band_phi.empty()) {
        j["band_phi"] = reals_to_json(g.band_phi);
        j["band_sectors"] = g.band_sectors;
    }
    return j;
}

NeedletGrid grid_from_json(const ojson& j, const WeightedBall& ball) {
    NeedletGrid g;
    g.level = j.at("level").get<int>();
    g.dim = ball.dim;
    g.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    for (const auto& c : j.at("points")) {
        BallPoint p;
        p.dim = ball.dim;
        for (int i = 0; i < ball.dim; ++i) p[i] = parse_hex_double(c.at(size_t(i)).get<std::string>());
        g.points.push_back(p);
    }
    g.weights = reals_from_json(j.at("weights"));
    for (const auto& e : j.at("cells")) {
        GridCell c;
        c.x0 = parse_hex_double(e.at(0).get<std::string>());
        c.x1 = parse_hex_double(e.at(1).get<std::string>());
        if (ball.dim == 2) {
            c.theta0 = parse_hex_double(e.at(2).get<std::string>());
            c.theta1 = parse_hex_double(e.at(3).get<std::string>());
        }
        g.cells.push_back(c);
    }
    g.cell_measures = reals_from_json(j.at("cell_measures"));
    if (j.contains("polar")) {
        ProductQuad q;
        q.dim = ball.dim;
        const auto& p = j.at("polar");
        q.radii = reals_from_json(p.at("radii"));
        q.radial_w = reals_from_json(p.at("radial_w"));
        q.n_theta = p.at("n_theta").get<int>();
        q.exact_degree = p.at("exact_degree").get<int>();
        if (ball.dim == 1) {
            q.nodes1 = reals_from_json(p.at("nodes"));
            q.weights1 = reals_from_json(p.at("node_weights"));
        }
        q.points = g.points;
        q.weights = g.weights;
        g.product = std::move(q);
    }
    if (j.contains("band_phi")) {
        g.band_phi = reals_from_json(j.at("band_phi"));
        g.band_sectors = j.at("band_sectors").get<std::vector<int>>();
        g.band_start.clear();
        size_t acc = 0;
        for (int ns : g.band_sectors) {
            g.band_start.push_back(acc);
            acc += size_t(ns);
        }
    }
    return g;
}

namespace {

ojson frame_body_json(const NeedletFrame& f) {
    ojson j;
    j["format"] = "needleball-frame";
    j["version"] = 1;
    ojson ball;
    ball["dim"] = f.ball.dim;
    ball["mu"] = hex_double(f.ball.mu);
    j["ball"] = std::move(ball);
    j["levels"] = f.J;
    j["strategy"] = to_string(f.config.strategy);
    ojson cut;
    cut["name"] = f.kernels.pair.name;
    cut["floor_a"] = hex_double(f.kernels.pair.a_hat.floor);
    cut["floor_b"] = hex_double(f.kernels.pair.b_hat.floor);
    j["cutoff"] = std::move(cut);
    j["analysis_degree"] = f.analysis_degree;
    j["analysis_radial_boost"] = f.config.analysis_radial_boost;
    j["mesh_constant"] = hex_double(f.config.mesh_constant);
    ojson grids = ojson::array();
    for (const auto& g : f.levels) grids.push_back(grid_to_json(g));
    j["grids"] = std::move(grids);
    return j;
}

} // namespace

void seal_frame(NeedletFrame& f) {
    ojson body = frame_body_json(f);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical_dump(body))));
    f.frame_hash = buf;
}

ojson frame_to_json(const NeedletFrame& f) {
    ojson j = frame_body_json(f);
    std::string hash = f.frame_hash;
    if (hash.empty()) {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a(canonical_dump(j))));
        hash = buf;
    }
    j["frame_hash"] = hash;
    return j;
}

NeedletFrame frame_from_json(const ojson& j) {
    if (j.value("format", "") != std::string("needleball-frame"))
        throw config_error("not a frame file");
    FrameConfig cfg;
    cfg.dim = j.at("ball").at("dim").get<int>();
    cfg.mu = parse_hex_double(j.at("ball").at("mu").get<std::string>());
    cfg.levels = j.at("levels").get<int>();
    cfg.strategy = strategy_from_string(j.at("strategy").get<std::string>());
    cfg.cutoff = j.at("cutoff").at("name").get<std::string>();
    cfg.mesh_constant = parse_hex_double(j.at("mesh_constant").get<std::string>());
    cfg.analysis_radial_boost = j.value("analysis_radial_boost", 0);

    NeedletFrame f;
    f.ball = WeightedBall(cfg.dim, cfg.mu);
    f.ball.require_kernel_mu();
    f.kernels = KernelConfig(f.ball, make_pair_by_name(cfg.cutoff));
    f.config = cfg;
    f.J = cfg.levels;
    f.analysis_degree = j.at("analysis_degree").get<int>();
    for (const auto& gj : j.at("grids")) f.levels.push_back(grid_from_json(gj, f.ball));
    if (int(f.levels.size()) != f.J + 1) throw config_error("frame file level count mismatch");

    // Verify the content hash.
    ojson body = frame_body_json(f);
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical_dump(body))));
    std::string expect = buf;
    std::string got = j.value("frame_hash", "");
    if (!got.empty() && got != expect)
        throw config_error("hash-mismatch: frame file hash " + got + " != content hash " + expect);
    f.frame_hash = expect;
    return f;
}

void save_frame(const NeedletFrame& f, const std::string& path) {
    save_json(frame_to_json(f), path);
}

NeedletFrame load_frame(const std::string& path) { return frame_from_json(load_json(path)); }

ojson coeffs_to_json(const CoefficientSet& c) {
    ojson j;
    j["format"] = "needleball-coefficients";
    j["frame_hash"] = c.frame_hash;
    j["aliasing_degree"] = c.aliasing_degree;
    ojson levels = ojson::array();
    for (size_t lj = 0; lj < c.re.size(); ++lj) {
        ojson e;
        e["j"] = lj;
        ojson vals = ojson::array();
        bool has_im = lj < c.im.size() && !c.im[lj].empty();
        for (size_t i = 0; i < c.re[lj].size(); ++i) {
            ojson pair = ojson::array();
            pair.push_back(hex_double(c.re[lj][i]));
            pair.push_back(hex_double(has_im ? c.im[lj][i] : 0.0));
            vals.push_back(std::move(pair));
        }
        e["values"] = std::move(vals);
        levels.push_back(std::move(e));
    }
    j["levels"] = std::move(levels);
    return j;
}

CoefficientSet coeffs_from_json(const ojson& j) {
    if (j.value("format", "") != std::string("needleball-coefficients"))
        throw config_error("not a coefficient file");
    CoefficientSet c;
    c.frame_hash = j.at("frame_hash").get<std::string>();
    c.aliasing_degree = j.at("aliasing_degree").get<int>();
    const auto& levels = j.at("levels");
    c.re.resize(levels.size());
    c.im.resize(levels.size());
    for (const auto& e : levels) {
        size_t lj = e.at("j").get<size_t>();
        if (lj >= levels.size()) throw config_error("coefficient level out of range");
        bool any_im = false;
        for (const auto& pair : e.at("values")) {
            c.re[lj].push_back(parse_hex_double(pair.at(0).get<std::string>()));
            double imv = parse_hex_double(pair.at(1).get<std::string>());
            c.im[lj].push_back(imv);
            any_im = any_im || imv != 0.0;
        }
        if (!any_im) c.im[lj].clear();
    }
    return c;
}

ojson load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open " + path);
    ojson j;
    in >> j;
    return j;
}

void save_json(const ojson& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path);
    out << canonical_dump(j);
    out.put('\n');
}

} // namespace nb
