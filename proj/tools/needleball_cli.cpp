// Command-line front end: frame construction, analysis/synthesis, norms,
// n-term approximation experiments, and the verification suites.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "needleball/approx.hpp"
#include "needleball/serialization.hpp"
#include "needleball/spaces.hpp"
#include "needleball/testfunctions.hpp"
#include "needleball/verify.hpp"

namespace {

// Exit codes: 0 ok, 1 verification failure, 2 config error, 3 numerical failure.
constexpr int kExitVerifyFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOpts {
    int dim = 2;
    double mu = 1.0;
    int levels = 4;
    std::string strategy = "product";
    std::string cutoff = "self-dual";
    uint64_t seed = 424242;
    int threads = 1;
    std::string out;
};

nb::FrameConfig frame_config(const CommonOpts& c) {
    nb::FrameConfig fc;
    fc.dim = c.dim;
    fc.mu = c.mu;
    fc.levels = c.levels;
    fc.strategy = nb::strategy_from_string(c.strategy);
    fc.cutoff = c.cutoff;
    return fc;
}

void write_output(const nb::ojson& j, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << nb::canonical_dump(j) << "\n";
    } else {
        nb::save_json(j, out);
    }
}

nb::ojson provenance(const nb::NeedletFrame& frame, const CommonOpts& c) {
    nb::ojson p;
    p["frame_hash"] = frame.frame_hash;
    p["dim"] = frame.ball.dim;
    p["mu"] = nb::hex_double(frame.ball.mu);
    p["levels"] = frame.J;
    p["strategy"] = nb::to_string(frame.config.strategy);
    p["cutoff"] = frame.kernels.pair.name;
    p["seed"] = c.seed;
    p["tool"] = "needleball 1.0";
    return p;
}

std::vector<size_t> parse_n_values(const std::string& s) {
    std::vector<size_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
    if (out.empty()) throw nb::config_error("empty --n-values");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"needleball: weighted needlet frames on the unit ball"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags (--seed, --threads) after subcommands

    CommonOpts C;
    app.add_option("--seed", C.seed, "RNG seed for all randomized paths");
    app.add_option("--threads", C.threads, "parallelism cap (evaluation loops)");

    // frame build ------------------------------------------------------------
    auto* frame_cmd = app.add_subcommand("frame", "frame file operations");
    auto* build = frame_cmd->add_subcommand("build", "construct and serialize a frame");
    build->add_option("--dim", C.dim, "ball dimension (1 or 2)");
    build->add_option("--mu", C.mu, "weight exponent mu > 0");
    build->add_option("--levels", C.levels, "max level J");
    build->add_option("--strategy", C.strategy, "product | quasi-uniform");
    build->add_option("--cutoff", C.cutoff, "self-dual | pair:plateau");
    int cache_mb = 512;
    build->add_option("--cache-budget-mb", cache_mb, "kernel table cache budget");
    build->add_option("--out", C.out, "output path")->required();

    // analyze ----------------------------------------------------------------
    auto* an = app.add_subcommand("analyze", "needlet coefficients of a function");
    std::string frame_path, function_desc = "constant", coeff_path;
    an->add_option("--frame", frame_path, "frame file")->required();
    an->add_option("--function", function_desc, "family:params descriptor");
    an->add_option("--out", C.out, "output path");

    // synthesize ---------------------------------------------------------
    auto* sy = app.add_subcommand("synthesize", "evaluate sum c_xi psi_xi");
    int eval_degree = 16;
    sy->add_option("--frame", frame_path, "frame file")->required();
    sy->add_option("--coeffs", coeff_path, "coefficient file")->required();
    sy->add_option("--eval-degree", eval_degree, "degree of the product evaluation grid");
    sy->add_option("--out", C.out, "output path");

    // norms --------------------------------------------------------------
    auto* no = app.add_subcommand("norms", "kernel- and sequence-side space norms");
    double s_par = 0.0, rho_par = 0.0, p_par = 2.0, q_par = 2.0;
    std::string family = "F";
    no->add_option("--frame", frame_path)->required();
    no->add_option("--function", function_desc);
    no->add_option("--s", s_par);
    no->add_option("--rho", rho_par);
    no->add_option("--p", p_par);
    no->add_option("--q", q_par);
    no->add_option("--family", family, "F | B");
    no->add_option("--out", C.out);

    // nterm ----------------------------------------------------------------
    auto* nt = app.add_subcommand("nterm", "greedy n-term approximation curve (CSV)");
    std::string n_values = "16,32,64,128,256,512,1024";
    double s_nt = 1.0, p_nt = 2.0;
    nt->add_option("--frame", frame_path)->required();
    nt->add_option("--function", function_desc);
    nt->add_option("--s", s_nt, "smoothness index for the Jackson ratio");
    nt->add_option("--p", p_nt);
    nt->add_option("--n-values", n_values);
    nt->add_option("--out", C.out);

    // verify ---------------------------------------------------------------
    auto* ve = app.add_subcommand("verify", "run the verification suites");
    std::string suites;
    bool as_json = false, quick = false;
    ve->add_option("--suite", suites, "comma-separated suite subset");
    ve->add_flag("--json", as_json, "emit the structured report");
    ve->add_flag("--quick", quick, "reduced sizes");
    ve->add_option("--out", C.out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*build) {
            if (C.mu <= 0.0)
                throw nb::config_error("unsupported-mu: kernel frames require mu > 0");
            nb::FrameConfig fc = frame_config(C);
            fc.cache_budget_bytes = size_t(cache_mb) << 20;
            nb::NeedletFrame frame = nb::build_frame(fc);
            nb::seal_frame(frame);
            nb::save_frame(frame, C.out);
            std::cout << "frame " << frame.frame_hash << " -> " << C.out << "\n";
            return 0;
        }
        if (*an) {
            nb::NeedletFrame frame = nb::load_frame(frame_path);
            auto f = nb::make_test_function(frame.ball, function_desc, C.seed);
            auto c = nb::analyze(frame, f.handle);
            nb::ojson j = nb::coeffs_to_json(c);
            j["provenance"] = provenance(frame, C);
            j["provenance"]["function"] = f.descriptor;
            write_output(j, C.out);
            return 0;
        }
        if (*sy) {
            nb::NeedletFrame frame = nb::load_frame(frame_path);
            auto c = nb::coeffs_from_json(nb::load_json(coeff_path));
            nb::ProductQuad q = nb::build_product_quadrature(frame.ball, eval_degree);
            auto vals = nb::synthesize_on_quad(frame, c, q);
            nb::ojson j;
            j["format"] = "needleball-values";
            j["provenance"] = provenance(frame, C);
            nb::ojson pts = nb::ojson::array(), vs = nb::ojson::array();
            for (size_t i = 0; i < q.size(); ++i) {
                nb::ojson pt = nb::ojson::array();
                for (int d = 0; d < frame.ball.dim; ++d) pt.push_back(nb::hex_double(q.points[i][d]));
                pts.push_back(std::move(pt));
                vs.push_back(nb::hex_double(vals[i]));
            }
            j["points"] = std::move(pts);
            j["values"] = std::move(vs);
            write_output(j, C.out);
            return 0;
        }
        if (*no) {
            nb::NeedletFrame frame = nb::load_frame(frame_path);
            auto f = nb::make_test_function(frame.ball, function_desc, C.seed);
            nb::SpaceParams prm;
            prm.s = s_par;
            prm.rho = rho_par;
            prm.p = p_par;
            prm.q = q_par;
            prm.family = family == "B" ? nb::SpaceFamily::B : nb::SpaceFamily::F;
            auto c = nb::analyze(frame, f.handle);
            double kn = prm.family == nb::SpaceFamily::F ? nb::f_norm_kernel(frame, f.handle, prm)
                                                         : nb::b_norm_kernel(frame, f.handle, prm);
            double sn = prm.family == nb::SpaceFamily::F ? nb::f_norm_sequence(frame, c, prm)
                                                         : nb::b_norm_sequence(frame, c, prm);
            nb::ojson j;
            j["format"] = "needleball-norms";
            j["provenance"] = provenance(frame, C);
            j["provenance"]["function"] = f.descriptor;
            nb::ojson pj;
            pj["family"] = family;
            pj["s"] = nb::hex_double(prm.s);
            pj["rho"] = nb::hex_double(prm.rho);
            pj["p"] = nb::hex_double(prm.p);
            pj["q"] = nb::hex_double(prm.q);
            j["params"] = std::move(pj);
            j["kernel_norm"] = nb::hex_double(kn);
            j["sequence_norm"] = nb::hex_double(sn);
            j["ratio"] = nb::hex_double(kn / sn);
            write_output(j, C.out);
            std::cout << "kernel=" << kn << " sequence=" << sn << " ratio=" << kn / sn << "\n";
            return 0;
        }
        if (*nt) {
            nb::NeedletFrame frame = nb::load_frame(frame_path);
            auto f = nb::make_test_function(frame.ball, function_desc, C.seed);
            auto ns = parse_n_values(n_values);
            auto rep = nb::jackson_diagnostic(frame, f.handle, s_nt, p_nt, ns, f.exact_l2sq);
            std::ostringstream csv;
            csv << "n,sigma_hat,jackson_ratio\n";
            for (size_t i = 0; i < ns.size(); ++i)
                csv << ns[i] << "," << nb::hex_double(rep.sigma[i]) << ","
                    << nb::hex_double(rep.jackson_ratio[i]) << "\n";
            csv << "# slope=" << rep.slope << " btau=" << rep.btau << " tau=" << rep.tau
                << " frame=" << frame.frame_hash << " function=" << f.descriptor
                << " seed=" << C.seed << "\n";
            if (C.out.empty() || C.out == "-") {
                std::cout << csv.str();
            } else {
                std::ofstream outf(C.out);
                if (!outf) throw nb::config_error("cannot write " + C.out);
                outf << csv.str();
            }
            return 0;
        }
        if (*ve) {
            nb::VerifyOptions opt;
            opt.seed = C.seed;
            opt.quick = quick;
            if (!suites.empty()) {
                std::stringstream ss(suites);
                std::string item;
                while (std::getline(ss, item, ',')) opt.suites.push_back(item);
                auto known = nb::verify_suite_names();
                for (const auto& s : opt.suites)
                    if (std::find(known.begin(), known.end(), s) == known.end())
                        throw nb::config_error("unknown suite: " + s);
            }
            auto results = nb::run_verify(opt);
            bool ok = nb::print_verify_report(results, std::cout);
            if (as_json || !C.out.empty()) {
                nb::ojson j = nb::verify_report_json(results, opt);
                write_output(j, C.out.empty() ? "-" : C.out);
            }
            return ok ? 0 : kExitVerifyFail;
        }
    } catch (const nb::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const nb::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
