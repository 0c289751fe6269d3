// Acceptance suite: runs the verification registry at desk scale and reports
// one line per acceptance criterion. Exits nonzero if any criterion fails.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "needleball/verify.hpp"

namespace {

struct Criterion {
    int id;
    std::string title;
    // Substrings of check names (suite/check) that must all pass.
    std::vector<std::string> patterns;
};

bool matches(const std::string& full, const std::string& pat) {
    return full.find(pat) != std::string::npos;
}

} // namespace

int main() {
    nb::VerifyOptions opt;
    opt.seed = 424242;
    auto results = nb::run_verify(opt);

    // Index checks by "suite/check".
    std::map<std::string, const nb::CheckResult*> by_name;
    for (const auto& s : results)
        for (const auto& c : s.checks) by_name[s.name + "/" + c.name] = &c;

    std::vector<Criterion> criteria = {
        {1, "reproducing kernel: L_n*g = g on Pi_n (1e-10)", {"kernels/reproducing"}},
        {2,
         "cubature: exact on Pi_{2^{j+2}} (1e-9), positive weights, mass 1e-10",
         {"cubature/product.exactness", "cubature/product.positivity", "cubature/product.mass"}},
        {3, "partition of unity: sup |sum conj(a)b - 1| <= 1e-12", {"cutoffs/partition-of-unity"}},
        {4, "frame reconstruction: rel L2 <= 1e-8, J=5", {"needlets/frame-identity-relL2"}},
        {5,
         "localization stability x4: kernel (n in 16..64) and needlet (j in 3..5)",
         {"kernels/localization.stability", "needlets/needlet-localization-stability"}},
        {6, "kernel Lp-norm two-sided band <= 20 (p in {1,2,inf})", {"kernels/lp-norm-band"}},
        {7,
         "norm equivalence bands <= 100 and cutoff independence <= 10",
         {"spaces/f-equivalence-band", "spaces/b-equivalence-band", "spaces/cutoff-independence"}},
        {8, "needlet norm bands <= 20 (levels 2..5)", {"needlets/needlet-norm-band"}},
        {9,
         "maximal operator indicator bounds, 100-case sweep",
         {"maximal/indicator-upper", "maximal/indicator-lower"}},
        {10,
         "Jackson: slope <= -s+0.2 and constant band <= x4 (alpha in {0.75,1.5})",
         {"approx/jackson.alpha0.75", "approx/jackson.alpha1.50"}},
        {11, "Nikolskii ratios bounded (<=20) and non-growing", {"nikolskii/ratio-bound",
                                                                 "nikolskii/ratio-growth"}},
        {12, "reproducibility: verify twice with fixed seed is bit-identical",
         {"reproducibility/verify-bit-identical"}},
    };

    bool all_ok = true;
    for (const auto& cr : criteria) {
        bool ok = true;
        int found = 0;
        double worst_margin = 0.0;
        std::string detail;
        for (const auto& [name, chk] : by_name) {
            bool hit = false;
            for (const auto& pat : cr.patterns)
                if (matches(name, pat)) hit = true;
            if (!hit) continue;
            ++found;
            ok = ok && chk->pass;
            if (!chk->pass) detail += " " + name;
            worst_margin = std::max(worst_margin, chk->threshold != 0.0
                                                      ? chk->measured / chk->threshold
                                                      : chk->measured);
        }
        if (found == 0) {
            ok = false;
            detail = " (no matching checks ran)";
        }
        all_ok = all_ok && ok;
        std::printf("criterion %02d %s  %s  [checks=%d, worst measured/threshold=%.3g]%s\n", cr.id,
                    ok ? "PASS" : "FAIL", cr.title.c_str(), found, worst_margin, detail.c_str());
    }

    // Full detail for the log.
    std::printf("\n-- detailed verification report --\n");
    nb::print_verify_report(results, std::cout);
    std::printf("\nacceptance: %s\n", all_ok ? "ALL CRITERIA PASS" : "FAILURES PRESENT");
    return all_ok ? 0 : 1;
}
