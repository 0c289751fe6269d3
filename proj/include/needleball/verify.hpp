#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "needleball/needlets.hpp"

namespace nb {

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string note;
};

struct SuiteResult {
    std::string name;
    std::vector<CheckResult> checks;
    double seconds = 0.0;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct VerifyOptions {
    uint64_t seed = 424242;
    bool quick = false;                // trimmed sizes for smoke/reproducibility runs
    std::vector<std::string> suites;   // empty = all
};

// Suite names: geometry, orthopoly, cutoffs, cubature, kernels, nikolskii,
// needlets, spaces, maximal, approx, serialization, reproducibility.
std::vector<std::string> verify_suite_names();
std::vector<SuiteResult> run_verify(const VerifyOptions& opt);

nlohmann::ordered_json verify_report_json(const std::vector<SuiteResult>& results,
                                          const VerifyOptions& opt);
// One line per check, plus a per-suite summary; returns overall pass.
bool print_verify_report(const std::vector<SuiteResult>& results, std::ostream& os);

} // namespace nb
