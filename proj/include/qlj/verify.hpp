#pragma once

#include <string>
#include <vector>

namespace qlj::verify {

struct CheckResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double measured = 0;   // the quantity compared against the threshold
    double threshold = 0;
    std::string detail;    // per-configuration values
    double seconds = 0;
};

struct VerifyOptions {
    int threads = 0;
};

inline constexpr int kCriterionCount = 12;

// Suites: identities, normalization, currents, vortices, semiclassical,
// interference, localization, classical, all. Throws std::invalid_argument.
std::vector<int> suite_criteria(const std::string& suite);
std::vector<std::string> suite_names();

CheckResult run_criterion(int id, const VerifyOptions& opts = {});

// One line: "PASS [n] name: measured ... threshold ... (t s)".
std::string format_result(const CheckResult& r);

}  // namespace qlj::verify
