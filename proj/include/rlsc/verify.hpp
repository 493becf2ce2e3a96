#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rlsc {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string summary;               // key numbers for the one-line report
    std::vector<std::string> details;  // sub-check lines
    double seconds = 0.0;
};

struct VerifyOptions {
    int threads = 1;
    std::vector<int> only;  // empty: all criteria 1..9
};

// Runs the acceptance criteria in order; on_result is called after each one.
std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result_line(const CriterionResult& r);

} // namespace rlsc
