// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <cstdlib>
#include <iostream>

#include <spdlog/spdlog.h>

#include "rlsc/verify.hpp"

int main(int argc, char** argv) {
    spdlog::set_level(spdlog::level::warn);
    rlsc::VerifyOptions opts;
    for (int i = 1; i < argc; ++i) opts.only.push_back(std::atoi(argv[i]));
    bool all = true;
    rlsc::run_acceptance(opts, [&](const rlsc::CriterionResult& r) {
        std::cout << rlsc::format_result_line(r) << std::endl;
        for (const auto& d : r.details) std::cout << "    " << d << "\n";
        all = all && r.pass;
    });
    return all ? 0 : 1;
}
