#pragma once

#include "qp/gaps.hpp"

#include <cstdint>

namespace qp {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    double elapsed_s = 0;
    double budget_s = 0;
    std::string detail;
};

// run the core verification suite (13 checks); `quick` shrinks the sampling
// sizes for smoke runs and is not a substitute for the full suite
std::vector<CriterionResult> run_verification(std::uint64_t seed = 20240915,
                                              bool quick = false);

// pretty one-line-per-criterion report; returns true iff all passed
bool print_verification(const std::vector<CriterionResult>& results);

}  // namespace qp
