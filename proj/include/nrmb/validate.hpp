// validate.hpp — quick self-check of the library invariants, run by
// `nrmb validate`.

#pragma once

#include <string>
#include <vector>

namespace nrmb {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<CheckResult> run_invariant_suite();

}  // namespace nrmb
