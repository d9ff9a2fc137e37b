#pragma once

#include <string>
#include <vector>

#include "padic.hpp"

namespace qpl {

// One cross-validation check: an exact identity evaluated along two
// independent computation paths.  A failure records both sides verbatim.
struct CheckResult {
    std::string name;
    std::string identity;  // what equality the check certifies
    std::string status;    // "pass" | "fail" | "skipped-budget"
    std::string detail;    // both sides on failure, brief summary on pass
    long millis = 0;

    bool ok() const { return status == "pass"; }
};

// Run the acceptance checks, canonically ordered by name.  `suite` is "all"
// or a check-name prefix; `seed` drives the randomized property sweeps so a
// fixed seed gives byte-identical reports.
std::vector<CheckResult> run_verify(unsigned long seed, const std::string& suite = "all");

}  // namespace qpl
