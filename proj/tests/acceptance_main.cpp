// Acceptance harness: runs every cross-validation check and prints one
// pass/fail line per criterion.  Exit status is the number of failures.
#include <cstdio>

#include "qplocal/verify.hpp"

int main() {
    int failures = 0;
    for (const qpl::CheckResult& r : qpl::run_verify(20260824)) {
        const char* tag = r.ok() ? "PASS" : (r.status == "skipped-budget" ? "SKIP" : "FAIL");
        std::printf("CRITERION %s: %s (%ld ms) %s\n", r.name.c_str(), tag, r.millis,
                    r.detail.c_str());
        if (!r.ok()) ++failures;
    }
    return failures;
}
