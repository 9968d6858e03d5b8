#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace elicit::selftest {

/// Result of one verification suite. A suite passes when no trial failed.
struct SuiteResult {
    int id = 0;
    std::string name;
    long trials = 0;
    long failures = 0;
    std::string detail;

    bool passed() const { return failures == 0; }
};

/// Runs the ten numbered verification suites (fixed seeds, deterministic)
/// and returns their results in order. Optionally streams one line per
/// suite to progress as it goes.
std::vector<SuiteResult> run_all(std::ostream* progress = nullptr);

}  // namespace elicit::selftest
