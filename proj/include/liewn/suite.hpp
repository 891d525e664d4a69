#pragma once

#include <string>
#include <vector>

namespace liewn::fixtures {

struct CheckResult {
    std::string id;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct Check {
    std::string id;
    std::string description;
    CheckResult (*run)();
};

/// Every published-value check, in report order.
const std::vector<Check>& checks();

/// Runs the checks whose id starts with `prefix` (all when empty) on up to
/// `threads` workers; 0 means LIEWN_THREADS or the hardware concurrency.
/// Results keep the order of checks().
std::vector<CheckResult> run_checks(const std::string& prefix = {}, unsigned threads = 0);

/// Fixed-width pass/fail table without timings, so that repeated runs are identical.
std::string report(const std::vector<CheckResult>& results);

/// LIEWN_THREADS when set to a positive integer, else the hardware concurrency.
unsigned default_threads();

}  // namespace liewn::fixtures
