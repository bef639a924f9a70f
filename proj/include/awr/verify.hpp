#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace awr {

/// One property or convergence check. `criterion` is the acceptance item the
/// check belongs to (1..13), or 0 for supporting checks.
struct CheckResult {
    std::string suite;
    int criterion = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

/// transport, parabolic, poisson, contraction, mms.
const std::vector<std::string>& suite_names();

/// Runs one suite, or every suite for "all". Throws InvalidArgument for an
/// unknown name. Checks never throw; a solver error counts as a failure.
std::vector<CheckResult> run_suite(const std::string& name);

/// Aligned pass/fail table with a closing summary line.
void print_checks(std::ostream& out, const std::vector<CheckResult>& checks);

bool all_passed(const std::vector<CheckResult>& checks);

} // namespace awr
