// acceptance.hpp — End-to-end verification suite: one entry per criterion,
// shared by the acceptance test binary and the CLI `verify` subcommand.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace oqs {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs every criterion at its pinned tolerance. Failures are captured in the
// result list; exceptions inside a criterion mark it failed.
std::vector<CriterionResult> run_acceptance();

// Prints one pass/fail line per criterion; returns the number of failures.
int report_acceptance(const std::vector<CriterionResult>& results, std::ostream& os);

} // namespace oqs
