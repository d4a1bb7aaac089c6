#pragma once

#include <iosfwd>

#include "coarsekit/constructions.hpp"

namespace coarsekit::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the full verification suite.  Deterministic (fixed seeds).
std::vector<CriterionResult> run_all();

/// Prints one PASS/FAIL line per criterion; returns true iff all passed.
bool run_and_report(std::ostream& os);

}  // namespace coarsekit::acceptance
