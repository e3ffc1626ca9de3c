/*
 * Self-contained property suites behind `verify <suite>`: randomized (fixed
 * seeds) invariant checks for the prox calculus, the PDFP solver, the
 * theory-bound evaluators and the samplers.
 */
#pragma once

#include <string>
#include <vector>

namespace pdla::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// suite in {prox, pdfp, bounds, samplers}; throws on unknown names
std::vector<CheckResult> run_suite(const std::string& suite);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace pdla::verify
