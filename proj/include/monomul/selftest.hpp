#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "monomul/rng.hpp"

// End-to-end acceptance checks: each criterion exercises one advertised
// guarantee of the library (series calculus against the operator oracle,
// flows against closed forms, contraction and support bounds, divisibility).
// Shared by the acceptance test binary and the `selftest` CLI command.

namespace monomul {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail; // measured errors, fitted constants, draw counts
};

std::vector<CriterionResult> run_acceptance(std::uint64_t seed = kDefaultSeed);

// One "[PASS] criterion N: name (detail)" line per result.
void print_results(const std::vector<CriterionResult>& results, std::ostream& out);
bool all_passed(const std::vector<CriterionResult>& results);

} // namespace monomul
