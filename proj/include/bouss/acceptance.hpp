/**
 * @file acceptance.hpp
 * @brief End-to-end verification suite: closed-form reproduction, kernel and
 *        convergence checks, both branch traces, front-nonexistence algebra,
 *        oracle cross-validation, and discretization order. Shared between
 *        the `verify` CLI command and the acceptance test binary.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bouss::acceptance {

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Run every criterion; one result per criterion, in order. When `progress`
/// is given, a PASS/FAIL line per criterion is streamed as it completes.
std::vector<CriterionResult> run_all(std::ostream* progress = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace bouss::acceptance
