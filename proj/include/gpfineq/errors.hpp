#pragma once

#include <stdexcept>
#include <string>

namespace gpfineq {

// Thrown when an iterative scheme (quadrature refinement, continued
// fraction, series summation) hits its budget before meeting tolerance.
// Callers that sweep many parameter sets catch this per-case and record
// the case as skipped instead of aborting the sweep.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the random-case generators when rejection sampling cannot
// produce an admissible sample within its retry budget.
class GenerationExhausted : public std::runtime_error {
public:
    explicit GenerationExhausted(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gpfineq
