#pragma once

#include <stdexcept>
#include <string>

namespace ktuple {

// A numerical precondition or postcondition did not hold (non-Hermitian
// input, non-unitary propagator, wrong dimension, ...).
struct ContractViolation : std::logic_error {
    using std::logic_error::logic_error;
};

// The time integrator did not converge under step refinement.
struct IntegratorAccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A root or bracket was not found in the scanned range.
struct NotFoundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Not enough usable data points for a fit.
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CalibrationError : std::runtime_error {
    CalibrationError(const std::string& what, double residual)
        : std::runtime_error(what + " (best residual " + std::to_string(residual) + ")"),
          best_residual(residual) {}
    double best_residual;
};

// Malformed input file; line is 1-based, 0 when unknown.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line_no)
        : std::runtime_error(line_no ? "line " + std::to_string(line_no) + ": " + what : what),
          line(line_no) {}
    std::size_t line;
};

}  // namespace ktuple
