#pragma once

#include <stdexcept>
#include <string>

namespace synclab {

struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct budget_exceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Raised by iterative eigensolvers; carries the residual at the last iterate.
struct convergence_error : std::runtime_error {
    double last_residual;
    convergence_error(const std::string& what, double residual)
        : std::runtime_error(what), last_residual(residual) {}
};

struct degenerate_estimator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when a moment Gram matrix is too ill-conditioned to trust;
// carries the polynomial degree at which conditioning broke down.
struct conditioning_error : std::runtime_error {
    int degree;
    conditioning_error(const std::string& what, int deg)
        : std::runtime_error(what), degree(deg) {}
};

}  // namespace synclab
