#pragma once

#include <stdexcept>

namespace polyshrink {

// A requested moment E[U^v] does not exist (integrability condition violated).
struct NonIntegrable : std::domain_error {
    using std::domain_error::domain_error;
};

// A series sum hit its term cap before the tail bound met the tolerance.
struct TruncationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parameters fall outside the window an operation is defined on.
struct DomainViolation : std::domain_error {
    using std::domain_error::domain_error;
};

// An estimator family was requested below its dimension threshold.
struct DimensionTooSmall : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// ||x||^2 == 0 with shrinkage terms present; the estimator is undefined there.
struct SingularObservation : std::domain_error {
    using std::domain_error::domain_error;
};

struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A chained risk formula was requested outside the coefficient convention
// its derivation substitutes.
struct ConventionUnsupported : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace polyshrink
