#ifndef MTFIS_ERRORS_HPP
#define MTFIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mtfis {

// Base class for every failure raised by the numerical layer. The CLI maps
// these to exit code 30 unless a more specific code applies.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Series terms have not started to decay within the configured level budget,
// or the partial sums left the range where double precision is meaningful.
struct NonConvergence : NumericalError {
    using NumericalError::NumericalError;
};

// Contour parameters violate an admissibility requirement
// (angle ordering, radius inequality, ray decay).
struct ContourViolation : NumericalError {
    using NumericalError::NumericalError;
};

// A quadrature refinement (node doubling or panel subdivision) failed to
// settle below the requested tolerance.
struct QuadratureDivergence : NumericalError {
    using NumericalError::NumericalError;
};

// The asymptotic expansion was requested outside its hypothesis (beta <= 2*rho1).
struct HypothesisViolation : NumericalError {
    using NumericalError::NumericalError;
};

// No evaluation regime accepts the given arguments.
struct AllRegimesFailed : NumericalError {
    using NumericalError::NumericalError;
};

// The elliptic symbol evaluated to a negative value on the lattice.
struct SymbolNotNonnegative : NumericalError {
    using NumericalError::NumericalError;
};

// Grid too coarse for the requested frequency cutoff.
struct AliasingRisk : NumericalError {
    using NumericalError::NumericalError;
};

// Degenerate modes carry data that violates the solvability conditions:
// no source term can reproduce the measurements. CLI exit code 20.
struct IncompatibleData : NumericalError {
    using NumericalError::NumericalError;
};

// Data fails the Sobolev smoothness hypothesis (warning-level by default).
struct SmoothnessViolation : NumericalError {
    using NumericalError::NumericalError;
};

}  // namespace mtfis

#endif
