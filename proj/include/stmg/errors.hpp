#pragma once

#include <stdexcept>
#include <string>

namespace stmg {

/// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ParameterError : public Error { using Error::Error; };    // invalid construction arguments
class DomainError : public Error { using Error::Error; };       // evaluation point outside the domain
class NestingError : public Error { using Error::Error; };      // knot vectors not nested
class GeometryError : public Error { using Error::Error; };     // degenerate geometry
class InterfaceError : public Error { using Error::Error; };    // slab interfaces do not match
class DimensionError : public Error { using Error::Error; };    // operand shape mismatch
class SingularityError : public Error { using Error::Error; };  // singular factorization
class DefinitenessError : public Error { using Error::Error; }; // matrix not SPD where required
class AdmissibilityError : public Error { using Error::Error; };// theta/eigenvalue admissibility violated
class ConditioningError : public Error { using Error::Error; }; // conditioning cap exceeded
class BreakdownError : public Error { using Error::Error; };    // Krylov recurrence breakdown
class ScheduleError : public Error { using Error::Error; };     // coarsening schedule not applicable
class StagnationError : public Error { using Error::Error; };   // iterative solver stagnated
class FallbackError : public Error { using Error::Error; };     // degenerate block, no solver path
class IoError : public Error { using Error::Error; };           // file input/output failure

/// Iterative solver ran out of its iteration budget.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int iterations, double residual)
        : Error(what), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

} // namespace stmg
