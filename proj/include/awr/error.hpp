#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace awr {

/// Base class for every error raised by the solver stack.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A field contains NaN or Inf.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// A density value left the admissible interval of the offset model.
/// For the singular offsets this is the numerical signature of congestion
/// blow-up; for PowerLaw it signals vacuum.
class DomainViolation : public Error {
public:
    using Error::Error;
};

/// Mobility floor dropped below the degeneracy threshold.
class DegenerateDissipation : public Error {
public:
    using Error::Error;
};

/// Invalid argument combination (mismatched tori, bad time grids, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Picard iteration did not reach the requested tolerance.
class ConvergenceFailure : public Error {
public:
    ConvergenceFailure(const std::string& what, std::vector<double> kappas)
        : Error(what), kappa_history(std::move(kappas)) {}
    std::vector<double> kappa_history;
};

/// Malformed configuration or snapshot file.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace awr
