#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nlwlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : Error { using Error::Error; };
struct UsageError : Error { using Error::Error; };
struct NumericalError : Error { using Error::Error; };

// Adaptive step fell below the floor.
struct StiffnessError : NumericalError { using NumericalError::NumericalError; };

// Lyapunov functional increased beyond the per-step tolerance.
struct IntegratorFault : NumericalError { using NumericalError::NumericalError; };

struct ResolutionError : NumericalError { using NumericalError::NumericalError; };
struct RefinementError : NumericalError { using NumericalError::NumericalError; };
struct FitError : NumericalError { using NumericalError::NumericalError; };

struct ModulationFailure : NumericalError {
    ModulationFailure(const std::string& what, std::vector<double> last_residuals)
        : NumericalError(what), residuals(std::move(last_residuals)) {}
    std::vector<double> residuals;
};

struct IllSeparated : NumericalError {
    IllSeparated(const std::string& what, int index, double gap)
        : NumericalError(what), index(index), gap(gap) {}
    int index;
    double gap;
};

struct CollisionError : NumericalError {
    CollisionError(const std::string& what, double s, int index)
        : NumericalError(what), s(s), index(index) {}
    double s;
    int index;
};

}  // namespace nlwlab
