#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lrdspec {

/// Raised when an input violates a structural precondition (shape mismatch,
/// non-Hermitian matrix, parameter outside its declared domain, a model
/// assumption check failing). The message names the violated assumption.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised for numerical-consistency failures: quadrature producing
/// non-finite values, a normalizer escaping its analytic bracket, circulant
/// eigenvalues with too much negative mass.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised while parsing configuration files; names the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised when the contrast optimizer hits a non-finite objective. Carries
/// the evaluation trace so the failing parameter region can be inspected.
struct OptimizerError : std::runtime_error {
    std::vector<std::pair<std::vector<double>, double>> trace;

    OptimizerError(const std::string& what,
                   std::vector<std::pair<std::vector<double>, double>> trace_)
        : std::runtime_error(what), trace(std::move(trace_)) {}
};

}  // namespace lrdspec
