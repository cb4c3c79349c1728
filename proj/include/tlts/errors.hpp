#pragma once

#include <stdexcept>

namespace tlts {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
struct domain_error : error {
    using error::error;
};

/// AR polynomial has a root inside the unit circle: no causal representation.
struct causality_error : error {
    using error::error;
};

/// MA polynomial has a root inside the unit circle: no invertible representation.
struct invertibility_error : error {
    using error::error;
};

/// Polynomial root on the unit circle: no stationary solution exists.
struct boundary_error : error {
    using error::error;
};

/// Angular measure ended up with no atoms.
struct degenerate_measure_error : error {
    using error::error;
};

/// Coefficient truncation cannot certify the accuracy an operation needs.
struct truncation_error : error {
    using error::error;
};

/// Not enough observations to carry out a fitting or preprocessing step.
struct insufficient_data_error : error {
    using error::error;
};

/// An estimator has no usable exceedances.
struct estimation_error : error {
    using error::error;
};

/// Model fitting failed outright.
struct fit_error : error {
    using error::error;
};

/// Operation not available for the requested model family.
struct unsupported_error : error {
    using error::error;
};

/// Malformed input file.
struct parse_error : error {
    using error::error;
};

}  // namespace tlts
