#pragma once

#include <stdexcept>
#include <string>

namespace vfb {

/// Base class for every error thrown by this library.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Array shapes or grids do not match.
class dimension_error : public error {
public:
    using error::error;
};

/// A field violates the Hermitian symmetry required of real data.
class symmetry_error : public error {
public:
    using error::error;
};

/// A singular multiplier met a field whose zero mode is not pinned to zero.
class zero_mode_error : public error {
public:
    using error::error;
};

/// Component count incompatible with the requested operation.
class component_error : public error {
public:
    using error::error;
};

/// Shell or cutoff index outside the partition range.
class index_error : public error {
public:
    using error::error;
};

/// Grid cannot resolve the requested decomposition, or a field carries
/// frequency content outside the partition range.
class resolution_error : public error {
public:
    using error::error;
};

/// Exponent values outside the admissible range.
class exponent_range_error : public error {
public:
    using error::error;
};

/// Invalid parameter combination for an estimate or operator.
class parameter_error : public error {
public:
    using error::error;
};

/// Time quadrature cannot be formed (too few nodes, bad interval).
class quadrature_error : public error {
public:
    using error::error;
};

/// A trajectory does not cover the requested time interval.
class coverage_error : public error {
public:
    using error::error;
};

/// Malformed experiment configuration.
class config_error : public error {
public:
    using error::error;
};

} // namespace vfb
