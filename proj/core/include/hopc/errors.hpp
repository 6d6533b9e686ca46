#pragma once

#include <stdexcept>
#include <string>

namespace hopc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed or truncated image file, unsupported header, bad dimensions.
class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Parameter failed validation (out of range, inconsistent).
class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

/// A window, block or search footprint does not fit inside the image.
class FootprintError : public Error {
public:
    explicit FootprintError(const std::string& msg) : Error(msg) {}
};

/// Model fitting failed: too few points, degenerate configuration,
/// or the refinement loop cannot reach its threshold.
class FitError : public Error {
public:
    explicit FitError(const std::string& msg) : Error(msg) {}
};

} // namespace hopc
