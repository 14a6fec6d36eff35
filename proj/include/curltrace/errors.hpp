#pragma once

#include <stdexcept>
#include <string>

namespace curltrace {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Point lies on an edge or corner where the inner normal is undefined.
struct EdgePointError : Error {
    explicit EdgePointError(const std::string& what) : Error(what) {}
};

/// Boundary sampler needs a bounding window for an unbounded surface.
struct UnboundedSurfaceError : Error {
    explicit UnboundedSurfaceError(const std::string& what) : Error(what) {}
};

/// A required ball or support leaves the working box.
struct OutsideDomainError : Error {
    explicit OutsideDomainError(const std::string& what) : Error(what) {}
};

/// Field evaluated on its singular set (defined only almost everywhere).
struct UndefinedPointError : Error {
    explicit UndefinedPointError(const std::string& what) : Error(what) {}
};

/// Test-function support exits the working box.
struct SupportEscapesError : Error {
    explicit SupportEscapesError(const std::string& what) : Error(what) {}
};

/// Field is not compactly supported strictly inside the working box.
struct SupportNotCompactError : Error {
    explicit SupportNotCompactError(const std::string& what) : Error(what) {}
};

/// Two trace estimates refer to different points or normals.
struct PointMismatchError : Error {
    explicit PointMismatchError(const std::string& what) : Error(what) {}
};

/// Extrapolation needs at least three strictly decreasing levels.
struct InsufficientLevelsError : Error {
    explicit InsufficientLevelsError(const std::string& what) : Error(what) {}
};

/// Neither a closed-form nor a numeric trace is available.
struct NoTraceAvailableError : Error {
    explicit NoTraceAvailableError(const std::string& what) : Error(what) {}
};

/// Malformed or rejected run configuration.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

}  // namespace curltrace
