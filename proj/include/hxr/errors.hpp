#pragma once

#include <stdexcept>
#include <string>

namespace hxr {

// Malformed input data (bad curves, bad meshes, unparsable files).
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A call that violates a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical procedure failed to converge or lost its bracket.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hxr
