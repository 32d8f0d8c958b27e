#pragma once

#include <stdexcept>
#include <string>

namespace monomod {

// Requested work exceeds a configured budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A certified-precision requirement cannot be met with the given input.
class PrecisionError : public std::runtime_error {
public:
    explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

// An interval comparison stayed undecided at the maximum working precision.
class IndeterminateError : public std::runtime_error {
public:
    explicit IndeterminateError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace monomod
