#pragma once

#include <stdexcept>
#include <string>

namespace dce {

/// Bad input: an index combination, geometry or option that violates a
/// precondition. The CLI maps this to exit status 1.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical procedure failed to converge or lost accuracy. Exit status 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dce
