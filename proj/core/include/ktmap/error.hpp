#pragma once

#include <stdexcept>
#include <string>

namespace ktmap {

/// Bad arguments or configuration supplied by the caller.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input data that violates a model invariant or cannot support the requested analysis.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace ktmap
