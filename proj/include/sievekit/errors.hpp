#pragma once

#include <stdexcept>
#include <string>

namespace sievekit {

/// Argument outside an operation's documented domain.
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature could not certify the requested tolerance.
class nonconvergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Root bracketing failed: no sign change over the initial interval.
class bracket_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Request exceeds the configured memory budget or desk-scale limit.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sievekit
