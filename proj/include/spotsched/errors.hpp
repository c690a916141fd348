#pragma once

#include <stdexcept>
#include <string>

namespace spotsched {

/// Malformed or out-of-range configuration (bad JSON, missing field, invalid
/// distribution parameters).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A policy constructor or analytic formula was asked to operate outside
/// the parameter regime where it is defined (e.g. delta too large for a
/// single-slot construction).
class PreconditionError : public std::domain_error {
public:
    explicit PreconditionError(const std::string& what) : std::domain_error(what) {}
};

/// Internal consistency failure detected while simulating.
class SimulationError : public std::logic_error {
public:
    explicit SimulationError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace spotsched
