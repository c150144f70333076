#pragma once

#include <stdexcept>
#include <string>

namespace degel {

/// Invalid configuration (grid too coarse, bad exponent range, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Operation called outside its domain (empty point set, non-PSD matrix, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// NaN/overflow detected while iterating.
struct NumericalFailure : std::runtime_error {
    explicit NumericalFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Not enough resolved data to produce the requested measurement.
struct InsufficientData : std::runtime_error {
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

} // namespace degel
