#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Thrown when an argument leaves the open unit disk or an otherwise
/// analytically required domain.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

/// Thrown when a caller violates an in-memory contract (size mismatch,
/// bad index range, ...).
class contract_error : public std::invalid_argument {
public:
    explicit contract_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Thrown when an operation is asked to run in the wrong (p,q) regime.
/// The message names the operation that covers the requested regime.
class regime_error : public std::invalid_argument {
public:
    explicit regime_error(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Thrown when a configured cap (series degree, ring depth) is exceeded.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a requested region cannot be resolved by the configured
/// grid density.
class resolution_error : public std::runtime_error {
public:
    explicit resolution_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown on malformed input files.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace bergman
