#pragma once

#include <stdexcept>
#include <string>

namespace volimpact {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid numeric input (non-positive forward, strike, expiry, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Observed price outside the admissible no-arbitrage band.
class ArbitrageError : public Error {
public:
    using Error::Error;
};

/// Iterative solver exhausted its iteration budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Smile fit could not be carried out (too few quotes, bad smile, ...).
class CalibrationError : public Error {
public:
    using Error::Error;
};

/// Series lookup has no value at or before the requested time.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Quantity undefined for the given inputs (zero denominator and similar).
class UndefinedError : public Error {
public:
    using Error::Error;
};

/// Regression could not be performed (not enough usable points).
class FitError : public Error {
public:
    using Error::Error;
};

/// Input file does not match the expected schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// Bad run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Simulator configuration produces an invalid market.
class GenerationError : public Error {
public:
    using Error::Error;
};

/// Estimates cannot be matched against the ground-truth ledger.
class ReconciliationError : public Error {
public:
    using Error::Error;
};

} // namespace volimpact
