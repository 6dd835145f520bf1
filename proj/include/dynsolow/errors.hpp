#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dynsolow {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration / parameter errors.
struct ConfigError : Error {
    using Error::Error;
};
struct UnknownKey final : ConfigError {
    explicit UnknownKey(const std::string& key) : ConfigError("unknown config key: " + key) {}
};
struct MalformedValue final : ConfigError {
    MalformedValue(const std::string& key, const std::string& value)
        : ConfigError("malformed value for key '" + key + "': \"" + value + "\"") {}
};

struct ValidationError : ConfigError {
    using ConfigError::ConfigError;
};
struct NonPositiveTimescale final : ValidationError {
    NonPositiveTimescale(const std::string& field, double value)
        : ValidationError(field + " must be > 0, got " + std::to_string(value)) {}
};
struct ShareOutOfRange final : ValidationError {
    ShareOutOfRange(const std::string& field, double value)
        : ValidationError(field + " must lie in (0,1), got " + std::to_string(value)) {}
};
struct NegativeRate final : ValidationError {
    NegativeRate(const std::string& field, double value)
        : ValidationError(field + " out of range, got " + std::to_string(value)) {}
};

// Runtime state errors.
struct NonFiniteState final : Error {
    std::int64_t step = -1;  // simulation step index, -1 if outside the integrator
    explicit NonFiniteState(const std::string& what) : Error(what) {}
    NonFiniteState(const std::string& what, std::int64_t step_index)
        : Error(what + " at step " + std::to_string(step_index)), step(step_index) {}
};
struct NonPositiveCapital final : Error {
    explicit NonPositiveCapital(double value)
        : Error("capital level must be > 0, got " + std::to_string(value)) {}
};
struct StepTooLarge final : Error {
    using Error::Error;
};
struct NewtonDivergence final : Error {
    using Error::Error;
};

struct IoError final : Error {
    using Error::Error;
};

// Analysis preconditions.
struct WindowTooSmall final : Error {
    using Error::Error;
};
struct InsufficientCrossings final : Error {
    using Error::Error;
};
struct NonUniformSampling final : Error {
    using Error::Error;
};
struct WrongMode final : Error {
    using Error::Error;
};

}  // namespace dynsolow
