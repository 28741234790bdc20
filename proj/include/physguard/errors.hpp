// Exception types shared across the library.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace physguard {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A constructor/operation precondition does not hold.
class InvalidParameter : public Error {
public:
    using Error::Error;
};

// Vector/matrix shapes do not line up.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Not enough samples to honor a statistical contract.
class InsufficientData : public Error {
public:
    using Error::Error;
};

// Innovation covariance C*P*C^T + R is not invertible (degenerate noise config).
class SingularInnovationCovariance : public Error {
public:
    using Error::Error;
};

// Stealthy attack applied without a measurement estimate.
class MissingEstimate : public Error {
public:
    using Error::Error;
};

// Replay attack ran past the end of its recorded segment.
class ReplayUnderflow : public Error {
public:
    using Error::Error;
};

// A claimed/test sensor label is not part of the fingerprint model.
class UnknownLabel : public Error {
public:
    using Error::Error;
};

// Input series shorter than one chunk.
class SeriesTooShort : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Aggregated config validation failure; one entry per violated field.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> issues)
        : Error(join(issues)), issues_(std::move(issues)) {}

    const std::vector<std::string>& issues() const { return issues_; }

private:
    static std::string join(const std::vector<std::string>& issues) {
        std::string msg = "invalid config";
        for (const auto& issue : issues) {
            msg += "\n  - " + issue;
        }
        return msg;
    }

    std::vector<std::string> issues_;
};

}  // namespace physguard
