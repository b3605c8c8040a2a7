#pragma once

#include <stdexcept>
#include <string>

namespace alocc {

// Error taxonomy used across the library. The CLI maps these to exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Tensor/operation shape disagreements (channel mismatch, bad input size, ...).
struct DimensionError : Error {
    using Error::Error;
};

// Invalid network or experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Malformed files: bad magic, truncation, checksum or version mismatch.
struct FormatError : Error {
    using Error::Error;
};

// API misuse: empty batch, backward on an untaped tensor, single-class metrics.
struct UsageError : Error {
    using Error::Error;
};

// Non-finite values where finite ones are required.
struct NumericError : Error {
    using Error::Error;
};

} // namespace alocc
