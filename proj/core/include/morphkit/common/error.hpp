#pragma once

#include <stdexcept>
#include <string>

namespace morphkit {

/// Base class for all morphkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file (landmark files, CSVs, configs). Messages carry
/// the offending path and, where known, the line number.
struct ParseError : Error {
    using Error::Error;
};

/// Shape / landmark-count mismatch between operands.
struct DimensionError : Error {
    using Error::Error;
};

/// Filesystem or image container failure.
struct IoError : Error {
    using Error::Error;
};

/// Invalid or unknown configuration keys/values.
struct ConfigError : Error {
    using Error::Error;
};

/// Non-finite loss encountered during training.
struct DivergenceError : Error {
    using Error::Error;
};

}  // namespace morphkit
