#pragma once

#include <stdexcept>
#include <string>

namespace tempocast {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tensor shapes do not line up (matmul operands, broadcast, loss targets).
struct ShapeError : Error {
    using Error::Error;
};

/// A configuration value is out of its allowed range or inconsistent.
struct ConfigError : Error {
    using Error::Error;
};

/// A dataset file could not be parsed; message names the offending row.
struct DataError : Error {
    using Error::Error;
};

/// A call violated an operation's precondition.
struct ContractError : Error {
    using Error::Error;
};

/// A metric is undefined for the given inputs (e.g. zero actual in MAPE).
struct MetricError : Error {
    using Error::Error;
};

/// Training aborted (NaN loss, diverging state).
struct TrainError : Error {
    using Error::Error;
};

}  // namespace tempocast
