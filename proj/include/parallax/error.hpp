#pragma once

#include <stdexcept>
#include <string>

namespace parallax {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid parameter value (even kernel size, non-positive scale, ...).
struct ParamError : Error {
    using Error::Error;
};

// Dimension mismatches, out-of-bounds centers, empty viewports,
// holes without a boundary.
struct GeometryError : Error {
    using Error::Error;
};

// Empty masks, empty instance sets, label maps with no labels.
struct EmptyInputError : Error {
    using Error::Error;
};

// Caller violated a documented calling contract (e.g. unsorted input).
struct ContractError : Error {
    using Error::Error;
};

// File ingest failures; the message names the offending path.
struct InputError : Error {
    using Error::Error;
};

// File output failures; the message names the offending path.
struct OutputError : Error {
    using Error::Error;
};

}  // namespace parallax
