#pragma once

#include <stdexcept>
#include <string>

namespace nfamb {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad caller input: non-finite arguments, invalid layouts, mismatched grids.
struct InvalidInput : Error {
    using Error::Error;
};

struct DomainError : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct NyquistError : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct DegenerateArrayError : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct UnsupportedCut : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct GridError : InvalidInput {
    using InvalidInput::InvalidInput;
};

/// A numerical procedure did not converge or produced no usable result.
struct ComputationError : Error {
    using Error::Error;
};

} // namespace nfamb
