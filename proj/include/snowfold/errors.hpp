#pragma once

#include <stdexcept>
#include <string>

namespace snowfold {

// Input matrix or cover fails shape/sign checks (non-square, negative entry,
// asymmetric, nonzero diagonal, bad point id).
struct StructuralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A caller-supplied parameter is out of its documented range.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A requested configuration cannot be realized (e.g. the scale window would
// exceed the hard cap); the message says which knob to turn.
struct ConfigurationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Desk-scale limits (point caps, exact-mode size limits).
struct SizeCapError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two artifacts that must describe the same space do not match.
struct MismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Missing or unreadable file; message names the path.
struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace snowfold
