#pragma once

#include <stdexcept>
#include <string>

namespace biphoton {

// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed config files, unknown presets, invalid values.
struct config_error : error {
    using error::error;
};

// A spectral grid cannot resolve the requested model (channel or pump
// envelope narrower than a few grid steps) or does not contain it.
struct grid_error : error {
    using error::error;
};

// The dichroic-splitter leakage exceeded its threshold: the two-arm
// description of the state is not trustworthy for this input.
struct invalid_approximation : error {
    using error::error;
};

// A refine-and-compare quadrature check failed to meet tolerance.
struct quadrature_error : error {
    using error::error;
};

// Iterative reconstruction stopped before meeting its tolerance.
struct non_convergence : error {
    using error::error;
};

// Process exit codes used by the CLI (and asserted by tests).
namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int bad_config = 2;
inline constexpr int approximation_invalid = 3;
inline constexpr int not_converged = 4;
} // namespace exit_code

} // namespace biphoton
