/**
 * @file errors.hpp
 * @brief Exception taxonomy shared by every module
 */

#pragma once

#include <stdexcept>
#include <string>

namespace longbond {

/// Base class for all library errors
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- curve construction --

/// Later maturity quoted at a strictly larger price
struct NonMonotoneData final : Error {
    using Error::Error;
};

/// Last input maturity does not equal the declared horizon
struct HorizonMismatch final : Error {
    using Error::Error;
};

/// No usable curve points supplied
struct EmptyData final : Error {
    using Error::Error;
};

/// Parameter outside its admissible range (a > 0, sigma > 0, ...)
struct InvalidParameter final : Error {
    using Error::Error;
};

// -- path processes --

/// Y-process started at x0 <= 0
struct NonPositiveInitial final : Error {
    using Error::Error;
};

/// Time does not land on a grid node (no silent interpolation)
struct OffGridTime final : Error {
    using Error::Error;
};

// -- bonds --

/// Maturity beyond the model horizon
struct MaturityBeyondHorizon final : Error {
    using Error::Error;
};

/// Maturities not in the required strict order
struct BadMaturityOrder final : Error {
    using Error::Error;
};

// -- rates --

/// Forward curve admits no density (e.g. Cantor scheme)
struct NotAbsolutelyContinuous final : Error {
    using Error::Error;
};

/// Density blows up at the horizon (power-law exponent < 1)
struct UnboundedDensity final : Error {
    using Error::Error;
};

// -- pricing --

/// Log price ratio x must be positive
struct NonPositiveX final : Error {
    using Error::Error;
};

/// Pitfall demo requires a strictly decreasing curve
struct NonStrictCurve final : Error {
    using Error::Error;
};

// -- strategies --

/// Strategy references a maturity the model cannot price
struct MaturityNotInModel final : Error {
    using Error::Error;
};

/// A check was run before its prerequisites passed
struct PrerequisiteFailed final : Error {
    using Error::Error;
};

// -- cli --

/// Bad command-line configuration
struct ConfigError final : Error {
    using Error::Error;
};

/// File could not be read/written or has a malformed format
struct IoError final : Error {
    using Error::Error;
};

}  // namespace longbond
