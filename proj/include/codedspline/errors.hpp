#pragma once

#include <stdexcept>

namespace codedspline {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidAbscissae : Error { using Error::Error; };
struct TooFewPoints : Error { using Error::Error; };
struct NumericalFailure : Error { using Error::Error; };
struct OutOfDomain : Error { using Error::Error; };
struct Unsupported : Error { using Error::Error; };
struct InvalidLambda : Error { using Error::Error; };
struct BandwidthTooNarrow : Error { using Error::Error; };
struct InvalidExponent : Error { using Error::Error; };
struct ResponseOutOfRange : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct IllConditioned : Error { using Error::Error; };
struct NotFound : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct SlopeUndefined : Error { using Error::Error; };

}  // namespace codedspline
