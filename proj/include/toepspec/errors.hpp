#ifndef TOEPSPEC_ERRORS_HPP
#define TOEPSPEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace toepspec {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Evaluation requested too close to a pole of the symbol.
class PoleHitError : public Error {
public:
    using Error::Error;
};

/// A linear solve or interpolation exceeded the condition threshold.
class IllConditionedError : public Error {
public:
    using Error::Error;
};

/// Singular values straddle the rank tolerance; numerical rank is ambiguous.
class RankUndeterminedError : public Error {
public:
    using Error::Error;
};

/// A coefficient window is too short for the requested operation.
class InsufficientWindowError : public Error {
public:
    using Error::Error;
};

/// det L(lambda,z) vanished identically; E(Omega) is not determined by this route.
class DegenerateDetError : public Error {
public:
    using Error::Error;
};

/// R0 - gamma*Q*B - lambda*I is numerically singular.
class DSingularError : public Error {
public:
    using Error::Error;
};

/// Malformed input data (JSON schema violations, inconsistent dimensions).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to meet its accuracy contract.
class NumericalError : public Error {
public:
    using Error::Error;
};

} // namespace toepspec

#endif
