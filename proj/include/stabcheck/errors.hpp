#ifndef STABCHECK_ERRORS_HPP
#define STABCHECK_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stabcheck {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Syntax error while parsing an expression; `offset` is the 0-based
/// character position of the offending token.
struct ParseError : Error {
  std::size_t offset;
  ParseError(const std::string& what, std::size_t off)
      : Error(what + " (offset " + std::to_string(off) + ")"), offset(off) {}
};

/// Evaluation left the domain of a primitive (division by zero, sqrt of a
/// negative, non-finite result, or an interval provably containing such a
/// point).
struct DomainError : Error {
  using Error::Error;
};

/// A precondition on user-supplied data failed; the message names the field.
struct ValidationError : Error {
  using Error::Error;
};

/// Config file could not be parsed; `line` is 1-based.
struct ConfigError : Error {
  int line;
  ConfigError(const std::string& what, int line_)
      : Error(what + " (line " + std::to_string(line_) + ")"), line(line_) {}
};

/// Cell or sample count exceeded a configured limit.
struct CapacityError : Error {
  using Error::Error;
};

/// Integer arithmetic would exceed the safe range for the current scalar
/// type; callers retry with arbitrary-precision integers.
struct OverflowError : Error {
  using Error::Error;
};

/// The system presented for analysis does not satisfy f(0,0) = 0 or is
/// otherwise malformed.
struct InvalidSystemError : Error {
  using Error::Error;
};

/// Consecutive loop samples subtend an angle >= pi/2; refine the loop.
struct TooCoarseError : Error {
  using Error::Error;
};

/// A projected loop sample is closer than delta to the origin.
struct OriginTooCloseError : Error {
  using Error::Error;
};

/// |f| dropped below delta along a mapped loop or cycle.
struct ZeroCrossingError : Error {
  using Error::Error;
};

/// The chain handed to top_degree has a nonzero boundary.
struct NotACycleError : Error {
  using Error::Error;
};

/// No admissible regular value was found within the retry budget.
struct DegenerateRegularValueError : Error {
  using Error::Error;
};

}  // namespace stabcheck

#endif  // STABCHECK_ERRORS_HPP
