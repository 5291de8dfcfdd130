#ifndef RSVD_ERRORS_HPP
#define RSVD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rsvd {

/// Invalid arguments: dimension mismatches, out-of-range indices, bad
/// configuration values discovered at call time.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed file content. Carries a human-readable location in the message.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Decomposition or linear-solve failure (rank deficiency, non-SPD system).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rsvd

#endif
