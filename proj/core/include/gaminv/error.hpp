#pragma once

#include <stdexcept>
#include <string>

namespace gaminv {

/// Bad user input: malformed files, out-of-range parameters, mismatched maps.
/// The CLI maps this to exit status 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal invariant was violated (a bug, not bad input). Exit status 3.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Raised by the unmodified invariants when their denominator is exactly zero.
class PoleError : public std::domain_error {
 public:
  PoleError(const std::string& what, double at) : std::domain_error(what), at_(at) {}
  double at() const noexcept { return at_; }

 private:
  double at_;
};

}  // namespace gaminv
