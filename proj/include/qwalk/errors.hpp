#pragma once

#include <stdexcept>
#include <string>

namespace qwalk {

/// Input violates a documented parameter constraint.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run would exceed a configured resource bound (lattice window, memory).
class resource_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computed quantity left its physical range by more than the documented
/// tolerance; this signals numerical corruption upstream, not bad user input.
class numeric_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qwalk
