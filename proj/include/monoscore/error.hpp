#pragma once

#include <stdexcept>
#include <string>

namespace monoscore {

/// Precondition violated by the caller (bad dimension, range, flag...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine produced a result it cannot vouch for
/// (non-PSD input beyond tolerance, non-finite objective, no convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace monoscore
