#pragma once

#include <stdexcept>
#include <string>

namespace gage {

// Shape and argument violations are reported as std::invalid_argument.

/// Malformed or inconsistent input data (files, datasets).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a usable result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gage
