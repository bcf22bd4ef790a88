#pragma once

#include <stdexcept>
#include <string>

namespace orbit {

/// Malformed or inconsistent input data (file contents, dimensions).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input for which no canonical element can be computed at all, e.g. a
/// point cloud whose points all coincide.
class DegenerateInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orbit
