#pragma once

#include <stdexcept>
#include <string>

namespace rbf {

/// Bad user input: malformed config, out-of-range parameter, degenerate geometry.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: singular system, singular kernel limit, failed placement.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rbf
