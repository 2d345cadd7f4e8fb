#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mdbt {

/// A function/gradient evaluation produced NaN or Inf. Line-searches treat
/// this as a failed Armijo probe rather than a fatal error.
struct NumericalOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested capability the objective does not provide.
struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& what, std::size_t line_no)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what),
        line(line_no) {}
  std::size_t line;
};

/// Bias initialization with all-0 or all-1 classification labels.
struct DegenerateLabels : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Ellipsoid candidate requested at a stationary point.
struct ZeroGradient : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mdbt
