#pragma once

#include <stdexcept>
#include <string>

namespace sonorad {

/// Requested (l, x) is outside what the implementation supports.
class capability_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A quadrature or transform could not meet its accuracy contract.
class accuracy_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The mode sum did not converge within the allowed l range.
class truncation_error : public accuracy_error {
 public:
  truncation_error(const std::string& msg, double tail)
      : accuracy_error(msg), tail_estimate(tail) {}
  double tail_estimate;
};

/// Both continuity factors underflowed; no meaningful normalization exists.
class degenerate_mode_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Run configuration is malformed or inconsistent.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sonorad
