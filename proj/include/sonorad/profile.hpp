#pragma once

#include <utility>
#include <vector>

#include "sonorad/medium.hpp"

namespace sonorad::profile {

/// Bubble trajectory R(t) on a finite window, SI units throughout.
/// Either the analytic collapse model (a Lorentzian dip in R^2) or a
/// monotone cubic interpolant through tabulated (t, R) samples; the square
/// of the radius is the interpolated variable.
class BubbleProfile {
 public:
  enum class Kind { kLorentzianDip, kTabulated };

  static BubbleProfile lorentzian(const RunParams& params);
  static BubbleProfile tabulated(std::vector<std::pair<double, double>> samples);

  Kind kind() const { return kind_; }
  const RunParams& params() const;  // model kind only
  std::pair<double, double> window() const { return window_; }

  double radius(double t) const;  // m
  double beta(double t) const;    // Rdot/c, dimensionless
  double dr2dt(double t) const;   // m^2/s

  /// d^m R^2 / dt^m for m = 1..5; analytic for the model kind, throws
  /// std::domain_error for tabulated profiles beyond the interpolant's
  /// differentiability (m > 2).
  double dr2_deriv(int order, double t) const;

 private:
  BubbleProfile() = default;
  void check_window(double t) const;

  Kind kind_ = Kind::kLorentzianDip;
  RunParams params_{};
  std::pair<double, double> window_{0.0, 0.0};

  // tabulated kind: Steffen monotone cubic through q = R^2
  std::vector<double> t_;
  std::vector<double> q_;
  std::vector<double> slope_;
  double q_eval(double t, int deriv) const;
};

struct ProfileDiagnostics {
  double beta_max = 0.0;
  double t_at_beta_max = 0.0;
  double min_radius = 0.0;
  bool warning = false;          // beta_max above the threshold
  double warn_threshold = 0.1;
};

ProfileDiagnostics diagnostics(const BubbleProfile& p, double warn_threshold = 0.1);

/// Parses a two-column "t_seconds R_meters" text table, '#' comments.
BubbleProfile load_profile_table(const std::string& path);

}  // namespace sonorad::profile
