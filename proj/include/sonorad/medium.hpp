#pragma once

#include <string>
#include <utility>
#include <vector>

namespace sonorad {

/// Refractive index of the host liquid: either a constant n or a table of
/// (omega [rad/s], n) rows with linear interpolation and no extrapolation.
class MediumSpec {
 public:
  enum class Mode { kConstant, kTabulated };

  static MediumSpec constant(double n);
  static MediumSpec tabulated(std::vector<std::pair<double, double>> rows);

  Mode mode() const { return mode_; }
  double n_const() const { return n_const_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

 private:
  MediumSpec() = default;
  Mode mode_ = Mode::kConstant;
  double n_const_ = 0.0;
  std::vector<std::pair<double, double>> table_;
};

/// Model-profile parameters, all SI.
struct RunParams {
  double r0 = 0.0;      // ambient radius [m]
  double rmin = 0.0;    // minimum radius [m]
  double gamma = 0.0;   // collapse turn-around time [s]
  double period = 0.0;  // acoustic period / evaluation window [s]
  double center = 0.0;  // dip position inside the window [s]

  void validate() const;  // throws std::invalid_argument
};

/// n(omega); range error outside a tabulated grid.
double refractive_index(const MediumSpec& medium, double omega);

/// Normal-incidence reflection probability (n-1)^2/(n+1)^2.
double reflection_probability(double n);

/// Parses a two-column "omega_rad_per_s n" text table, '#' comments.
MediumSpec load_dispersion_table(const std::string& path);

}  // namespace sonorad
