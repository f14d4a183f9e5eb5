#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sonorad/engine.hpp"
#include "sonorad/medium.hpp"
#include "sonorad/profile.hpp"

namespace sonorad::config {

struct SpectrumGrid {
  double omega_min = 0.0;  // rad/s; 0 = derive from the profile
  double omega_max = 0.0;
  int points = 120;
  bool log_spacing = true;
};

struct OutputSpec {
  std::string path = "spectrum.csv";
  bool emit_wavelength_column = true;
  int precision_digits = 17;
};

struct RunConfig {
  MediumSpec medium = MediumSpec::constant(1.3);
  std::optional<profile::BubbleProfile> bubble;
  engine::EngineConfig engine{};
  SpectrumGrid spectrum{};
  OutputSpec output{};
  std::string resolved_json;  // fully resolved echo; re-parseable as a config

  const profile::BubbleProfile& profile_ref() const { return *bubble; }
};

/// Loads and validates a JSON run configuration. `overrides` are repeatable
/// "section.key=value" assignments applied before validation; `profile_file`
/// (when non-empty) overrides profile.profile_file. Unknown keys are errors.
RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides = {},
                          const std::string& profile_file = "");

/// Same, from a JSON document already in memory (origin names the source in
/// error messages).
RunConfig parse_run_config(const std::string& json_text,
                           const std::string& origin,
                           const std::vector<std::string>& overrides = {},
                           const std::string& profile_file = "");

/// The omega grid implied by the spectrum section (profile-derived defaults).
std::vector<double> make_omega_grid(const RunConfig& cfg);

}  // namespace sonorad::config
