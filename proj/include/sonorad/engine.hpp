#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "sonorad/medium.hpp"
#include "sonorad/modes.hpp"
#include "sonorad/profile.hpp"

namespace sonorad::engine {

struct EngineConfig {
  int tau_points = 8192;
  double omega_prime_max = 0.0;  // rad/s; 0 derives 8/gamma_eff from the profile
  int omega_prime_points = 256;
  modes::TruncationPolicy l_policy{};
  double rel_tol = 1e-4;
  bool sw_fast_path = true;
  double sw_coefficient = modes::kSwCoefficient;  // config-visible constant
  int threads = 0;                                // 0 = hardware concurrency

  void validate() const;
};

enum RowFlag : int {
  kRowOk = 0,
  kRowClampedNegative = 1,
  kRowAccuracyError = 2,
};

struct SpectrumRow {
  double omega = 0.0;              // rad/s
  double lambda = 0.0;             // m
  double p = 0.0;                  // J s
  double cumulative_energy = 0.0;  // J, trapezoid over emitted rows
  int flag = kRowOk;
  std::string message;             // set when flagged
};

struct SpectrumTable {
  std::vector<SpectrumRow> rows;
  double total_energy = 0.0;  // J, integral over the row grid
  std::string config_echo;
  std::string profile_echo;
};

/// Heuristic pair-frequency cutoff 8/gamma_eff for the profile's dip width.
double default_omega_prime_max(const profile::BubbleProfile& p);

/// Time transform of one (l, pol) channel at pair frequency omega + omega',
/// in natural units (time measured in meters):
/// T = integral dtau beta(tau) e^{i(omega+omega')tau} F_l(k, k', R(tau)).
std::complex<double> pair_transform(int l, modes::Pol pol, double omega,
                                    double omega_prime,
                                    const profile::BubbleProfile& p,
                                    const MediumSpec& medium,
                                    const EngineConfig& cfg);

/// Pair-emission kernel sum_l (2l+1) sum_pol |T_l^pol|^2 at (omega, omega');
/// uses the short-wavelength surrogate kernel when cfg.sw_fast_path is set.
double pair_rate(double omega, double omega_prime,
                 const profile::BubbleProfile& p, const MediumSpec& medium,
                 const EngineConfig& cfg);

/// Angle-integrated spectral density P(omega) [J s].
double spectral_density(double omega, const profile::BubbleProfile& p,
                        const MediumSpec& medium, const EngineConfig& cfg);

/// Total radiated energy per collapse window [J].
double total_energy(const profile::BubbleProfile& p, const MediumSpec& medium,
                    const EngineConfig& cfg);

/// Spectrum over a strictly increasing omega grid; per-row accuracy errors are
/// collected in row flags, not thrown.
SpectrumTable spectrum_sweep(std::span<const double> omega_grid,
                             const profile::BubbleProfile& p,
                             const MediumSpec& medium, const EngineConfig& cfg);

}  // namespace sonorad::engine
