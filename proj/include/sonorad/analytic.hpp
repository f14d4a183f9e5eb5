#pragma once

#include <functional>

#include "sonorad/medium.hpp"
#include "sonorad/profile.hpp"

namespace sonorad::analytic {

// Coefficient table of the short-wavelength model, kept in one place so every
// factor is auditable. kCoefficientSw is the numerically determined constant
// of the mode sum's short-wavelength limit; kEnergyRederived is the value the
// selftest re-derives at kR = 40..80 (config-visible via engine.sw_coefficient).
inline constexpr double kCoefficientSw = 1.16;
inline constexpr double kSwCoefficientRederived = 1.44485342;
inline constexpr double kEnergyClosedCoeff = 3.0 / 512.0;
inline constexpr double kSpectrumClosedCoeff = 1.0 / 64.0;
double energy_deriv_coeff();  // 1/(480 pi)
double energy_quad_coeff();   // 1/(960 pi^2)

struct ModelResult {
  double energy = 0.0;       // J
  double t_eff = 0.0;        // K
  std::function<double(double)> spectrum;  // omega [rad/s] -> P [J s]
};

/// Closed-form total energy of the Lorentzian-dip model, SI.
double model_energy(const RunParams& params, double n);

/// Closed-form spectral density of the model at omega, SI.
double model_spectrum_at(const RunParams& params, double n, double omega);

/// Closed forms bundled with the effective temperature.
ModelResult model_result(const RunParams& params, double n);

/// hbar / (2 kB gamma).
double effective_temperature(double gamma_s);

/// Short-wavelength energy via the Omega quadrature of the pair-frequency
/// transform |FT(dR^2/dtau)|^2; analytic transform for the model kind,
/// numerical transform for tabulated profiles.
double energy_sw_quadrature(const profile::BubbleProfile& p, double n);

/// Short-wavelength energy via the time-domain form with the fifth
/// derivative of R^2; requires five continuous derivatives.
double energy_derivative_form(const profile::BubbleProfile& p, double n);

}  // namespace sonorad::analytic
