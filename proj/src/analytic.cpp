#include "sonorad/analytic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "sonorad/constants.hpp"
#include "sonorad/errors.hpp"

namespace sonorad::analytic {

namespace {

using constants::c;
using constants::hbar;
using constants::kB;

void check_n(double n) {
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw std::domain_error("analytic: refractive index must be >= 1");
  }
}

// 32-point Gauss-Legendre rule on [-1, 1], positive half (mirrored in use).
constexpr std::array<double, 16> kGlNode = {
    0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745,
    0.3318686022821276497, 0.4213512761306353454, 0.5068999089322293900,
    0.5877157572407623290, 0.6630442669302152009, 0.7321821187402896804,
    0.7944837959679424069, 0.8493676137325699701, 0.8963211557660521240,
    0.9349060759377396891, 0.9647622555875064307, 0.9856115115452683354,
    0.9972638618494815635};
constexpr std::array<double, 16> kGlWeight = {
    0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654,
    0.0911738786957638847, 0.0876520930044038111, 0.0833119242269467552,
    0.0781938957870703065, 0.0723457941088485062, 0.0658222227763618468,
    0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
    0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706,
    0.0070186100094700966};

template <typename F>
double gl_panel(const F& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < kGlNode.size(); ++i) {
    acc += kGlWeight[i] *
           (f(mid - half * kGlNode[i]) + f(mid + half * kGlNode[i]));
  }
  return acc * half;
}

// Semi-infinite integral of a decaying integrand with characteristic decay
// length L: geometric panels until they stop contributing. omega_stop bounds
// the domain for sampled transforms, whose spectra bottom out on an
// interpolation-noise floor instead of decaying forever.
template <typename F>
double integrate_decay(const F& f, double decay_length,
                       double omega_stop = std::numeric_limits<double>::infinity()) {
  double total = 0.0;
  double prev_panel = 0.0;
  double a = 0.0;
  double width = 4.0 * decay_length;
  int small_run = 0;
  for (int k = 0; k < 40; ++k) {
    const double panel = gl_panel(f, a, a + width);
    total += panel;
    a += width;
    if (a >= omega_stop) return total;
    if (k >= 2) {
      if (std::fabs(panel) < 1e-12 * std::fabs(total)) {
        if (++small_run >= 2) return total;
      } else {
        small_run = 0;
      }
      if (std::fabs(panel) > 0.9 * std::fabs(prev_panel) && k > 6) {
        throw accuracy_error(
            "analytic: Omega integrand does not decay; tail not integrable");
      }
    }
    prev_panel = panel;
    if (k >= 4) width *= 2.0;
  }
  throw accuracy_error("analytic: Omega tail did not converge within panel budget");
}

// |FT of dR^2/dtau|^2 at the pair frequency, natural units (time in meters).
// The model kind has a closed transform; tabulated profiles use a trapezoid FT.
class PairTransform {
 public:
  explicit PairTransform(const profile::BubbleProfile& p) : p_(p) {
    if (p.kind() == profile::BubbleProfile::Kind::kTabulated) {
      const auto [t0, t1] = p.window();
      const int nt = 8192;
      dt_ = (t1 - t0) / (nt - 1);
      g_.resize(nt);
      t_.resize(nt);
      for (int i = 0; i < nt; ++i) {
        t_[i] = t0 + i * dt_;
        g_[i] = p.dr2dt(t_[i]);
      }
    }
  }

  double squared(double omega_nat) const {
    if (p_.kind() == profile::BubbleProfile::Kind::kLorentzianDip) {
      const auto& par = p_.params();
      const double gn = c * par.gamma;
      const double dr2 = par.r0 * par.r0 - par.rmin * par.rmin;
      const double amp = std::numbers::pi * gn * omega_nat * dr2 *
                         std::exp(-gn * omega_nat);
      return amp * amp;
    }
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < g_.size(); ++i) {
      const double w = (i == 0 || i + 1 == g_.size()) ? 0.5 : 1.0;
      const double phase = omega_nat * c * t_[i];
      re += w * g_[i] * std::cos(phase);
      im += w * g_[i] * std::sin(phase);
    }
    re *= dt_;  // FT of dR^2/dtau over natural time equals dt-weighted sum
    im *= dt_;
    return re * re + im * im;
  }

  bool is_zero() const {
    if (p_.kind() == profile::BubbleProfile::Kind::kLorentzianDip) return false;
    for (double v : g_) {
      if (v != 0.0) return false;
    }
    return true;
  }

  // decay length of the Omega^4 |FT|^2 integrand and, for sampled
  // transforms, the frequency beyond which the data is noise floor
  std::pair<double, double> decay_scales_nat() const {
    if (p_.kind() == profile::BubbleProfile::Kind::kLorentzianDip) {
      return {1.0 / (2.0 * c * p_.params().gamma),
              std::numeric_limits<double>::infinity()};
    }
    const auto [t0, t1] = p_.window();
    double omega = 2.0 * std::numbers::pi / (c * (t1 - t0));
    double peak = 0.0;
    double o_peak = omega;
    for (int j = 0; j < 90; ++j) {
      const double v = omega * omega * omega * omega * squared(omega);
      if (v > peak) {
        peak = v;
        o_peak = omega;
      } else if (peak > 0.0 && omega > o_peak && v < 1e-8 * peak) {
        return {omega / 18.0, omega};  // ~e-fold scale and a safe cutoff
      }
      omega *= 1.4;
    }
    throw accuracy_error(
        "analytic: pair transform of tabulated profile does not decay");
  }

 private:
  const profile::BubbleProfile& p_;
  std::vector<double> g_, t_;
  double dt_ = 0.0;
};

}  // namespace

double energy_deriv_coeff() { return 1.0 / (480.0 * std::numbers::pi); }
double energy_quad_coeff() {
  return 1.0 / (960.0 * std::numbers::pi * std::numbers::pi);
}

double model_energy(const RunParams& params, double n) {
  params.validate();
  check_n(n);
  const double n2 = n * n;
  const double dr2 = params.r0 * params.r0 - params.rmin * params.rmin;
  const double pref =
      kCoefficientSw * kEnergyClosedCoeff * (n2 - 1.0) * (n2 - 1.0) / n2;
  const double g = params.gamma;
  return pref * hbar / (c * c * c * c * g * g * g * g * g) * dr2 * dr2;
}

double model_spectrum_at(const RunParams& params, double n, double omega) {
  params.validate();
  check_n(n);
  if (omega < 0.0) {
    throw std::domain_error("model_spectrum_at: omega must be non-negative");
  }
  const double n2 = n * n;
  const double dr2 = params.r0 * params.r0 - params.rmin * params.rmin;
  const double pref =
      kCoefficientSw * kSpectrumClosedCoeff * (n2 - 1.0) * (n2 - 1.0) / n2;
  return pref * hbar / (c * c * c * c * params.gamma) * dr2 * dr2 * omega *
         omega * omega * std::exp(-2.0 * params.gamma * omega);
}

ModelResult model_result(const RunParams& params, double n) {
  ModelResult r;
  r.energy = model_energy(params, n);
  r.t_eff = effective_temperature(params.gamma);
  r.spectrum = [params, n](double omega) {
    return model_spectrum_at(params, n, omega);
  };
  return r;
}

double effective_temperature(double gamma_s) {
  if (!(gamma_s > 0.0)) {
    throw std::domain_error("effective_temperature: gamma must be positive");
  }
  return hbar / (2.0 * kB * gamma_s);
}

double energy_sw_quadrature(const profile::BubbleProfile& p, double n) {
  check_n(n);
  const double n2 = n * n;
  const PairTransform ft(p);
  if (ft.is_zero()) return 0.0;
  const auto [decay, stop] = ft.decay_scales_nat();
  const auto integrand = [&](double omega_nat) {
    const double o2 = omega_nat * omega_nat;
    return o2 * o2 * ft.squared(omega_nat);
  };
  const double integral = integrate_decay(integrand, decay, stop);
  const double w_nat = kCoefficientSw * energy_quad_coeff() * (n2 - 1.0) *
                       (n2 - 1.0) / n2 * integral;
  return hbar * c * w_nat;
}

double energy_derivative_form(const profile::BubbleProfile& p, double n) {
  check_n(n);
  const double n2 = n * n;
  const auto [t0, t1] = p.window();

  double time_integral = 0.0;  // integral of (d^5 R^2/dt^5) R beta dt, SI
  if (p.kind() == profile::BubbleProfile::Kind::kLorentzianDip) {
    const auto& par = p.params();
    const auto f = [&](double theta) {
      const double cos_th = std::cos(theta);
      const double t = par.center + par.gamma * std::tan(theta);
      const double jac = par.gamma / (cos_th * cos_th);
      return p.dr2_deriv(5, t) * p.radius(t) * p.beta(t) * jac;
    };
    const double th0 = std::atan((t0 - par.center) / par.gamma);
    const double th1 = std::atan((t1 - par.center) / par.gamma);
    const int panels = 24;
    for (int k = 0; k < panels; ++k) {
      const double a = th0 + (th1 - th0) * k / panels;
      const double b = th0 + (th1 - th0) * (k + 1) / panels;
      time_integral += gl_panel(f, a, b);
    }
  } else {
    // fifth derivative by high-order central differences on R^2, gated by a
    // two-resolution agreement check
    const double span = t1 - t0;
    const double h = span / 256.0;
    const auto q = [&](double t) {
      const double r = p.radius(t);
      return r * r;
    };
    const auto d5_at = [&](double t, double step) {
      return (-q(t - 3 * step) + 4.0 * q(t - 2 * step) - 5.0 * q(t - step) +
              5.0 * q(t + step) - 4.0 * q(t + 2 * step) + q(t + 3 * step)) /
             (2.0 * std::pow(step, 5));
    };
    const int probes = 33;
    double scale = 0.0;
    std::vector<double> v_h(probes), v_h2(probes), tp(probes);
    for (int i = 0; i < probes; ++i) {
      tp[i] = t0 + span * (0.1 + 0.8 * i / (probes - 1));
      v_h[i] = d5_at(tp[i], h);
      v_h2[i] = d5_at(tp[i], 0.5 * h);
      scale = std::max(scale, std::fabs(v_h2[i]));
    }
    for (int i = 0; i < probes; ++i) {
      if (std::fabs(v_h[i] - v_h2[i]) > 0.05 * scale + 1e-280) {
        throw std::domain_error(
            "energy_derivative_form: fifth derivative of R^2 is not resolved; "
            "profiles with discontinuous low-order velocity derivatives give a "
            "divergent radiated energy");
      }
    }
    const int nt = 2048;
    const double a = t0 + 3 * h, b = t1 - 3 * h;
    const double dt = (b - a) / (nt - 1);
    for (int i = 0; i < nt; ++i) {
      const double t = a + i * dt;
      const double w = (i == 0 || i + 1 == nt) ? 0.5 : 1.0;
      time_integral += w * d5_at(t, 0.5 * h) * p.radius(t) * p.beta(t) * dt;
    }
  }

  const double pref =
      kCoefficientSw * energy_deriv_coeff() * (n2 - 1.0) * (n2 - 1.0) / n2;
  // d^5R^2/dt^5 carries 1/s^5, dt carries s; three powers of c remain after
  // converting the natural-unit expression back to SI alongside hbar.
  return pref * hbar * time_integral / (c * c * c);
}

}  // namespace sonorad::analytic
