#include "sonorad/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sonorad/constants.hpp"
#include "sonorad/errors.hpp"
#include "sonorad/numutil.hpp"

namespace sonorad::engine {

namespace {

using constants::c;
using constants::hbar;

constexpr double kMinPointsPerOscillation = 8.0;

struct TimeGrid {
  std::vector<double> tau;   // natural time (m), window start at 0
  std::vector<double> w;     // trapezoid weights (m)
  std::vector<double> beta;  // surface velocity / c
  std::vector<double> r;     // radius (m)
  double dtau = 0.0;         // m
};

TimeGrid make_time_grid(const profile::BubbleProfile& p, const EngineConfig& cfg) {
  const auto [t0, t1] = p.window();
  const int n = cfg.tau_points;
  TimeGrid g;
  g.tau.resize(n);
  g.w.resize(n);
  g.beta.resize(n);
  g.r.resize(n);
  const double dt = (t1 - t0) / (n - 1);
  g.dtau = c * dt;
  for (int i = 0; i < n; ++i) {
    const double t = t0 + i * dt;
    g.tau[i] = c * (t - t0);
    g.w[i] = g.dtau * ((i == 0 || i + 1 == n) ? 0.5 : 1.0);
    g.beta[i] = p.beta(t);
    g.r[i] = p.radius(t);
  }
  return g;
}

void check_resolution(const TimeGrid& g, double omega_pair_nat, int tau_points) {
  if (omega_pair_nat * g.dtau >
      2.0 * std::numbers::pi / kMinPointsPerOscillation) {
    std::ostringstream os;
    os << "engine: pair frequency " << omega_pair_nat * c
       << " rad/s is unresolved on " << tau_points
       << " tau points (fewer than " << kMinPointsPerOscillation
       << " points per oscillation); increase engine.tau_points";
    throw accuracy_error(os.str());
  }
}

// e^{i omega tau_i} over the uniform grid by complex rotation.
class PhaseWalker {
 public:
  PhaseWalker(double omega_nat, double dtau)
      : rot_(std::polar(1.0, omega_nat * dtau)), z_(1.0, 0.0) {}
  std::complex<double> value() const { return z_; }
  void advance() { z_ *= rot_; }

 private:
  std::complex<double> rot_;
  std::complex<double> z_;
};

struct KahanComplex {
  num::Kahan re, im;
  void add(const std::complex<double>& v) {
    re.add(v.real());
    im.add(v.imag());
  }
  std::complex<double> value() const { return {re.sum, im.sum}; }
};

// Full-kernel accumulation of all per-l channel transforms at (k, k').
struct ChannelTransforms {
  std::vector<std::complex<double>> t_te;
  std::vector<std::complex<double>> t_tm;
  int lmax = 0;
};

ChannelTransforms channel_transforms(double k_nat, double kp_nat,
                                     const TimeGrid& grid, double n,
                                     const modes::TruncationPolicy& policy) {
  double r_max = 0.0;
  for (double r : grid.r) r_max = std::max(r_max, r);
  const double x_max = std::max(k_nat, kp_nat) * r_max;
  const int lmax = policy.l_max(n, x_max);

  ChannelTransforms ct;
  ct.lmax = lmax;
  ct.t_te.assign(lmax + 1, {});
  ct.t_tm.assign(lmax + 1, {});
  std::vector<KahanComplex> acc_te(lmax + 1), acc_tm(lmax + 1);

  PhaseWalker phase((k_nat + kp_nat), grid.dtau);
  for (std::size_t i = 0; i < grid.tau.size(); ++i) {
    const double r = grid.r[i];
    const auto side_k = modes::side_arrays(lmax, n, k_nat * r);
    const auto side_p = modes::side_arrays(lmax, n, kp_nat * r);
    const std::complex<double> common = grid.w[i] * grid.beta[i] * phase.value();
    const double x_k = k_nat * r, x_p = kp_nat * r;
    for (int l = 1; l <= lmax; ++l) {
      const double ll1 = l * (l + 1.0);
      const std::complex<double> f_te =
          ll1 * side_k.u_te[l] * side_p.u_te[l] + side_k.v_te[l] * side_p.v_te[l];
      const std::complex<double> f_tm =
          (x_k * x_p - ll1) * side_k.u_tm[l] * side_p.u_tm[l];
      acc_te[l].add(common * f_te);
      acc_tm[l].add(common * f_tm);
    }
    phase.advance();
  }
  for (int l = 0; l <= lmax; ++l) {
    ct.t_te[l] = acc_te[l].value();
    ct.t_tm[l] = acc_tm[l].value();
  }
  return ct;
}

double kernel_full(double k_nat, double kp_nat, const TimeGrid& grid, double n,
                   const modes::TruncationPolicy& policy) {
  const ChannelTransforms ct = channel_transforms(k_nat, kp_nat, grid, n, policy);
  num::Kahan sum;
  double window[5] = {0, 0, 0, 0, 0};
  for (int l = 1; l <= ct.lmax; ++l) {
    const double term = (2.0 * l + 1.0) *
                        (std::norm(ct.t_te[l]) + std::norm(ct.t_tm[l]));
    sum.add(term);
    window[l % 5] = term;
  }
  if (policy.rel_tol > 0.0 && ct.lmax >= 5) {
    const double tail =
        window[0] + window[1] + window[2] + window[3] + window[4];
    if (!(tail <= policy.rel_tol * std::fabs(sum.sum))) {
      throw truncation_error(
          "engine: l-sum tail not converged at l_max = " +
              std::to_string(ct.lmax) + "; raise l_max_cap",
          tail);
    }
  }
  return sum.sum;
}

double kernel_sw(double k_nat, double kp_nat, const TimeGrid& grid,
                 double coefficient) {
  KahanComplex m;
  PhaseWalker phase(k_nat + kp_nat, grid.dtau);
  for (std::size_t i = 0; i < grid.tau.size(); ++i) {
    m.add(grid.w[i] * grid.beta[i] * grid.r[i] * phase.value());
    phase.advance();
  }
  return coefficient * k_nat * kp_nat * std::norm(m.value());
}

// Log-linear decay fit of the trailing envelope; returns the extrapolated
// remainder beyond the grid edge, or throws if the tail does not decay.
// Nodes are bin-averaged first: the full-kernel integrand oscillates across
// mode resonances, and a raw fit would mistake a spike for growth.
double tail_beyond_grid(const std::vector<double>& x,
                        const std::vector<double>& f, double advise_key,
                        const char* advise) {
  const std::size_t n = x.size();
  const std::size_t first = n - std::max<std::size_t>(4, n / 2);
  const std::size_t span = n - first;
  const std::size_t bins = std::min<std::size_t>(8, span / 2);
  if (bins < 3) return 0.0;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  double last_mean = 0.0, last_center = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = first + b * span / bins;
    const std::size_t hi = first + (b + 1) * span / bins;
    double mean = 0.0, center = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      mean += std::fabs(f[i]);
      center += x[i];
    }
    mean /= (hi - lo);
    center /= (hi - lo);
    if (!(mean > 0.0)) continue;
    const double ly = std::log(mean);
    sx += center;
    sy += ly;
    sxx += center * center;
    sxy += center * ly;
    ++m;
    last_mean = mean;
    last_center = center;
  }
  if (m < 3) return 0.0;  // tail already underflowed to zero
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  const double slope = (m * sxy - sx * sy) / denom;
  if (!(slope < 0.0)) {
    std::ostringstream os;
    os << advise << " (tail not decaying near " << advise_key << ")";
    throw accuracy_error(os.str());
  }
  const double b = -slope;
  const double f_edge = last_mean * std::exp(slope * (x[n - 1] - last_center));
  return f_edge / b;  // integral of f(edge) e^{-b (x-edge)}
}

std::string format_config_echo(const EngineConfig& cfg, double omega_prime_max) {
  std::ostringstream os;
  os.precision(17);
  os << "tau_points=" << cfg.tau_points
     << " omega_prime_max=" << omega_prime_max
     << " omega_prime_points=" << cfg.omega_prime_points
     << " l_max_cap=" << cfg.l_policy.l_max_cap << " rel_tol=" << cfg.rel_tol
     << " sw_fast_path=" << (cfg.sw_fast_path ? 1 : 0)
     << " sw_coefficient=" << cfg.sw_coefficient;
  return os.str();
}

std::string format_profile_echo(const profile::BubbleProfile& p) {
  std::ostringstream os;
  os.precision(17);
  if (p.kind() == profile::BubbleProfile::Kind::kLorentzianDip) {
    const auto& par = p.params();
    os << "lorentzian_dip R0=" << par.r0 << " Rmin=" << par.rmin
       << " gamma=" << par.gamma << " period=" << par.period
       << " center=" << par.center;
  } else {
    const auto [t0, t1] = p.window();
    os << "tabulated window=[" << t0 << ", " << t1 << "]";
  }
  return os.str();
}

double resolved_omega_prime_max(const profile::BubbleProfile& p,
                                const EngineConfig& cfg) {
  return cfg.omega_prime_max > 0.0 ? cfg.omega_prime_max
                                   : default_omega_prime_max(p);
}

}  // namespace

void EngineConfig::validate() const {
  if (tau_points < 64) {
    throw std::invalid_argument("engine: tau_points must be >= 64");
  }
  if (omega_prime_points < 16) {
    throw std::invalid_argument("engine: omega_prime_points must be >= 16");
  }
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
    throw std::invalid_argument("engine: rel_tol must be in (0, 1e-2]");
  }
  if (omega_prime_max < 0.0) {
    throw std::invalid_argument("engine: omega_prime_max must be >= 0");
  }
  if (!(sw_coefficient > 0.0)) {
    throw std::invalid_argument("engine: sw_coefficient must be positive");
  }
}

double default_omega_prime_max(const profile::BubbleProfile& p) {
  if (p.kind() == profile::BubbleProfile::Kind::kLorentzianDip) {
    return 8.0 / p.params().gamma;
  }
  // dip width from the half-maximum span of |dR^2/dt|
  const auto [t0, t1] = p.window();
  const int n = 8192;
  double peak = 0.0;
  std::vector<double> mag(n);
  for (int i = 0; i < n; ++i) {
    const double t = t0 + (t1 - t0) * i / (n - 1);
    mag[i] = std::fabs(p.dr2dt(t));
    peak = std::max(peak, mag[i]);
  }
  if (peak == 0.0) {
    // static profile: no emission at any frequency; any finite grid is fine
    return 8.0 / (0.5 * (t1 - t0));
  }
  int lo = 0, hi = n - 1;
  while (lo < n && mag[lo] < 0.5 * peak) ++lo;
  while (hi > 0 && mag[hi] < 0.5 * peak) --hi;
  const double width = (t1 - t0) * (hi - lo + 1) / (n - 1);
  const double gamma_eff = 0.5 * std::max(width, (t1 - t0) / (n - 1));
  return 8.0 / gamma_eff;
}

std::complex<double> pair_transform(int l, modes::Pol pol, double omega,
                                    double omega_prime,
                                    const profile::BubbleProfile& p,
                                    const MediumSpec& medium,
                                    const EngineConfig& cfg) {
  cfg.validate();
  if (l < 1) throw std::domain_error("pair_transform: l must be >= 1");
  if (!(omega > 0.0) || !(omega_prime > 0.0)) {
    throw std::domain_error("pair_transform: frequencies must be positive");
  }
  const double n = refractive_index(medium, omega);
  const TimeGrid grid = make_time_grid(p, cfg);
  const double k_nat = omega / c, kp_nat = omega_prime / c;
  check_resolution(grid, k_nat + kp_nat, cfg.tau_points);

  KahanComplex acc;
  PhaseWalker phase(k_nat + kp_nat, grid.dtau);
  for (std::size_t i = 0; i < grid.tau.size(); ++i) {
    if (grid.beta[i] != 0.0) {
      const std::complex<double> f =
          modes::force_factor(l, pol, n, k_nat, kp_nat, grid.r[i]);
      acc.add(grid.w[i] * grid.beta[i] * phase.value() * f);
    }
    phase.advance();
  }
  return acc.value();
}

double pair_rate(double omega, double omega_prime,
                 const profile::BubbleProfile& p, const MediumSpec& medium,
                 const EngineConfig& cfg) {
  cfg.validate();
  if (!(omega > 0.0) || !(omega_prime > 0.0)) {
    throw std::domain_error("pair_rate: frequencies must be positive");
  }
  const double n = refractive_index(medium, omega);
  const TimeGrid grid = make_time_grid(p, cfg);
  const double k_nat = omega / c, kp_nat = omega_prime / c;
  check_resolution(grid, k_nat + kp_nat, cfg.tau_points);
  return cfg.sw_fast_path
             ? kernel_sw(k_nat, kp_nat, grid, cfg.sw_coefficient)
             : kernel_full(k_nat, kp_nat, grid, n, cfg.l_policy);
}

double spectral_density(double omega, const profile::BubbleProfile& p,
                        const MediumSpec& medium, const EngineConfig& cfg) {
  cfg.validate();
  if (!(omega > 0.0)) {
    throw std::domain_error("spectral_density: omega must be positive");
  }
  const double n = refractive_index(medium, omega);
  const double w_max = resolved_omega_prime_max(p, cfg);
  const int nw = cfg.omega_prime_points;
  const double dw = w_max / nw;

  const TimeGrid grid = make_time_grid(p, cfg);
  const double k_nat = omega / c;
  check_resolution(grid, (omega + w_max) / c, cfg.tau_points);

  std::vector<double> contrib(nw), wp_nodes(nw);
  num::parallel_for(nw, cfg.threads, [&](int j) {
    const double wp = (j + 0.5) * dw;
    wp_nodes[j] = wp;
    const double kp_nat = wp / c;
    const double kern =
        cfg.sw_fast_path
            ? kernel_sw(k_nat, kp_nat, grid, cfg.sw_coefficient)
            : kernel_full(k_nat, kp_nat, grid, n, cfg.l_policy);
    const double pair = (omega + wp) / c;
    contrib[j] = kp_nat / (pair * pair) * kern;
  });

  num::Kahan sum;
  for (int j = 0; j < nw; ++j) sum.add(contrib[j]);
  const double dw_nat = dw / c;
  const double integral = sum.sum * dw_nat;

  // convergence check: extrapolated remainder beyond the omega' grid
  std::vector<double> wp_nat(nw);
  for (int j = 0; j < nw; ++j) wp_nat[j] = wp_nodes[j] / c;
  const double tail = tail_beyond_grid(
      wp_nat, contrib, omega, "engine: raise engine.omega_prime_max");
  if (!(tail <= cfg.rel_tol * std::fabs(integral) || integral == 0.0)) {
    std::ostringstream os;
    os << "engine: omega' tail contributes " << tail << " vs integral "
       << integral << " at omega = " << omega
       << "; raise engine.omega_prime_max";
    throw accuracy_error(os.str());
  }

  const double n2 = n * n;
  const double pref =
      (n2 - 1.0) * (n2 - 1.0) /
      (4.0 * std::numbers::pi * std::numbers::pi * n2);
  const double omega_nat = omega / c;
  const double p_nat = pref * omega_nat * omega_nat * integral;
  return hbar * p_nat;
}

double total_energy(const profile::BubbleProfile& p, const MediumSpec& medium,
                    const EngineConfig& cfg) {
  cfg.validate();
  const double w_max = resolved_omega_prime_max(p, cfg);
  const int nw = cfg.omega_prime_points;
  const double dw = w_max / nw;

  std::vector<double> omegas(nw), pvals(nw);
  for (int j = 0; j < nw; ++j) omegas[j] = (j + 0.5) * dw;
  // each spectral_density call parallelizes internally; rows stay ordered
  for (int j = 0; j < nw; ++j) {
    pvals[j] = spectral_density(omegas[j], p, medium, cfg);
  }

  num::Kahan sum;
  for (int j = 0; j < nw; ++j) sum.add(pvals[j]);
  double energy = sum.sum * dw;
  energy += tail_beyond_grid(omegas, pvals, w_max,
                             "engine: raise engine.omega_prime_max");
  return energy;
}

SpectrumTable spectrum_sweep(std::span<const double> omega_grid,
                             const profile::BubbleProfile& p,
                             const MediumSpec& medium, const EngineConfig& cfg) {
  cfg.validate();
  if (omega_grid.empty()) {
    throw std::invalid_argument("spectrum_sweep: empty omega grid");
  }
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    if (!(omega_grid[i] > 0.0)) {
      throw std::invalid_argument("spectrum_sweep: omega grid must be positive");
    }
    if (i > 0 && !(omega_grid[i] > omega_grid[i - 1])) {
      throw std::invalid_argument(
          "spectrum_sweep: omega grid must be strictly increasing");
    }
  }

  SpectrumTable table;
  table.rows.resize(omega_grid.size());
  for (std::size_t i = 0; i < omega_grid.size(); ++i) {
    SpectrumRow& row = table.rows[i];
    row.omega = omega_grid[i];
    row.lambda = 2.0 * std::numbers::pi * c / row.omega;
    try {
      row.p = spectral_density(row.omega, p, medium, cfg);
      row.flag = kRowOk;
    } catch (const accuracy_error& err) {
      row.p = std::numeric_limits<double>::quiet_NaN();
      row.flag = kRowAccuracyError;
      row.message = err.what();
    }
  }

  // clamp quadrature-noise negatives against the band maximum
  double band_max = 0.0;
  for (const auto& row : table.rows) {
    if (row.flag == kRowOk) band_max = std::max(band_max, std::fabs(row.p));
  }
  for (auto& row : table.rows) {
    if (row.flag == kRowOk && row.p < 0.0) {
      if (std::fabs(row.p) <= cfg.rel_tol * band_max) {
        row.p = 0.0;
        row.flag = kRowClampedNegative;
      } else {
        row.flag = kRowAccuracyError;
        row.message = "negative spectral density beyond the noise floor";
      }
    }
  }

  // cumulative trapezoid over emitted rows; flagged rows contribute nothing
  num::Kahan cum;
  double prev_omega = 0.0, prev_p = 0.0;
  bool have_prev = false;
  for (auto& row : table.rows) {
    const double p_here = (row.flag == kRowAccuracyError) ? 0.0 : row.p;
    if (have_prev) {
      cum.add(0.5 * (p_here + prev_p) * (row.omega - prev_omega));
    }
    prev_omega = row.omega;
    prev_p = p_here;
    have_prev = true;
    row.cumulative_energy = cum.sum;
  }
  table.total_energy = cum.sum;
  table.config_echo = format_config_echo(cfg, resolved_omega_prime_max(p, cfg));
  table.profile_echo = format_profile_echo(p);
  return table;
}

}  // namespace sonorad::engine
