#pragma once

#include <complex>
#include <vector>

namespace sonorad::modes {

enum class Pol { kTE, kTM };

/// Numerically determined coefficient of the short-wavelength limit of the
/// mode sum; also re-derived at runtime by the acceptance suite.
inline constexpr double kSwCoefficient = 1.16;

/// Continuity-condition factors at the cavity surface for given (l, n, x=kR).
struct ContinuityFactors {
  double n_te;
  double d_te;
  double n_tm;
  double d_tm;
};

/// Interior-mode normalization S_l^-1 and phase shift delta_l.
struct ModeNormalization {
  std::complex<double> s_inv;
  double delta;  // rad, atan2 branch in (-pi, pi]
  Pol pol;
  int l;
  double n;
  double x;  // kR
};

/// Truncation policy for the l-sum. rel_tol <= 0 disables the convergence
/// requirement (sum runs to the cap), used by fixed-l toy instances.
struct TruncationPolicy {
  int l_max_cap = 20000;
  double rel_tol = 1e-8;
  double growth = 1.25;
  int margin = 40;

  int l_max(double n, double x_max) const;
};

/// Per-(n, x) arrays over l combining normalization and radial factors:
/// u_te = S_TE^-1 j_l(x), v_te = S_TE^-1 [x j_l(x)]', u_tm = S_TM^-1 j_l(x).
/// Entries at l > l_limit are exact zeros (converged tail).
struct SideArrays {
  std::vector<std::complex<double>> u_te;
  std::vector<std::complex<double>> v_te;
  std::vector<std::complex<double>> u_tm;
  double x = 0.0;
  int l_limit = 0;
};

ContinuityFactors continuity_factors(int l, double n, double x);

ModeNormalization normalization(int l, Pol pol, double n, double x);

SideArrays side_arrays(int lmax, double n, double x);

/// Per-l, per-polarization radial factor: the product of the two interior
/// normalizations with the real radial bracket. The tau-independent
/// (-1)^l/(kk') and global sqrt(omega omega') prefactors are excluded here;
/// they are absorbed by the spectral prefactors downstream.
std::complex<double> force_factor(int l, Pol pol, double n, double k, double kp,
                                  double r);

/// l-summed bilinear of force factors at two radii:
/// sum_{l>=1} (2l+1) [F_l^TE(r_a) conj(F_l^TE(r_b)) + F_l^TM(r_a) conj(F_l^TM(r_b))].
std::complex<double> aux_im(double k, double kp, double r_a, double r_b, double n,
                            const TruncationPolicy& policy = {});

/// Short-wavelength surrogate 1.16 k k' r_a r_b.
double aux_im_sw(double k, double kp, double r_a, double r_b);

}  // namespace sonorad::modes
