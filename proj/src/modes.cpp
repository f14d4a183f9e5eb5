#include "sonorad/modes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sonorad/errors.hpp"
#include "sonorad/specfun.hpp"

namespace sonorad::modes {

namespace {

void check_pos(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw std::domain_error(std::string("modes: ") + name +
                            " must be finite and positive");
  }
}

void check_n(double n) {
  if (!(n >= 1.0) || !std::isfinite(n)) {
    throw std::domain_error("modes: refractive index must be >= 1");
  }
}

struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

int TruncationPolicy::l_max(double n, double x_max) const {
  const double raw = std::ceil(growth * n * x_max) + margin;
  return static_cast<int>(std::min<double>(raw, l_max_cap));
}

ContinuityFactors continuity_factors(int l, double n, double x) {
  check_n(n);
  check_pos(x, "x");
  const double nx = n * x;
  std::vector<double> jx(l + 2), jnx(l + 2), ynx(l + 2);
  specfun::sph_bessel_j_array(l + 1, x, jx);
  specfun::sph_bessel_j_array(l + 1, nx, jnx);
  specfun::sph_bessel_y_array(l + 1, nx, ynx);

  const double jpx = (l + 1.0) * jx[l] - x * jx[l + 1];
  const double jpnx = (l + 1.0) * jnx[l] - nx * jnx[l + 1];
  double ypnx;
  if (std::fabs(ynx[l]) >= specfun::kSaturate ||
      std::fabs(ynx[l + 1]) >= specfun::kSaturate) {
    ypnx = std::copysign(specfun::kSaturate, -nx * ynx[l + 1]);
  } else {
    ypnx = (l + 1.0) * ynx[l] - nx * ynx[l + 1];
  }

  ContinuityFactors f;
  f.n_te = jx[l] * jpnx - jnx[l] * jpx;
  f.d_te = ynx[l] * jpx - jx[l] * ypnx;
  f.n_tm = jx[l] * jpnx - n * n * jnx[l] * jpx;
  f.d_tm = n * n * ynx[l] * jpx - jx[l] * ypnx;
  return f;
}

ModeNormalization normalization(int l, Pol pol, double n, double x) {
  if (l < 1) {
    throw std::domain_error("normalization: l must be >= 1");
  }
  const ContinuityFactors f = continuity_factors(l, n, x);
  const double num = (pol == Pol::kTE) ? f.n_te : f.n_tm;
  const double den = (pol == Pol::kTE) ? f.d_te : f.d_tm;
  if (num == 0.0 && den == 0.0) {
    throw degenerate_mode_error(
        "normalization: continuity factors underflowed at l = " +
        std::to_string(l) + ", x = " + std::to_string(x));
  }
  const double x_pol = (pol == Pol::kTE) ? n * x : x;
  ModeNormalization norm;
  norm.s_inv = (1.0 / x_pol) * (1.0 / std::complex<double>(-den, -num));
  norm.delta = std::atan2(num, den);
  if (norm.delta == -M_PI) norm.delta = M_PI;  // branch contract (-pi, pi]
  norm.pol = pol;
  norm.l = l;
  norm.n = n;
  norm.x = x;
  return norm;
}

SideArrays side_arrays(int lmax, double n, double x) {
  check_n(n);
  check_pos(x, "x");
  const double nx = n * x;
  std::vector<double> jx(lmax + 2), jnx(lmax + 2), ynx(lmax + 2);
  specfun::sph_bessel_j_array(lmax + 1, x, jx);
  specfun::sph_bessel_j_array(lmax + 1, nx, jnx);
  specfun::sph_bessel_y_array(lmax + 1, nx, ynx);

  SideArrays side;
  side.x = x;
  side.u_te.assign(lmax + 1, {});
  side.v_te.assign(lmax + 1, {});
  side.u_tm.assign(lmax + 1, {});

  const double n2 = n * n;
  for (int l = 0; l <= lmax; ++l) {
    const double jpx = (l + 1.0) * jx[l] - x * jx[l + 1];
    const double jpnx = (l + 1.0) * jnx[l] - nx * jnx[l + 1];
    double ypnx;
    if (std::fabs(ynx[l]) >= specfun::kSaturate ||
        std::fabs(ynx[l + 1]) >= specfun::kSaturate) {
      ypnx = std::copysign(specfun::kSaturate, -nx * ynx[l + 1]);
    } else {
      ypnx = (l + 1.0) * ynx[l] - nx * ynx[l + 1];
    }

    const double n_te = jx[l] * jpnx - jnx[l] * jpx;
    const double d_te = ynx[l] * jpx - jx[l] * ypnx;
    const double n_tm = jx[l] * jpnx - n2 * jnx[l] * jpx;
    const double d_tm = n2 * ynx[l] * jpx - jx[l] * ypnx;

    // interior radial factor underflowed entirely: the channel is dark at
    // this l; keep the tail exactly zero instead of dividing 0/0
    if (jx[l] == 0.0 && n_te == 0.0 && d_te == 0.0) {
      side.u_te[l] = side.v_te[l] = side.u_tm[l] = {};
      continue;
    }

    const std::complex<double> s_te =
        (1.0 / nx) * (1.0 / std::complex<double>(-d_te, -n_te));
    const std::complex<double> s_tm =
        (1.0 / x) * (1.0 / std::complex<double>(-d_tm, -n_tm));

    side.u_te[l] = s_te * jx[l];
    side.v_te[l] = s_te * jpx;
    side.u_tm[l] = s_tm * jx[l];
  }

  int limit = 0;
  for (int l = lmax; l >= 0; --l) {
    if (side.u_te[l] != std::complex<double>{} ||
        side.v_te[l] != std::complex<double>{} ||
        side.u_tm[l] != std::complex<double>{}) {
      limit = l;
      break;
    }
  }
  side.l_limit = limit;
  return side;
}

std::complex<double> force_factor(int l, Pol pol, double n, double k, double kp,
                                  double r) {
  if (l < 1) throw std::domain_error("force_factor: l must be >= 1");
  check_pos(k, "k");
  check_pos(kp, "k'");
  check_pos(r, "R");
  const double xa = k * r;
  const double xb = kp * r;
  const ModeNormalization na = normalization(l, pol, n, xa);
  const ModeNormalization nb = normalization(l, pol, n, xb);
  const double ja = specfun::sph_bessel_j(l, xa);
  const double jb = specfun::sph_bessel_j(l, xb);
  if (pol == Pol::kTE) {
    const double jpa = specfun::riccati_derivs(l, xa).first;
    const double jpb = specfun::riccati_derivs(l, xb).first;
    const double bracket = l * (l + 1.0) * ja * jb + jpa * jpb;
    return na.s_inv * nb.s_inv * bracket;
  }
  const double bracket = (xa * xb - l * (l + 1.0)) * ja * jb;
  return na.s_inv * nb.s_inv * bracket;
}

std::complex<double> aux_im(double k, double kp, double r_a, double r_b, double n,
                            const TruncationPolicy& policy) {
  check_pos(k, "k");
  check_pos(kp, "k'");
  check_pos(r_a, "R_a");
  check_pos(r_b, "R_b");
  check_n(n);

  const double x_ka = k * r_a, x_pa = kp * r_a;
  const double x_kb = k * r_b, x_pb = kp * r_b;
  const double x_max = std::max({x_ka, x_pa, x_kb, x_pb});
  const int lmax = policy.l_max(n, x_max);

  const SideArrays a_k = side_arrays(lmax, n, x_ka);
  const SideArrays a_p = side_arrays(lmax, n, x_pa);
  const SideArrays b_k = side_arrays(lmax, n, x_kb);
  const SideArrays b_p = side_arrays(lmax, n, x_pb);

  Kahan re, im;
  double tail_window[5] = {0, 0, 0, 0, 0};
  const double l_turn = n * x_max;
  int zero_run = 0;
  bool converged = false;
  double last_mag = 0.0, prev_mag = 0.0;

  for (int l = 1; l <= lmax; ++l) {
    const double ll1 = l * (l + 1.0);
    const std::complex<double> f_te_a =
        ll1 * a_k.u_te[l] * a_p.u_te[l] + a_k.v_te[l] * a_p.v_te[l];
    const std::complex<double> f_te_b =
        ll1 * b_k.u_te[l] * b_p.u_te[l] + b_k.v_te[l] * b_p.v_te[l];
    const std::complex<double> f_tm_a =
        (x_ka * x_pa - ll1) * a_k.u_tm[l] * a_p.u_tm[l];
    const std::complex<double> f_tm_b =
        (x_kb * x_pb - ll1) * b_k.u_tm[l] * b_p.u_tm[l];

    const std::complex<double> term =
        (2.0 * l + 1.0) * (f_te_a * std::conj(f_te_b) + f_tm_a * std::conj(f_tm_b));
    re.add(term.real());
    im.add(term.imag());

    const double mag = std::abs(term);
    prev_mag = last_mag;
    last_mag = mag;
    tail_window[l % 5] = mag;

    if (mag == 0.0) {
      if (++zero_run >= 3 && l > l_turn) {
        converged = true;
        break;
      }
    } else {
      zero_run = 0;
    }

    if (policy.rel_tol > 0.0 && l > l_turn && l >= 5) {
      const double window_sum = tail_window[0] + tail_window[1] + tail_window[2] +
                                tail_window[3] + tail_window[4];
      const double partial = std::hypot(re.sum, im.sum);
      if (window_sum < policy.rel_tol * partial) {
        converged = true;
        break;
      }
    }
  }

  if (policy.rel_tol > 0.0 && !converged) {
    double tail = last_mag;
    if (prev_mag > 0.0 && last_mag < prev_mag) {
      const double ratio = last_mag / prev_mag;
      tail = last_mag * ratio / (1.0 - ratio);
    }
    const double partial = std::hypot(re.sum, im.sum);
    if (!(tail < policy.rel_tol * partial)) {
      throw truncation_error(
          "aux_im: l-sum not converged within l_max = " + std::to_string(lmax) +
              " (estimated tail " + std::to_string(tail) + ")",
          tail);
    }
  }

  return {re.sum, im.sum};
}

double aux_im_sw(double k, double kp, double r_a, double r_b) {
  check_pos(k, "k");
  check_pos(kp, "k'");
  check_pos(r_a, "R_a");
  check_pos(r_b, "R_b");
  return kSwCoefficient * k * kp * r_a * r_b;
}

}  // namespace sonorad::modes
