#include "mpfr_oracle.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace {

mpfr_prec_t prec_for(double x) {
  // series cancellation costs ~0.38 x decimal digits; pad generously
  return static_cast<mpfr_prec_t>(256 + 2.0 * std::fabs(x));
}

// j_l(x) by ascending series into `out` (initialized by caller).
void mp_sph_j(mpfr_t out, int l, double x, mpfr_prec_t prec) {
  mpfr_t xx, pref, q, term, sum, tmp;
  mpfr_inits2(prec, xx, pref, q, term, sum, tmp, (mpfr_ptr)nullptr);
  mpfr_set_d(xx, x, MPFR_RNDN);

  mpfr_set_ui(pref, 1, MPFR_RNDN);
  for (int k = 1; k <= l; ++k) {
    mpfr_mul(pref, pref, xx, MPFR_RNDN);
    mpfr_div_ui(pref, pref, 2 * k + 1, MPFR_RNDN);
  }
  // q = -x^2/2
  mpfr_sqr(q, xx, MPFR_RNDN);
  mpfr_div_si(q, q, -2, MPFR_RNDN);

  mpfr_set_ui(term, 1, MPFR_RNDN);
  mpfr_set_ui(sum, 1, MPFR_RNDN);
  for (int m = 1; m < 100000; ++m) {
    mpfr_mul(term, term, q, MPFR_RNDN);
    mpfr_div_ui(term, term, static_cast<unsigned long>(m) *
                                (2ul * (l + m) + 1ul),
                MPFR_RNDN);
    mpfr_add(sum, sum, term, MPFR_RNDN);
    // stop when |term| < 2^-prec * |sum|
    mpfr_abs(tmp, term, MPFR_RNDN);
    mpfr_mul_2si(tmp, tmp, prec, MPFR_RNDN);
    mpfr_abs(out, sum, MPFR_RNDN);
    if (mpfr_cmp(tmp, out) < 0) break;
  }
  mpfr_mul(out, pref, sum, MPFR_RNDN);
  mpfr_clears(xx, pref, q, term, sum, tmp, (mpfr_ptr)nullptr);
}

// y_0..y_lmax by upward recurrence into pre-initialized array ys.
void mp_sph_y_array(std::vector<mpfr_t>& ys, int lmax, double x,
                    mpfr_prec_t prec) {
  mpfr_t xx, s, cc, tmp;
  mpfr_inits2(prec, xx, s, cc, tmp, (mpfr_ptr)nullptr);
  mpfr_set_d(xx, x, MPFR_RNDN);
  mpfr_sin_cos(s, cc, xx, MPFR_RNDN);

  // y0 = -cos x / x
  mpfr_div(ys[0], cc, xx, MPFR_RNDN);
  mpfr_neg(ys[0], ys[0], MPFR_RNDN);
  if (lmax >= 1) {
    // y1 = -cos x / x^2 - sin x / x
    mpfr_sqr(tmp, xx, MPFR_RNDN);
    mpfr_div(ys[1], cc, tmp, MPFR_RNDN);
    mpfr_neg(ys[1], ys[1], MPFR_RNDN);
    mpfr_div(tmp, s, xx, MPFR_RNDN);
    mpfr_sub(ys[1], ys[1], tmp, MPFR_RNDN);
  }
  for (int k = 1; k < lmax; ++k) {
    // y_{k+1} = (2k+1)/x y_k - y_{k-1}
    mpfr_mul_ui(tmp, ys[k], 2 * k + 1, MPFR_RNDN);
    mpfr_div(tmp, tmp, xx, MPFR_RNDN);
    mpfr_sub(ys[k + 1], tmp, ys[k - 1], MPFR_RNDN);
  }
  mpfr_clears(xx, s, cc, tmp, (mpfr_ptr)nullptr);
}

struct MpComplex {
  double re, im;
};

// S^-1 = 1/(x_pol (-D - iN)) computed in mpfr from N, D.
MpComplex mp_s_inv(mpfr_t num, mpfr_t den, double x_pol, mpfr_prec_t prec) {
  mpfr_t mag, re, im, xp;
  mpfr_inits2(prec, mag, re, im, xp, (mpfr_ptr)nullptr);
  mpfr_set_d(xp, x_pol, MPFR_RNDN);
  // mag = x_pol (D^2 + N^2)
  mpfr_sqr(re, den, MPFR_RNDN);
  mpfr_sqr(im, num, MPFR_RNDN);
  mpfr_add(mag, re, im, MPFR_RNDN);
  mpfr_mul(mag, mag, xp, MPFR_RNDN);
  // 1/(-D - iN) = (-D + iN)/(D^2+N^2)
  mpfr_neg(re, den, MPFR_RNDN);
  mpfr_div(re, re, mag, MPFR_RNDN);
  mpfr_div(im, num, mag, MPFR_RNDN);
  MpComplex out{mpfr_get_d(re, MPFR_RNDN), mpfr_get_d(im, MPFR_RNDN)};
  mpfr_clears(mag, re, im, xp, (mpfr_ptr)nullptr);
  return out;
}

// N/D factors for both polarizations at (l, n, x), all in mpfr.
struct MpContinuity {
  mpfr_t n_te, d_te, n_tm, d_tm;
  mpfr_prec_t prec;
  explicit MpContinuity(mpfr_prec_t p) : prec(p) {
    mpfr_inits2(p, n_te, d_te, n_tm, d_tm, (mpfr_ptr)nullptr);
  }
  ~MpContinuity() { mpfr_clears(n_te, d_te, n_tm, d_tm, (mpfr_ptr)nullptr); }
  MpContinuity(const MpContinuity&) = delete;
  MpContinuity& operator=(const MpContinuity&) = delete;
};

void mp_continuity(MpContinuity& out, int l, double n, double x) {
  const double nx_d = n * x;
  const mpfr_prec_t prec = out.prec;
  mpfr_t jx, jx1, jnx, jnx1, rjx, rjnx, rynx, xx, nxx, tmp, n2;
  mpfr_inits2(prec, jx, jx1, jnx, jnx1, rjx, rjnx, rynx, xx, nxx, tmp, n2,
              (mpfr_ptr)nullptr);
  mpfr_set_d(xx, x, MPFR_RNDN);
  // nx computed exactly in mpfr from n and x
  mpfr_set_d(n2, n, MPFR_RNDN);
  mpfr_mul(nxx, n2, xx, MPFR_RNDN);
  const double nx = mpfr_get_d(nxx, MPFR_RNDN);
  (void)nx_d;

  mp_sph_j(jx, l, x, prec);
  mp_sph_j(jx1, l + 1, x, prec);
  mp_sph_j(jnx, l, nx, prec);
  mp_sph_j(jnx1, l + 1, nx, prec);

  std::vector<mpfr_t> ys(l + 2);
  for (auto& y : ys) mpfr_init2(y, prec);
  mp_sph_y_array(ys, l + 1, nx, prec);

  // rjx = (l+1) j_l(x) - x j_{l+1}(x)
  mpfr_mul_ui(rjx, jx, l + 1, MPFR_RNDN);
  mpfr_mul(tmp, xx, jx1, MPFR_RNDN);
  mpfr_sub(rjx, rjx, tmp, MPFR_RNDN);
  // rjnx
  mpfr_mul_ui(rjnx, jnx, l + 1, MPFR_RNDN);
  mpfr_mul(tmp, nxx, jnx1, MPFR_RNDN);
  mpfr_sub(rjnx, rjnx, tmp, MPFR_RNDN);
  // rynx
  mpfr_mul_ui(rynx, ys[l], l + 1, MPFR_RNDN);
  mpfr_mul(tmp, nxx, ys[l + 1], MPFR_RNDN);
  mpfr_sub(rynx, rynx, tmp, MPFR_RNDN);

  mpfr_t nn2;
  mpfr_init2(nn2, prec);
  mpfr_sqr(nn2, n2, MPFR_RNDN);

  // N_TE = j(x) rj(nx) - j(nx) rj(x)
  mpfr_mul(out.n_te, jx, rjnx, MPFR_RNDN);
  mpfr_mul(tmp, jnx, rjx, MPFR_RNDN);
  mpfr_sub(out.n_te, out.n_te, tmp, MPFR_RNDN);
  // D_TE = y(nx) rj(x) - j(x) ry(nx)
  mpfr_mul(out.d_te, ys[l], rjx, MPFR_RNDN);
  mpfr_mul(tmp, jx, rynx, MPFR_RNDN);
  mpfr_sub(out.d_te, out.d_te, tmp, MPFR_RNDN);
  // N_TM = j(x) rj(nx) - n^2 j(nx) rj(x)
  mpfr_mul(out.n_tm, jx, rjnx, MPFR_RNDN);
  mpfr_mul(tmp, jnx, rjx, MPFR_RNDN);
  mpfr_mul(tmp, tmp, nn2, MPFR_RNDN);
  mpfr_sub(out.n_tm, out.n_tm, tmp, MPFR_RNDN);
  // D_TM = n^2 y(nx) rj(x) - j(x) ry(nx)
  mpfr_mul(out.d_tm, ys[l], rjx, MPFR_RNDN);
  mpfr_mul(out.d_tm, out.d_tm, nn2, MPFR_RNDN);
  mpfr_mul(tmp, jx, rynx, MPFR_RNDN);
  mpfr_sub(out.d_tm, out.d_tm, tmp, MPFR_RNDN);

  for (auto& y : ys) mpfr_clear(y);
  mpfr_clears(jx, jx1, jnx, jnx1, rjx, rjnx, rynx, xx, nxx, tmp, n2, nn2,
              (mpfr_ptr)nullptr);
}

std::complex<double> cplx(const MpComplex& c) { return {c.re, c.im}; }

}  // namespace

double sph_j(int l, double x) {
  const mpfr_prec_t prec = prec_for(x);
  mpfr_t out;
  mpfr_init2(out, prec);
  mp_sph_j(out, l, x, prec);
  const double v = mpfr_get_d(out, MPFR_RNDN);
  mpfr_clear(out);
  return v;
}

double sph_y(int l, double x) {
  const mpfr_prec_t prec = prec_for(x);
  std::vector<mpfr_t> ys(l + 1);
  for (auto& y : ys) mpfr_init2(y, prec);
  mp_sph_y_array(ys, l, x, prec);
  const double v = mpfr_get_d(ys[l], MPFR_RNDN);
  for (auto& y : ys) mpfr_clear(y);
  return v;
}

double riccati_j(int l, double x) {
  const mpfr_prec_t prec = prec_for(x);
  mpfr_t a, b, xx;
  mpfr_inits2(prec, a, b, xx, (mpfr_ptr)nullptr);
  mpfr_set_d(xx, x, MPFR_RNDN);
  mp_sph_j(a, l, x, prec);
  mp_sph_j(b, l + 1, x, prec);
  mpfr_mul_ui(a, a, l + 1, MPFR_RNDN);
  mpfr_mul(b, b, xx, MPFR_RNDN);
  mpfr_sub(a, a, b, MPFR_RNDN);
  const double v = mpfr_get_d(a, MPFR_RNDN);
  mpfr_clears(a, b, xx, (mpfr_ptr)nullptr);
  return v;
}

double riccati_y(int l, double x) {
  const mpfr_prec_t prec = prec_for(x);
  std::vector<mpfr_t> ys(l + 2);
  for (auto& y : ys) mpfr_init2(y, prec);
  mp_sph_y_array(ys, l + 1, x, prec);
  mpfr_t xx;
  mpfr_init2(xx, prec);
  mpfr_set_d(xx, x, MPFR_RNDN);
  mpfr_mul_ui(ys[l], ys[l], l + 1, MPFR_RNDN);
  mpfr_mul(ys[l + 1], ys[l + 1], xx, MPFR_RNDN);
  mpfr_sub(ys[l], ys[l], ys[l + 1], MPFR_RNDN);
  const double v = mpfr_get_d(ys[l], MPFR_RNDN);
  for (auto& y : ys) mpfr_clear(y);
  mpfr_clear(xx);
  return v;
}

Continuity continuity(int l, double n, double x) {
  const mpfr_prec_t prec = prec_for(n * x);
  MpContinuity mc(prec);
  mp_continuity(mc, l, n, x);
  return {mpfr_get_d(mc.n_te, MPFR_RNDN), mpfr_get_d(mc.d_te, MPFR_RNDN),
          mpfr_get_d(mc.n_tm, MPFR_RNDN), mpfr_get_d(mc.d_tm, MPFR_RNDN)};
}

std::complex<double> s_inv(int l, bool te, double n, double x) {
  const mpfr_prec_t prec = prec_for(n * x);
  MpContinuity mc(prec);
  mp_continuity(mc, l, n, x);
  const double x_pol = te ? n * x : x;
  const MpComplex s = te ? mp_s_inv(mc.n_te, mc.d_te, x_pol, prec)
                         : mp_s_inv(mc.n_tm, mc.d_tm, x_pol, prec);
  return cplx(s);
}

std::complex<double> force_factor(int l, bool te, double n, double k, double kp,
                                  double r) {
  const double xa = k * r;
  const double xb = kp * r;
  const std::complex<double> sa = s_inv(l, te, n, xa);
  const std::complex<double> sb = s_inv(l, te, n, xb);
  double bracket;
  if (te) {
    bracket = l * (l + 1.0) * sph_j(l, xa) * sph_j(l, xb) +
              riccati_j(l, xa) * riccati_j(l, xb);
  } else {
    bracket = (xa * xb - l * (l + 1.0)) * sph_j(l, xa) * sph_j(l, xb);
  }
  return sa * sb * bracket;
}

std::complex<double> aux_im(int lmax, double k, double kp, double r_a,
                            double r_b, double n) {
  std::complex<double> total{};
  for (int l = 1; l <= lmax; ++l) {
    const std::complex<double> te_a = force_factor(l, true, n, k, kp, r_a);
    const std::complex<double> te_b = force_factor(l, true, n, k, kp, r_b);
    const std::complex<double> tm_a = force_factor(l, false, n, k, kp, r_a);
    const std::complex<double> tm_b = force_factor(l, false, n, k, kp, r_b);
    total += (2.0 * l + 1.0) *
             (te_a * std::conj(te_b) + tm_a * std::conj(tm_b));
  }
  return total;
}

}  // namespace oracle
