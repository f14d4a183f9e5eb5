#include "sonorad/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "sonorad/errors.hpp"

namespace sonorad::specfun {

namespace {

void check_domain(int l, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("specfun: argument must be finite and positive, got " +
                            std::to_string(x));
  }
  if (l < 0) {
    throw std::domain_error("specfun: order must be non-negative");
  }
  if (l > kMaxOrder) {
    throw capability_error("specfun: order " + std::to_string(l) +
                           " exceeds supported maximum " +
                           std::to_string(kMaxOrder));
  }
}

// log10 envelope of j_n(x); used to pick the Miller start order so that the
// seed contamination sits below the target digit count.
double envj(int n, double x) {
  if (n < 1) n = 1;
  return 0.5 * std::log10(6.28 * n) - n * std::log10(1.36 * x / n);
}

int msta1(double x, int mp) {
  const double a0 = std::fabs(x);
  int n0 = static_cast<int>(1.1 * a0) + 1;
  double f0 = envj(n0, a0) - mp;
  int n1 = n0 + 5;
  double f1 = envj(n1, a0) - mp;
  int nn = n1;
  for (int it = 0; it < 20; ++it) {
    nn = n1 - static_cast<int>((n1 - n0) / (1.0 - f0 / f1));
    const double f = envj(nn, a0) - mp;
    if (std::abs(nn - n1) < 1) break;
    n0 = n1;
    f0 = f1;
    n1 = nn;
    f1 = f;
  }
  return nn;
}

int msta2(double x, int n, int mp) {
  const double a0 = std::fabs(x);
  const double hmp = 0.5 * mp;
  const double ejn = envj(n, a0);
  double obj;
  int n0;
  if (ejn <= hmp) {
    obj = mp;
    n0 = static_cast<int>(1.1 * a0) + 1;
  } else {
    obj = hmp + ejn;
    n0 = n;
  }
  double f0 = envj(n0, a0) - obj;
  int n1 = n0 + 5;
  double f1 = envj(n1, a0) - obj;
  int nn = n1;
  for (int it = 0; it < 20; ++it) {
    nn = n1 - static_cast<int>((n1 - n0) / (1.0 - f0 / f1));
    const double f = envj(nn, a0) - obj;
    if (std::abs(nn - n1) < 1) break;
    n0 = n1;
    f0 = f1;
    n1 = nn;
    f1 = f;
  }
  return nn + 10;
}

// Ascending series, safe for small arguments where the closed form for j_1
// cancels catastrophically. Terms decrease strictly for x*x/2 < 2l+3.
double j_series(int l, double x) {
  double pref = 1.0;
  for (int k = 1; k <= l; ++k) pref *= x / (2 * k + 1);
  const double q = -0.5 * x * x;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 60; ++m) {
    term *= q / (m * (2.0 * (l + m) + 1.0));
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return pref * sum;
}

double flush(double v) { return std::fabs(v) < kFlushThreshold ? 0.0 : v; }

// Marks everything from the first flushed entry beyond the turning point as
// converged tail; genuine oscillatory zeros below l ~ x are not tail.
int tail_scan(int lmax, double x, std::span<double> out) {
  const int start = std::max(1, static_cast<int>(std::ceil(x)));
  for (int l = start; l <= lmax; ++l) {
    if (out[l] == 0.0) {
      for (int i = l; i <= lmax; ++i) out[i] = 0.0;
      return l;
    }
  }
  return lmax + 1;
}

}  // namespace

int sph_bessel_j_array(int lmax, double x, std::span<double> out) {
  check_domain(lmax, x);
  if (static_cast<int>(out.size()) != lmax + 1) {
    throw std::invalid_argument("sph_bessel_j_array: out span size mismatch");
  }
  const double j0 = std::sin(x) / x;
  out[0] = flush(j0);
  if (lmax == 0) return 1;

  if (x < 0.5) {
    for (int l = 1; l <= lmax; ++l) out[l] = flush(j_series(l, x));
    return tail_scan(lmax, x, out);
  }

  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;

  // Miller downward recurrence; start above the turning point with enough
  // margin that the seed contamination is below the flush threshold.
  int nm = lmax;
  int m = msta1(x, 290);
  if (m < nm) {
    nm = m;  // orders beyond m underflow entirely
  } else {
    m = msta2(x, nm, 16);
  }

  for (int l = nm + 1; l <= lmax; ++l) out[l] = 0.0;

  double f_hi = 0.0;     // f_{k+2}
  double f_lo = 1e-200;  // f_{k+1} (arbitrary seed scale)
  double f0 = 0.0, f1 = 0.0;
  for (int k = m; k >= 0; --k) {
    const double f = (2.0 * k + 3.0) / x * f_lo - f_hi;
    if (k <= nm) out[k] = f;
    if (k == 0) f0 = f;
    if (k == 1) f1 = f;
    f_hi = f_lo;
    f_lo = f;
    if (std::fabs(f) > 1e250) {
      f_hi *= 1e-250;
      f_lo *= 1e-250;
      if (k == 0) f0 *= 1e-250;
      if (k <= 1) f1 *= 1e-250;
      for (int i = k; i <= nm; ++i) out[i] *= 1e-250;
    }
  }

  // Normalize against whichever closed form is better conditioned.
  const double scale = (std::fabs(j0) >= std::fabs(j1)) ? j0 / f0 : j1 / f1;
  for (int l = 0; l <= nm; ++l) out[l] = flush(out[l] * scale);
  return tail_scan(lmax, x, out);
}

int sph_bessel_y_array(int lmax, double x, std::span<double> out) {
  check_domain(lmax, x);
  if (static_cast<int>(out.size()) != lmax + 1) {
    throw std::invalid_argument("sph_bessel_y_array: out span size mismatch");
  }
  const double y0 = -std::cos(x) / x;
  out[0] = y0;
  if (lmax == 0) return 1;
  const double y1 = -std::cos(x) / (x * x) - std::sin(x) / x;
  out[1] = y1;
  int valid = 2;
  for (int l = 1; l < lmax; ++l) {
    const double next = (2.0 * l + 1.0) / x * out[l] - out[l - 1];
    if (std::fabs(next) >= kSaturate) {
      const double s = std::copysign(kSaturate, next);
      for (int i = l + 1; i <= lmax; ++i) out[i] = s;
      return valid;
    }
    out[l + 1] = next;
    valid = l + 2;
  }
  return valid;
}

double sph_bessel_j(int l, double x) {
  check_domain(l, x);
  if (l == 0) return std::sin(x) / x;
  if (x < 0.5) return flush(j_series(l, x));
  if (l == 1) return std::sin(x) / (x * x) - std::cos(x) / x;
  std::vector<double> buf(l + 1);
  sph_bessel_j_array(l, x, buf);
  return buf[l];
}

double sph_bessel_y(int l, double x) {
  check_domain(l, x);
  std::vector<double> buf(l + 1);
  sph_bessel_y_array(l, x, buf);
  return buf[l];
}

std::pair<double, double> riccati_derivs(int l, double x) {
  check_domain(l, x);
  std::vector<double> j(l + 2), y(l + 2);
  sph_bessel_j_array(l + 1, x, j);
  sph_bessel_y_array(l + 1, x, y);
  const double jp = (l + 1.0) * j[l] - x * j[l + 1];
  double yp;
  if (std::fabs(y[l]) >= kSaturate || std::fabs(y[l + 1]) >= kSaturate) {
    yp = std::copysign(kSaturate, -x * y[l + 1]);
  } else {
    yp = (l + 1.0) * y[l] - x * y[l + 1];
  }
  return {jp, yp};
}

BesselPair bessel_pair(int l, double x) {
  check_domain(l, x);
  std::vector<double> j(l + 2), y(l + 2);
  sph_bessel_j_array(l + 1, x, j);
  sph_bessel_y_array(l + 1, x, y);
  BesselPair p;
  p.j = j[l];
  p.y = y[l];
  p.jp = (l + 1.0) * j[l] - x * j[l + 1];
  if (std::fabs(y[l]) >= kSaturate || std::fabs(y[l + 1]) >= kSaturate) {
    p.yp = std::copysign(kSaturate, -x * y[l + 1]);
  } else {
    p.yp = (l + 1.0) * y[l] - x * y[l + 1];
  }
  return p;
}

double debye_j(int l, double x) {
  check_domain(l, x);
  const double nu = l + 0.5;
  if (!(x > nu)) {
    throw std::domain_error(
        "debye_j: requires x > l + 1/2 (oscillatory regime), got x = " +
        std::to_string(x) + ", l = " + std::to_string(l));
  }
  const double root = std::sqrt(x * x - nu * nu);
  const double phase = root - nu * std::acos(nu / x) - 0.25 * M_PI;
  return std::cos(phase) / std::sqrt(x * root);
}

double debye_riccati_jp(int l, double x) {
  check_domain(l, x);
  const double nu = l + 0.5;
  if (!(x > nu)) {
    throw std::domain_error(
        "debye_riccati_jp: requires x > l + 1/2 (oscillatory regime), got x = " +
        std::to_string(x) + ", l = " + std::to_string(l));
  }
  const double root = std::sqrt(x * x - nu * nu);
  const double phase = root - nu * std::acos(nu / x) - 0.25 * M_PI;
  return -std::sqrt(root / x) * std::sin(phase);
}

}  // namespace sonorad::specfun
