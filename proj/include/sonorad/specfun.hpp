#pragma once

#include <span>
#include <utility>

namespace sonorad::specfun {

/// Largest supported order.
inline constexpr int kMaxOrder = 8192;

/// Magnitudes below this are flushed to exact zero by the j recurrences;
/// downstream l-sums treat flushed entries as a converged tail.
inline constexpr double kFlushThreshold = 1e-280;

/// Saturation magnitude for the upward y recurrence near overflow.
inline constexpr double kSaturate = 1e300;

struct BesselPair {
  double j;   // spherical Bessel of the first kind
  double y;   // second kind
  double jp;  // [x j_l(x)]'
  double yp;  // [x y_l(x)]'
};

// Batch evaluation for l = 0..lmax (out.size() must be lmax+1).
// Returns the count of leading entries that are meaningful: for j, entries at
// and beyond the returned count underflowed and are exact zeros; for y,
// entries beyond the count overflowed and are clamped to +-kSaturate.
int sph_bessel_j_array(int lmax, double x, std::span<double> out);
int sph_bessel_y_array(int lmax, double x, std::span<double> out);

double sph_bessel_j(int l, double x);
double sph_bessel_y(int l, double x);

/// Riccati derivatives ([x j_l]', [x y_l]') via (l+1) f_l - x f_{l+1}.
std::pair<double, double> riccati_derivs(int l, double x);

BesselPair bessel_pair(int l, double x);

// Leading-order uniform asymptotics in the oscillatory regime x > l + 1/2.
double debye_j(int l, double x);
double debye_riccati_jp(int l, double x);

}  // namespace sonorad::specfun
