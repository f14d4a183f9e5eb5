#pragma once

#include <complex>

// High-precision reference implementations for the test suites, built on
// MPFR. Algorithms are chosen to be independent of the production paths:
// ascending series for j (precision scaled with the argument to absorb
// cancellation), upward recurrence from closed forms for y, and literal
// transcriptions of the continuity/normalization formulas.
namespace oracle {

double sph_j(int l, double x);
double sph_y(int l, double x);
double riccati_j(int l, double x);  // [x j_l(x)]'
double riccati_y(int l, double x);

struct Continuity {
  double n_te, d_te, n_tm, d_tm;
};
Continuity continuity(int l, double n, double x);

std::complex<double> s_inv(int l, bool te, double n, double x);

std::complex<double> force_factor(int l, bool te, double n, double k, double kp,
                                  double r);

// Direct transcription of the l-sum of (2l+1)[F_TE conj(F_TE') + F_TM conj(F_TM')].
std::complex<double> aux_im(int lmax, double k, double kp, double r_a,
                            double r_b, double n);

}  // namespace oracle
