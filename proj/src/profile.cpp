#include "sonorad/profile.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sonorad/constants.hpp"

namespace sonorad::profile {

namespace {

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

BubbleProfile BubbleProfile::lorentzian(const RunParams& params) {
  params.validate();
  BubbleProfile p;
  p.kind_ = Kind::kLorentzianDip;
  p.params_ = params;
  p.window_ = {0.0, params.period};
  return p;
}

BubbleProfile BubbleProfile::tabulated(
    std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 4) {
    throw std::invalid_argument("profile: tabulated kind needs at least 4 samples");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].second > 0.0)) {
      throw std::invalid_argument("profile: radii must be positive");
    }
    if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
      throw std::invalid_argument("profile: sample times must be strictly increasing");
    }
  }

  BubbleProfile p;
  p.kind_ = Kind::kTabulated;
  p.window_ = {samples.front().first, samples.back().first};
  const std::size_t n = samples.size();
  p.t_.resize(n);
  p.q_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.t_[i] = samples[i].first;
    p.q_[i] = samples[i].second * samples[i].second;  // interpolate R^2
  }

  // Steffen monotone slopes
  p.slope_.resize(n);
  std::vector<double> h(n - 1), s(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = p.t_[i + 1] - p.t_[i];
    s[i] = (p.q_[i + 1] - p.q_[i]) / h[i];
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double pi = (s[i - 1] * h[i] + s[i] * h[i - 1]) / (h[i - 1] + h[i]);
    p.slope_[i] = (sgn(s[i - 1]) + sgn(s[i])) *
                  std::min({std::fabs(s[i - 1]), std::fabs(s[i]), 0.5 * std::fabs(pi)});
  }
  {
    const double p0 = s[0] * (1.0 + h[0] / (h[0] + h[1])) - s[1] * h[0] / (h[0] + h[1]);
    if (p0 * s[0] <= 0.0) {
      p.slope_[0] = 0.0;
    } else if (std::fabs(p0) > 2.0 * std::fabs(s[0])) {
      p.slope_[0] = 2.0 * s[0];
    } else {
      p.slope_[0] = p0;
    }
    const std::size_t m = n - 1;
    const double pm = s[m - 1] * (1.0 + h[m - 1] / (h[m - 1] + h[m - 2])) -
                      s[m - 2] * h[m - 1] / (h[m - 1] + h[m - 2]);
    if (pm * s[m - 1] <= 0.0) {
      p.slope_[m] = 0.0;
    } else if (std::fabs(pm) > 2.0 * std::fabs(s[m - 1])) {
      p.slope_[m] = 2.0 * s[m - 1];
    } else {
      p.slope_[m] = pm;
    }
  }
  return p;
}

const RunParams& BubbleProfile::params() const {
  if (kind_ != Kind::kLorentzianDip) {
    throw std::logic_error("profile: params() requires the model kind");
  }
  return params_;
}

void BubbleProfile::check_window(double t) const {
  if (!(t >= window_.first && t <= window_.second)) {
    std::ostringstream os;
    os << "profile: t = " << t << " outside window [" << window_.first << ", "
       << window_.second << "]";
    throw std::out_of_range(os.str());
  }
}

double BubbleProfile::q_eval(double t, int deriv) const {
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = (it == t_.begin()) ? 0 : (it - t_.begin() - 1);
  if (i >= t_.size() - 1) i = t_.size() - 2;
  const double h = t_[i + 1] - t_[i];
  const double sec = (q_[i + 1] - q_[i]) / h;
  const double a = (slope_[i] + slope_[i + 1] - 2.0 * sec) / (h * h);
  const double b = (3.0 * sec - 2.0 * slope_[i] - slope_[i + 1]) / h;
  const double u = t - t_[i];
  switch (deriv) {
    case 0:
      return q_[i] + u * (slope_[i] + u * (b + u * a));
    case 1:
      return slope_[i] + u * (2.0 * b + 3.0 * a * u);
    case 2:
      return 2.0 * b + 6.0 * a * u;
    default:
      throw std::domain_error(
          "profile: tabulated interpolant is not differentiable beyond order 2");
  }
}

double BubbleProfile::radius(double t) const {
  check_window(t);
  if (kind_ == Kind::kLorentzianDip) {
    const double s = (t - params_.center) / params_.gamma;
    const double dr2 = params_.r0 * params_.r0 - params_.rmin * params_.rmin;
    const double q = params_.r0 * params_.r0 - dr2 / (s * s + 1.0);
    return std::sqrt(q);
  }
  return std::sqrt(q_eval(t, 0));
}

double BubbleProfile::dr2dt(double t) const {
  check_window(t);
  if (kind_ == Kind::kLorentzianDip) {
    const double g = params_.gamma;
    const double s = (t - params_.center) / g;
    const double dr2 = params_.r0 * params_.r0 - params_.rmin * params_.rmin;
    const double d = 1.0 + s * s;
    return (2.0 * dr2 / g) * s / (d * d);
  }
  return q_eval(t, 1);
}

double BubbleProfile::beta(double t) const {
  return dr2dt(t) / (2.0 * radius(t) * constants::c);
}

double BubbleProfile::dr2_deriv(int order, double t) const {
  check_window(t);
  if (order < 1 || order > 5) {
    throw std::domain_error("profile: dr2_deriv supports orders 1..5");
  }
  if (kind_ == Kind::kTabulated) {
    return q_eval(t, order);  // throws beyond order 2
  }
  const double g = params_.gamma;
  const double dr2 = params_.r0 * params_.r0 - params_.rmin * params_.rmin;
  const std::complex<double> z(t - params_.center, -g);
  std::complex<double> w = 1.0 / z;
  for (int m = 0; m < order; ++m) w /= z;  // z^-(order+1)
  double fact = 1.0;
  for (int m = 2; m <= order; ++m) fact *= m;
  const double sign = (order % 2 == 0) ? -1.0 : 1.0;
  return dr2 * sign * fact * g * w.imag();
}

ProfileDiagnostics diagnostics(const BubbleProfile& p, double warn_threshold) {
  const auto [t0, t1] = p.window();
  constexpr int kScan = 4097;

  // Scan nodes; for the model kind cluster them around the dip so that a
  // narrow collapse inside a long window cannot be missed.
  std::vector<double> nodes;
  nodes.reserve(kScan);
  if (p.kind() == BubbleProfile::Kind::kLorentzianDip) {
    const auto& par = p.params();
    const double th0 = std::atan((t0 - par.center) / par.gamma);
    const double th1 = std::atan((t1 - par.center) / par.gamma);
    for (int i = 0; i < kScan; ++i) {
      const double th = th0 + (th1 - th0) * i / (kScan - 1);
      double t = par.center + par.gamma * std::tan(th);
      t = std::clamp(t, t0, t1);
      nodes.push_back(t);
    }
  } else {
    for (int i = 0; i < kScan; ++i) {
      nodes.push_back(t0 + (t1 - t0) * i / (kScan - 1));
    }
  }

  double best = -1.0, t_best = t0;
  double rmin = std::numeric_limits<double>::max();
  for (double t : nodes) {
    const double b = std::fabs(p.beta(t));
    if (b > best) {
      best = b;
      t_best = t;
    }
    rmin = std::min(rmin, p.radius(t));
  }
  if (p.kind() == BubbleProfile::Kind::kLorentzianDip) {
    const double tc = p.params().center;
    if (tc >= t0 && tc <= t1) rmin = std::min(rmin, p.radius(tc));
  }

  // golden-section refinement of |beta| around the best node
  {
    double lo = std::max(t0, t_best - (t1 - t0) / (kScan - 1));
    double hi = std::min(t1, t_best + (t1 - t0) / (kScan - 1));
    if (p.kind() == BubbleProfile::Kind::kLorentzianDip) {
      const double g = p.params().gamma;
      lo = std::max(t0, t_best - g);
      hi = std::min(t1, t_best + g);
    }
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = std::fabs(p.beta(c)), fd = std::fabs(p.beta(d));
    for (int it = 0; it < 120 && (b - a) > 1e-18 * (t1 - t0 + 1e-300); ++it) {
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - gr * (b - a);
        fc = std::fabs(p.beta(c));
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + gr * (b - a);
        fd = std::fabs(p.beta(d));
      }
    }
    const double t_ref = 0.5 * (a + b);
    const double f_ref = std::fabs(p.beta(t_ref));
    if (f_ref > best) {
      best = f_ref;
      t_best = t_ref;
    }
    rmin = std::min(rmin, p.radius(t_best));
  }

  ProfileDiagnostics diag;
  diag.beta_max = best;
  diag.t_at_beta_max = t_best;
  diag.min_radius = rmin;
  diag.warn_threshold = warn_threshold;
  diag.warning = best > warn_threshold;
  return diag;
}

BubbleProfile load_profile_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("profile: cannot open profile table " + path);
  }
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double t, r;
    if (!(ls >> t)) continue;
    if (!(ls >> r)) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected two columns 't R'");
    }
    rows.emplace_back(t, r);
  }
  return BubbleProfile::tabulated(std::move(rows));
}

}  // namespace sonorad::profile
