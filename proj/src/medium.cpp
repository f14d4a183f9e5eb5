#include "sonorad/medium.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sonorad {

MediumSpec MediumSpec::constant(double n) {
  if (!(n > 1.0)) {
    throw std::invalid_argument("medium: refractive index must be > 1, got " +
                                std::to_string(n));
  }
  MediumSpec m;
  m.mode_ = Mode::kConstant;
  m.n_const_ = n;
  return m;
}

MediumSpec MediumSpec::tabulated(std::vector<std::pair<double, double>> rows) {
  if (rows.size() < 2) {
    throw std::invalid_argument("medium: dispersion table needs at least 2 rows");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].first > 0.0) || !std::isfinite(rows[i].first)) {
      throw std::invalid_argument("medium: table omega values must be positive");
    }
    if (!(rows[i].second > 1.0)) {
      throw std::invalid_argument("medium: every n value must be > 1");
    }
    if (i > 0 && !(rows[i].first > rows[i - 1].first)) {
      throw std::invalid_argument(
          "medium: table omega values must be strictly increasing");
    }
  }
  MediumSpec m;
  m.mode_ = Mode::kTabulated;
  m.table_ = std::move(rows);
  return m;
}

void RunParams::validate() const {
  if (!(rmin > 0.0 && rmin < r0)) {
    throw std::invalid_argument("profile: need 0 < Rmin < R0");
  }
  if (!(gamma > 0.0)) {
    throw std::invalid_argument("profile: gamma must be positive");
  }
  if (!(period > 0.0)) {
    throw std::invalid_argument("profile: period must be positive");
  }
  if (!(center >= 0.0 && center <= period)) {
    throw std::invalid_argument("profile: center must lie in [0, period]");
  }
}

double refractive_index(const MediumSpec& medium, double omega) {
  if (!(omega > 0.0)) {
    throw std::domain_error("refractive_index: omega must be positive");
  }
  if (medium.mode() == MediumSpec::Mode::kConstant) {
    return medium.n_const();
  }
  const auto& tab = medium.table();
  if (omega < tab.front().first || omega > tab.back().first) {
    std::ostringstream os;
    os << "refractive_index: omega " << omega
       << " outside tabulated range [" << tab.front().first << ", "
       << tab.back().first << "] rad/s (no extrapolation)";
    throw std::out_of_range(os.str());
  }
  auto hi = std::lower_bound(
      tab.begin(), tab.end(), omega,
      [](const std::pair<double, double>& row, double w) { return row.first < w; });
  if (hi == tab.begin()) return hi->second;
  auto lo = hi - 1;
  if (hi == tab.end()) return lo->second;  // omega == last abscissa
  const double f = (omega - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

double reflection_probability(double n) {
  if (!(n >= 1.0)) {
    throw std::domain_error("reflection_probability: n must be >= 1");
  }
  const double r = (n - 1.0) / (n + 1.0);
  return r * r;
}

MediumSpec load_dispersion_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("medium: cannot open dispersion table " + path);
  }
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    double w, n;
    if (!(ls >> w)) continue;  // blank or comment-only line
    if (!(ls >> n)) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected two columns 'omega n'");
    }
    rows.emplace_back(w, n);
  }
  return MediumSpec::tabulated(std::move(rows));
}

}  // namespace sonorad
