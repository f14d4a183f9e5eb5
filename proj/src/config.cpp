#include "sonorad/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sonorad/errors.hpp"

namespace sonorad::config {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw config_error(origin + ": " + what);
}

void reject_unknown(const json& section, const std::string& name,
                    const std::set<std::string>& allowed,
                    const std::string& origin) {
  for (const auto& [key, value] : section.items()) {
    if (!allowed.count(key)) {
      fail(origin, "unknown key '" + name + "." + key + "'");
    }
  }
}

template <typename T>
T get_or(const json& section, const std::string& section_name,
         const std::string& key, const T& fallback, const std::string& origin) {
  if (!section.contains(key)) return fallback;
  try {
    return section.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(origin, "bad value for '" + section_name + "." + key + "': " + e.what());
  }
}

template <typename T>
T get_required(const json& section, const std::string& section_name,
               const std::string& key, const std::string& origin) {
  if (!section.contains(key)) {
    fail(origin, "missing required key '" + section_name + "." + key + "'");
  }
  try {
    return section.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(origin, "bad value for '" + section_name + "." + key + "': " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment,
                    const std::string& origin) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    fail(origin, "override '" + assignment + "' is not of the form section.key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  const auto dot = path.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 >= path.size()) {
    fail(origin, "override key '" + path + "' must be section.key");
  }
  const std::string section = path.substr(0, dot);
  const std::string key = path.substr(dot + 1);
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::exception&) {
    parsed = value;  // unquoted strings pass through
  }
  doc[section][key] = parsed;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text,
                           const std::string& origin,
                           const std::vector<std::string>& overrides,
                           const std::string& profile_file) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    fail(origin, std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) fail(origin, "top level must be an object of sections");

  for (const auto& ov : overrides) apply_override(doc, ov, origin);
  if (!profile_file.empty()) {
    doc["profile"]["type"] = "table";
    doc["profile"]["profile_file"] = profile_file;
  }

  reject_unknown(doc, "(top)", {"medium", "profile", "engine", "spectrum", "output"},
                 origin);
  for (const auto& [key, value] : doc.items()) {
    if (!value.is_object()) {
      fail(origin, "section '" + key + "' must be an object");
    }
  }

  RunConfig cfg;

  // medium
  if (!doc.contains("medium")) fail(origin, "missing section 'medium'");
  {
    const json& m = doc.at("medium");
    reject_unknown(m, "medium", {"mode", "n", "dispersion_file"}, origin);
    const std::string mode = get_or<std::string>(m, "medium", "mode", "constant", origin);
    try {
      if (mode == "constant") {
        cfg.medium = MediumSpec::constant(
            get_required<double>(m, "medium", "n", origin));
      } else if (mode == "tabulated") {
        cfg.medium = load_dispersion_table(
            get_required<std::string>(m, "medium", "dispersion_file", origin));
      } else {
        fail(origin, "medium.mode must be 'constant' or 'tabulated'");
      }
    } catch (const std::invalid_argument& e) {
      fail(origin, e.what());
    }
  }

  // profile
  if (!doc.contains("profile")) fail(origin, "missing section 'profile'");
  {
    const json& p = doc.at("profile");
    reject_unknown(p, "profile",
                   {"type", "R0_m", "Rmin_m", "gamma_s", "period_s", "center_s",
                    "profile_file"},
                   origin);
    const std::string type = get_or<std::string>(p, "profile", "type", "lorentzian", origin);
    try {
      if (type == "lorentzian") {
        RunParams rp;
        rp.r0 = get_required<double>(p, "profile", "R0_m", origin);
        rp.rmin = get_required<double>(p, "profile", "Rmin_m", origin);
        rp.gamma = get_required<double>(p, "profile", "gamma_s", origin);
        rp.period = get_required<double>(p, "profile", "period_s", origin);
        rp.center = get_or<double>(p, "profile", "center_s", 0.5 * rp.period, origin);
        cfg.bubble = profile::BubbleProfile::lorentzian(rp);
      } else if (type == "table") {
        if (!p.contains("profile_file")) {
          fail(origin, "profile.type=table requires profile.profile_file");
        }
        cfg.bubble = profile::load_profile_table(
            p.at("profile_file").get<std::string>());
      } else {
        fail(origin, "profile.type must be 'lorentzian' or 'table'");
      }
    } catch (const std::invalid_argument& e) {
      fail(origin, e.what());
    }
  }

  // engine
  {
    const json e = doc.contains("engine") ? doc.at("engine") : json::object();
    reject_unknown(e, "engine",
                   {"tau_points", "omega_prime_max", "omega_prime_points",
                    "lmax_cap", "rel_tol", "sw_fast_path", "sw_coefficient",
                    "threads"},
                   origin);
    cfg.engine.tau_points = get_or<int>(e, "engine", "tau_points", 8192, origin);
    cfg.engine.omega_prime_max =
        get_or<double>(e, "engine", "omega_prime_max", 0.0, origin);
    cfg.engine.omega_prime_points =
        get_or<int>(e, "engine", "omega_prime_points", 256, origin);
    cfg.engine.l_policy.l_max_cap =
        get_or<int>(e, "engine", "lmax_cap", cfg.engine.l_policy.l_max_cap, origin);
    cfg.engine.rel_tol = get_or<double>(e, "engine", "rel_tol", 1e-4, origin);
    cfg.engine.sw_fast_path = get_or<bool>(e, "engine", "sw_fast_path", true, origin);
    cfg.engine.sw_coefficient = get_or<double>(
        e, "engine", "sw_coefficient", cfg.engine.sw_coefficient, origin);
    cfg.engine.threads = get_or<int>(e, "engine", "threads", 0, origin);
    try {
      cfg.engine.validate();
    } catch (const std::invalid_argument& err) {
      fail(origin, err.what());
    }
  }

  // spectrum grid
  {
    const json s = doc.contains("spectrum") ? doc.at("spectrum") : json::object();
    reject_unknown(
        s, "spectrum",
        {"omega_min_rad_s", "omega_max_rad_s", "omega_points", "grid"}, origin);
    cfg.spectrum.omega_min = get_or<double>(s, "spectrum", "omega_min_rad_s", 0.0, origin);
    cfg.spectrum.omega_max = get_or<double>(s, "spectrum", "omega_max_rad_s", 0.0, origin);
    cfg.spectrum.points = get_or<int>(s, "spectrum", "omega_points", 120, origin);
    const std::string grid = get_or<std::string>(s, "spectrum", "grid", "log", origin);
    if (grid == "log") {
      cfg.spectrum.log_spacing = true;
    } else if (grid == "linear") {
      cfg.spectrum.log_spacing = false;
    } else {
      fail(origin, "spectrum.grid must be 'log' or 'linear'");
    }
    if (cfg.spectrum.points < 1) fail(origin, "spectrum.omega_points must be >= 1");
    if (cfg.spectrum.omega_min < 0.0 || cfg.spectrum.omega_max < 0.0) {
      fail(origin, "spectrum omega bounds must be >= 0");
    }
    if (cfg.spectrum.omega_max > 0.0 &&
        !(cfg.spectrum.omega_max > cfg.spectrum.omega_min)) {
      fail(origin, "spectrum.omega_max_rad_s must exceed omega_min_rad_s");
    }
  }

  // output
  {
    const json o = doc.contains("output") ? doc.at("output") : json::object();
    reject_unknown(o, "output",
                   {"path", "emit_wavelength_column", "precision_digits"}, origin);
    cfg.output.path = get_or<std::string>(o, "output", "path", "spectrum.csv", origin);
    cfg.output.emit_wavelength_column =
        get_or<bool>(o, "output", "emit_wavelength_column", true, origin);
    cfg.output.precision_digits =
        get_or<int>(o, "output", "precision_digits", 17, origin);
    if (cfg.output.precision_digits < 4 || cfg.output.precision_digits > 17) {
      fail(origin, "output.precision_digits must be in [4, 17]");
    }
  }

  // resolved echo, re-parseable as a config
  {
    json echo;
    if (cfg.medium.mode() == MediumSpec::Mode::kConstant) {
      echo["medium"] = {{"mode", "constant"}, {"n", cfg.medium.n_const()}};
    } else {
      echo["medium"] = {{"mode", "tabulated"},
                        {"dispersion_file",
                         doc.at("medium").at("dispersion_file").get<std::string>()}};
    }
    if (cfg.bubble->kind() == profile::BubbleProfile::Kind::kLorentzianDip) {
      const auto& rp = cfg.bubble->params();
      echo["profile"] = {{"type", "lorentzian"}, {"R0_m", rp.r0},
                         {"Rmin_m", rp.rmin},   {"gamma_s", rp.gamma},
                         {"period_s", rp.period}, {"center_s", rp.center}};
    } else {
      echo["profile"] = {{"type", "table"},
                         {"profile_file",
                          doc.at("profile").at("profile_file").get<std::string>()}};
    }
    echo["engine"] = {{"tau_points", cfg.engine.tau_points},
                      {"omega_prime_max", cfg.engine.omega_prime_max},
                      {"omega_prime_points", cfg.engine.omega_prime_points},
                      {"lmax_cap", cfg.engine.l_policy.l_max_cap},
                      {"rel_tol", cfg.engine.rel_tol},
                      {"sw_fast_path", cfg.engine.sw_fast_path},
                      {"sw_coefficient", cfg.engine.sw_coefficient},
                      {"threads", cfg.engine.threads}};
    echo["spectrum"] = {{"omega_min_rad_s", cfg.spectrum.omega_min},
                        {"omega_max_rad_s", cfg.spectrum.omega_max},
                        {"omega_points", cfg.spectrum.points},
                        {"grid", cfg.spectrum.log_spacing ? "log" : "linear"}};
    echo["output"] = {{"path", cfg.output.path},
                      {"emit_wavelength_column", cfg.output.emit_wavelength_column},
                      {"precision_digits", cfg.output.precision_digits}};
    cfg.resolved_json = echo.dump();
  }

  return cfg;
}

RunConfig load_run_config(const std::string& path,
                          const std::vector<std::string>& overrides,
                          const std::string& profile_file) {
  std::ifstream in(path);
  if (!in) {
    throw config_error("cannot open config file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str(), path, overrides, profile_file);
}

std::vector<double> make_omega_grid(const RunConfig& cfg) {
  double w_max = cfg.spectrum.omega_max;
  double w_min = cfg.spectrum.omega_min;
  if (w_max <= 0.0) {
    w_max = 0.75 * engine::default_omega_prime_max(cfg.profile_ref());
  }
  if (w_min <= 0.0) {
    w_min = cfg.spectrum.log_spacing ? w_max / 300.0
                                     : w_max / cfg.spectrum.points;
  }
  if (!(w_min < w_max)) {
    throw config_error("spectrum.omega_min_rad_s " + std::to_string(w_min) +
                       " must lie below the grid maximum " +
                       std::to_string(w_max));
  }
  const int n = cfg.spectrum.points;
  std::vector<double> grid(n);
  if (n == 1) {
    grid[0] = w_max;
    return grid;
  }
  if (cfg.spectrum.log_spacing) {
    const double ratio = std::log(w_max / w_min) / (n - 1);
    for (int i = 0; i < n; ++i) grid[i] = w_min * std::exp(ratio * i);
  } else {
    for (int i = 0; i < n; ++i) {
      grid[i] = w_min + (w_max - w_min) * i / (n - 1);
    }
  }
  grid.back() = w_max;  // exact endpoint despite rounding
  return grid;
}

}  // namespace sonorad::config
