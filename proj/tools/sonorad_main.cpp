#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sonorad/analytic.hpp"
#include "sonorad/config.hpp"
#include "sonorad/constants.hpp"
#include "sonorad/engine.hpp"
#include "sonorad/errors.hpp"
#include "sonorad/profile.hpp"
#include "sonorad/selftest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAccuracy = 3;
constexpr int kExitSelftest = 4;

struct CommonArgs {
  std::string config_path;
  std::string output_path;
  std::string profile_file;
  std::vector<std::string> overrides;
  int threads = 0;
};

sonorad::config::RunConfig load(const CommonArgs& args) {
  auto cfg = sonorad::config::load_run_config(args.config_path, args.overrides,
                                              args.profile_file);
  if (args.threads > 0) cfg.engine.threads = args.threads;
  if (!args.output_path.empty()) cfg.output.path = args.output_path;
  return cfg;
}

void write_atomic(const std::string& path, const std::string& body) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file " + tmp);
    out << body;
  }
  std::filesystem::rename(tmp, path);
}

std::string format_value(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

std::string render_csv(const sonorad::config::RunConfig& cfg,
                       const sonorad::engine::SpectrumTable& table) {
  std::ostringstream os;
  os << "# spectrum of quantum-vacuum photon-pair emission per collapse\n";
  os << "# config: " << cfg.resolved_json << "\n";
  os << "# profile: " << table.profile_echo << "\n";
  os << "# engine: " << table.config_echo << "\n";
  const int d = cfg.output.precision_digits;
  if (cfg.output.emit_wavelength_column) {
    os << "omega_rad_per_s,lambda_m,P_joule_second,cumulative_energy_J\n";
  } else {
    os << "omega_rad_per_s,P_joule_second,cumulative_energy_J\n";
  }
  for (const auto& row : table.rows) {
    os << format_value(row.omega, d) << ',';
    if (cfg.output.emit_wavelength_column) {
      os << format_value(row.lambda, d) << ',';
    }
    os << format_value(row.p, d) << ',' << format_value(row.cumulative_energy, d);
    if (row.flag != sonorad::engine::kRowOk) {
      os << ",flag=" << row.flag;
    }
    os << '\n';
  }
  return os.str();
}

void print_report(const sonorad::config::RunConfig& cfg, double total_energy,
                  double photon_estimate, double seconds,
                  const std::vector<std::string>& warnings) {
  const auto& prof = cfg.profile_ref();
  const auto diag = sonorad::profile::diagnostics(prof);
  std::cout.precision(10);
  std::cout << "W_total_J            " << total_energy << "\n";
  std::cout << "photon_estimate      " << photon_estimate << "\n";
  std::cout << "beta_max             " << diag.beta_max << "\n";
  if (prof.kind() == sonorad::profile::BubbleProfile::Kind::kLorentzianDip) {
    std::cout << "T_eff_K              "
              << sonorad::analytic::effective_temperature(prof.params().gamma)
              << "\n";
  }
  std::cout << "elapsed_s            " << seconds << "\n";
  if (diag.warning) {
    std::cout << "warning              beta_max " << diag.beta_max
              << " exceeds first-order validity threshold "
              << diag.warn_threshold << "\n";
  }
  for (const auto& w : warnings) std::cout << "warning              " << w << "\n";
}

int cmd_spectrum(const CommonArgs& args) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto cfg = load(args);
  const auto grid = sonorad::config::make_omega_grid(cfg);
  const auto table = sonorad::engine::spectrum_sweep(grid, cfg.profile_ref(),
                                                     cfg.medium, cfg.engine);
  write_atomic(cfg.output.path, render_csv(cfg, table));

  // photon count estimate: integral of P/(hbar omega)
  double photons = 0.0;
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    const auto& a = table.rows[i - 1];
    const auto& b = table.rows[i];
    if (a.flag == sonorad::engine::kRowAccuracyError ||
        b.flag == sonorad::engine::kRowAccuracyError) {
      continue;
    }
    const double fa = a.p / (sonorad::constants::hbar * a.omega);
    const double fb = b.p / (sonorad::constants::hbar * b.omega);
    photons += 0.5 * (fa + fb) * (b.omega - a.omega);
  }

  std::vector<std::string> warnings;
  std::vector<std::size_t> flagged;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    if (table.rows[i].flag == sonorad::engine::kRowAccuracyError) {
      flagged.push_back(i);
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  print_report(cfg, table.total_energy, photons, seconds, warnings);
  std::cout << "output               " << cfg.output.path << "\n";
  if (!flagged.empty()) {
    std::cerr << "accuracy errors in " << flagged.size() << " rows:";
    for (auto i : flagged) {
      std::cerr << " omega=" << table.rows[i].omega;
    }
    std::cerr << "\n  first: " << table.rows[flagged.front()].message << "\n";
    return kExitAccuracy;
  }
  return kExitOk;
}

int cmd_energy(const CommonArgs& args) {
  const auto t_start = std::chrono::steady_clock::now();
  const auto cfg = load(args);
  const double w = sonorad::engine::total_energy(cfg.profile_ref(), cfg.medium,
                                                 cfg.engine);

  // photon estimate from a coarse sweep over the default band
  double photons = 0.0;
  if (w > 0.0) {
    const auto grid = sonorad::config::make_omega_grid(cfg);
    const auto table = sonorad::engine::spectrum_sweep(grid, cfg.profile_ref(),
                                                       cfg.medium, cfg.engine);
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
      const auto& a = table.rows[i - 1];
      const auto& b = table.rows[i];
      if (a.flag == sonorad::engine::kRowAccuracyError ||
          b.flag == sonorad::engine::kRowAccuracyError) {
        continue;
      }
      const double fa = a.p / (sonorad::constants::hbar * a.omega);
      const double fb = b.p / (sonorad::constants::hbar * b.omega);
      photons += 0.5 * (fa + fb) * (b.omega - a.omega);
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  print_report(cfg, w, photons, seconds, {});
  if (cfg.profile_ref().kind() ==
          sonorad::profile::BubbleProfile::Kind::kLorentzianDip &&
      cfg.medium.mode() == sonorad::MediumSpec::Mode::kConstant) {
    const double w_closed = sonorad::analytic::model_energy(
        cfg.profile_ref().params(), cfg.medium.n_const());
    std::cout << "W_closed_form_J      " << w_closed << "\n";
    const double w_reference = 1.8e-13;  // literature burst-energy scale
    std::cout << "W_reference_J        " << w_reference << "\n";
    std::cout << "reference_ratio      " << w_reference / w_closed << "\n";
  }
  return kExitOk;
}

int cmd_profile_check(const CommonArgs& args) {
  const auto cfg = load(args);
  const auto diag = sonorad::profile::diagnostics(cfg.profile_ref());
  std::cout.precision(10);
  std::cout << "beta_max             " << diag.beta_max << "\n";
  std::cout << "t_at_beta_max_s      " << diag.t_at_beta_max << "\n";
  std::cout << "min_radius_m         " << diag.min_radius << "\n";
  std::cout << "warning              "
            << (diag.warning ? (diag.beta_max > 1.0 ? "superluminal surface velocity"
                                                    : "first-order expansion strained")
                             : "none")
            << "\n";
  return kExitOk;
}

int cmd_selftest() {
  const auto results = sonorad::selftest::run_quick();
  bool all = true;
  for (const auto& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.details
              << "\n";
    all = all && r.pass;
  }
  std::cout << (all ? "selftest: all suites passed\n"
                    : "selftest: FAILURES present\n");
  return all ? kExitOk : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "sonorad: photon-pair emission spectrum and radiated energy of a "
      "collapsing cavity in a dielectric"};
  app.require_subcommand(1);

  CommonArgs args;

  auto add_common = [&](CLI::App* sub, bool needs_config) {
    auto* opt = sub->add_option("--config", args.config_path, "run config (JSON)");
    if (needs_config) opt->required();
    sub->add_option("--output", args.output_path, "override output.path");
    sub->add_option("--set", args.overrides,
                    "override section.key=value (repeatable)");
    sub->add_option("--profile-file", args.profile_file,
                    "tabulated profile file (overrides profile.profile_file)");
    sub->add_option("--threads", args.threads, "worker thread count");
  };

  auto* spectrum = app.add_subcommand("spectrum", "compute P(omega) and write CSV");
  add_common(spectrum, true);
  auto* energy = app.add_subcommand("energy", "compute the total radiated energy");
  add_common(energy, true);
  auto* check = app.add_subcommand("profile-check", "profile validity diagnostics");
  add_common(check, true);
  auto* selftest = app.add_subcommand("selftest", "run the built-in release gate");
  (void)selftest;

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) return cmd_spectrum(args);
    if (energy->parsed()) return cmd_energy(args);
    if (check->parsed()) return cmd_profile_check(args);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const sonorad::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const sonorad::accuracy_error& e) {
    std::cerr << "accuracy error: " << e.what() << "\n";
    return kExitAccuracy;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
