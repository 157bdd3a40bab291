// cvdg: command-line driver for photon-added/subtracted Gaussian state experiments.
//
//   cvdg validate|purity-scan|negativity-scan|wigner-slice|cumulants --config file.json [--out file.csv] [--oracle]
//
// Exit codes: 0 ok, 1 usage or config error, 2 invalid state, 3 numeric failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "cvdg/errors.hpp"
#include "cvdg/experiments.hpp"
#include "cvdg/io.hpp"

namespace {

enum Exit { ok = 0, usage = 1, invalid_state = 2, numeric = 3 };

using cvdg::experiments::Config;
using cvdg::experiments::Table;

int emit(const Table& table, const std::string& out_path) {
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
  if (out_path.empty() || out_path == "-") {
    cvdg::experiments::write_csv(std::cout, table);
    return ok;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << '\n';
    return usage;
  }
  cvdg::experiments::write_csv(out, table);
  return ok;
}

int run_validate(const Config& config, const std::string& out_path) {
  const auto V = config.covariance();
  const auto report = cvdg::experiments::validate_state(V);
  std::ostringstream text;
  text << report.summary << '\n';
  text << "min eigenvalue of V + iJ: " << cvdg::experiments::format_number(report.min_eigenvalue) << '\n';
  if (report.valid) {
    text << "symplectic spectrum:";
    for (Eigen::Index i = 0; i < report.spectrum.size(); ++i) {
      text << ' ' << cvdg::experiments::format_number(report.spectrum(i));
    }
    text << '\n' << "purity: " << cvdg::experiments::format_number(report.purity) << '\n';
  }
  std::cout << text.str();
  if (!out_path.empty() && out_path != "-") {
    cvdg::io::Json j = {{"valid", report.valid}, {"min_eigenvalue", report.min_eigenvalue}, {"summary", report.summary}};
    if (report.valid) {
      j["symplectic_spectrum"] = cvdg::io::to_json(report.spectrum);
      j["purity"] = report.purity;
    }
    std::ofstream out(out_path, std::ios::binary);
    out << j.dump(2) << '\n';
  }
  return report.valid ? ok : invalid_state;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Photon-added and photon-subtracted Gaussian states"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_path;
  bool oracle = false;

  const auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", out_path, "output file; stdout when omitted");
    return cmd;
  };
  CLI::App* validate = add("validate", "check a covariance matrix and print its symplectic spectrum");
  CLI::App* purity = add("purity-scan", "reduced-state purity against the superposition weight x2^2");
  CLI::App* negativity = add("negativity-scan", "negativity witness over noise, squeezing or mixture size");
  CLI::App* slice = add("wigner-slice", "Wigner function on a two-dimensional phase-space grid");
  CLI::App* cumulants = add("cumulants", "truncated correlations of Q(f)^n, closed form and recursion");
  slice->add_flag("--oracle", oracle, "add a truncated Fock-space column (at most two modes)")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    const Config config = Config::load(config_path);
    if (validate->parsed()) return run_validate(config, out_path);
    if (purity->parsed()) return emit(cvdg::experiments::purity_scan(config), out_path);
    if (negativity->parsed()) return emit(cvdg::experiments::negativity_scan(config), out_path);
    if (slice->parsed()) return emit(cvdg::experiments::wigner_slice(config, oracle), out_path);
    if (cumulants->parsed()) return emit(cvdg::experiments::cumulants(config), out_path);
  } catch (const cvdg::InvalidStateError& e) {
    std::cerr << "invalid state: " << e.what() << '\n';
    return invalid_state;
  } catch (const cvdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return usage;
  } catch (const cvdg::DimensionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return usage;
  } catch (const cvdg::NotNormalisedError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return usage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return numeric;
  }
  return usage;
}
