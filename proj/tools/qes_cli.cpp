// qes: bound-state spectra of a particle around a point-like global monopole
// with Aharonov-Bohm flux, for harmonic-plus-Mie-type and molecular
// potentials, certified against an independent finite-difference eigensolver.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qes/cli.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string output;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path,
                  "JSON configuration file path, or '-' for standard input");
  cmd->add_option("--preset", opt.preset, "named figure preset (fig1a ... fig2d)")
      ->check(CLI::IsMember(qes::preset_names()));
  cmd->add_option("--output", opt.output, "output file path (default: standard output)");
  cmd->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

nlohmann::json load_config(const CommonOptions& opt) {
  if (opt.preset.empty() && opt.config_path.empty())
    throw qes::cli::ConfigError("no configuration given: pass --config and/or --preset");
  nlohmann::json doc = nlohmann::json::object();
  if (!opt.preset.empty()) doc = qes::preset_config(opt.preset);
  if (!opt.config_path.empty()) {
    std::string text;
    if (opt.config_path == "-") {
      std::ostringstream ss;
      ss << std::cin.rdbuf();
      text = ss.str();
    } else {
      std::ifstream in(opt.config_path, std::ios::binary);
      if (!in)
        throw qes::cli::ConfigError("cannot open config file: " + opt.config_path);
      std::ostringstream ss;
      ss << in.rdbuf();
      text = ss.str();
    }
    nlohmann::json user;
    try {
      user = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw qes::cli::ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!user.is_object()) throw qes::cli::ConfigError("config must be a JSON object");
    // User keys override preset values.
    for (const auto& item : user.items()) doc[item.key()] = item.value();
  }
  return doc;
}

std::string split_path(const std::string& base, const std::string& label) {
  std::string tag = label;
  for (char& c : tag)
    if (c == ';' || c == '=') c = '_';
  const auto dot = base.rfind('.');
  const auto slash = base.rfind('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
    return base + "." + tag;
  return base.substr(0, dot) + "." + tag + base.substr(dot);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-exactly-solvable bound states around a global monopole "
               "with Aharonov-Bohm flux"};
  app.require_subcommand(1);

  CommonOptions spectrum_opt, potential_opt, verify_opt, sweep_opt;
  bool split = false;
  bool corrupt_energy = false;

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "closed-form energies and constrained parameters per (n, l) mode");
  add_common(spectrum, spectrum_opt);

  CLI::App* potential = app.add_subcommand(
      "potential", "effective-potential profiles over a radial range");
  add_common(potential, potential_opt);
  potential->add_flag("--split", split,
                      "write one file per (alpha, phi, l) combination instead of wide columns");

  CLI::App* verify = app.add_subcommand(
      "verify", "certify closed-form energies against the numerical eigensolver");
  add_common(verify, verify_opt);
  verify->add_flag("--corrupt-energy", corrupt_energy,
                   "negative control: offset analytic energies before verification");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "tabulate one mode's energy along a phi, alpha, or l axis");
  add_common(sweep, sweep_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (spectrum->parsed()) {
      qes::cli::RunConfig cfg = qes::cli::parse_config(load_config(spectrum_opt));
      qes::write_table(qes::cli::cmd_spectrum(cfg), spectrum_opt.output, spectrum_opt.format);
      return kExitOk;
    }
    if (potential->parsed()) {
      qes::cli::RunConfig cfg = qes::cli::parse_config(load_config(potential_opt));
      auto tables = qes::cli::cmd_potential(cfg, split);
      for (const auto& named : tables) {
        const std::string path =
            (split && !potential_opt.output.empty() && potential_opt.output != "-")
                ? split_path(potential_opt.output, named.name)
                : potential_opt.output;
        qes::write_table(named.table, path, potential_opt.format);
      }
      return kExitOk;
    }
    if (verify->parsed()) {
      qes::cli::RunConfig cfg = qes::cli::parse_config(load_config(verify_opt));
      cfg.corrupt_energy = corrupt_energy;
      qes::cli::VerifyResult result = qes::cli::cmd_verify(cfg);
      qes::write_table(result.table, verify_opt.output, verify_opt.format);
      if (!result.all_physical) {
        std::cerr << "qes verify: configuration yields a complex angular index "
                     "(no bound state)\n";
        return kExitConfigError;
      }
      return result.all_converged ? kExitOk : kExitVerifyFailed;
    }
    // sweep
    qes::cli::RunConfig cfg = qes::cli::parse_config(load_config(sweep_opt));
    qes::write_table(qes::cli::cmd_sweep(cfg), sweep_opt.output, sweep_opt.format);
    return kExitOk;
  } catch (const qes::cli::ConfigError& e) {
    std::cerr << "qes: configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qes: configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    std::cerr << "qes: configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "qes: error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
