#pragma once

// Named parameter presets reproducing the effective-potential figure panels.
// Each preset is a complete CLI configuration document; the CLI loads it
// through the same validation path as a user-supplied config file.

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace qes {

inline std::vector<std::string> preset_names() {
  return {"fig1a", "fig1b", "fig1c", "fig1d", "fig2a", "fig2b", "fig2c", "fig2d"};
}

// All panels share M = beta = beta_m2 = beta_m1 = v0 = 1; the fig2 family
// adds the linear-confinement coefficient beta1 = 1.
inline nlohmann::json preset_config(const std::string& name) {
  nlohmann::json cfg = {
      {"case", "general"},
      {"mass", 1.0},
      {"beta", 1.0},
      {"beta1", 0.0},
      {"beta_m1", 1.0},
      {"beta_m2", 1.0},
      {"v0", 1.0},
      {"alpha", 1.0},
      {"phi_quanta", 0.0},
      {"l", 1},
      {"profile", {{"r_lo", 0.5}, {"r_hi", 5.0}, {"points", 100}}},
  };
  if (name == "fig1a" || name == "fig2a") {
    cfg["phi_quanta"] = 0.75;
    cfg["alphas"] = {0.25, 0.5, 0.75, 1.0};
  } else if (name == "fig1b" || name == "fig2b") {
    cfg["alpha"] = 0.75;
    cfg["phis"] = {0.0, 0.25, 0.5, 0.75};
  } else if (name == "fig1c") {
    cfg["alpha"] = 0.75;
    cfg["phi_quanta"] = 1.0;
    cfg["ls"] = {0, 1, 2, 3};
  } else if (name == "fig2c") {
    cfg["alpha"] = 0.75;
    cfg["phi_quanta"] = 0.75;
    cfg["ls"] = {0, 1, 2, 3};
  } else if (name == "fig1d" || name == "fig2d") {
    cfg["phi_quanta"] = 0.5;
    cfg["alphas"] = {0.4, 0.6, 0.8, 1.0};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  if (name.rfind("fig2", 0) == 0) cfg["beta1"] = 1.0;
  return cfg;
}

}  // namespace qes
