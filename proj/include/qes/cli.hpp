#pragma once

// Command implementations behind the qes command-line tool. Each command
// consumes a validated RunConfig (parsed from a JSON document or a named
// preset) and produces an OutputTable; exit-code mapping lives in the
// executable: 0 success, 1 verification failure, 2 configuration error.

#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qes/defect.hpp"
#include "qes/heun.hpp"
#include "qes/oracle.hpp"
#include "qes/output.hpp"
#include "qes/presets.hpp"
#include "qes/spectra.hpp"

namespace qes::cli {

inline constexpr const char* tool_version = "1.0.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepSettings {
  std::string axis;  // "phi" | "alpha" | "l"
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
  int nu = 1;  // flux offset used for the periodicity-partner column
};

struct RunConfig {
  PotentialFamily family = PotentialFamily::General;
  DefectGeometry geom;
  FluxField flux;
  PotentialSpec spec;
  int l = 0;
  std::vector<std::pair<int, int>> modes;
  std::optional<RadialGrid> grid;
  std::optional<SweepSettings> sweep;
  double profile_lo = 0.5;
  double profile_hi = 5.0;
  int profile_points = 100;
  std::vector<double> alphas;  // potential-profile combinations; empty = config alpha
  std::vector<double> phis;
  std::vector<int> ls;
  bool require_integer_flux = false;
  bool corrupt_energy = false;  // negative-control hook for verification tests
  std::string echo;             // compact serialized config, echoed as metadata
};

namespace detail {

inline PotentialFamily parse_family(const std::string& tag) {
  for (PotentialFamily f :
       {PotentialFamily::General, PotentialFamily::MieOscillator, PotentialFamily::Kratzer,
        PotentialFamily::ModifiedKratzer, PotentialFamily::Coulomb,
        PotentialFamily::Pseudoharmonic})
    if (tag == family_name(f)) return f;
  throw ConfigError("unknown value for key 'case': " + tag);
}

inline void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed,
                       const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected a JSON object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key()))
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
}

inline double require_number(const nlohmann::json& obj, const std::string& key) {
  if (!obj.contains(key)) throw ConfigError("missing required key '" + key + "'");
  if (!obj[key].is_number()) throw ConfigError("key '" + key + "' must be a number");
  return obj[key].get<double>();
}

inline double number_or(const nlohmann::json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) throw ConfigError("key '" + key + "' must be a number");
  return obj[key].get<double>();
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& doc) {
  static const std::set<std::string> top_keys = {
      "case",       "alpha",   "mass",    "phi_quanta", "beta",
      "beta1",      "beta_m1", "beta_m2", "v0",         "omega",
      "d_e",        "r0",      "eta_c",   "l",          "modes",
      "grid",       "sweep",   "profile", "alphas",     "phis",
      "ls",         "require_integer_flux"};
  detail::check_keys(doc, top_keys, "config");

  RunConfig cfg;
  if (doc.contains("case")) {
    if (!doc["case"].is_string()) throw ConfigError("key 'case' must be a string");
    cfg.family = detail::parse_family(doc["case"].get<std::string>());
  }
  cfg.geom.alpha = detail::number_or(doc, "alpha", 1.0);
  cfg.geom.mass = detail::number_or(doc, "mass", 1.0);
  cfg.flux.quanta = detail::number_or(doc, "phi_quanta", 0.0);
  try {
    cfg.geom.validate();
    cfg.flux.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }

  cfg.spec.family = cfg.family;
  cfg.spec.beta = detail::number_or(doc, "beta", 0.0);
  cfg.spec.beta1 = detail::number_or(doc, "beta1", 0.0);
  cfg.spec.beta_m1 = detail::number_or(doc, "beta_m1", 0.0);
  cfg.spec.beta_m2 = detail::number_or(doc, "beta_m2", 0.0);
  cfg.spec.v0 = detail::number_or(doc, "v0", 0.0);
  if (doc.contains("omega") || doc.contains("d_e") || doc.contains("r0") ||
      doc.contains("eta_c")) {
    MolecularParams mol;
    mol.omega = detail::number_or(doc, "omega", 0.0);
    mol.d_e = detail::number_or(doc, "d_e", 0.0);
    mol.r0 = detail::number_or(doc, "r0", 0.0);
    mol.eta_c = detail::number_or(doc, "eta_c", 0.0);
    cfg.spec.molecular = mol;
  }

  if (doc.contains("l")) {
    if (!doc["l"].is_number_integer() || doc["l"].get<int>() < 0)
      throw ConfigError("key 'l' must be a nonnegative integer");
    cfg.l = doc["l"].get<int>();
  }
  if (doc.contains("modes")) {
    if (!doc["modes"].is_array()) throw ConfigError("key 'modes' must be an array of [n, l]");
    for (const auto& m : doc["modes"]) {
      if (!m.is_array() || m.size() != 2 || !m[0].is_number_integer() ||
          !m[1].is_number_integer())
        throw ConfigError("key 'modes' entries must be integer pairs [n, l]");
      const int n = m[0].get<int>(), l = m[1].get<int>();
      if (n < 1 || l < 0) throw ConfigError("key 'modes' requires n >= 1 and l >= 0");
      cfg.modes.emplace_back(n, l);
    }
  }
  if (doc.contains("grid")) {
    detail::check_keys(doc["grid"], {"r_min", "r_max", "points"}, "grid");
    RadialGrid g;
    g.r_min = detail::require_number(doc["grid"], "r_min");
    g.r_max = detail::require_number(doc["grid"], "r_max");
    g.points = static_cast<int>(detail::require_number(doc["grid"], "points"));
    try {
      g.validate();
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
    cfg.grid = g;
  }
  if (doc.contains("sweep")) {
    detail::check_keys(doc["sweep"], {"axis", "from", "to", "step", "nu"}, "sweep");
    SweepSettings s;
    if (!doc["sweep"].contains("axis") || !doc["sweep"]["axis"].is_string())
      throw ConfigError("sweep: key 'axis' must be one of phi|alpha|l");
    s.axis = doc["sweep"]["axis"].get<std::string>();
    if (s.axis != "phi" && s.axis != "alpha" && s.axis != "l")
      throw ConfigError("sweep: key 'axis' must be one of phi|alpha|l");
    s.from = detail::require_number(doc["sweep"], "from");
    s.to = detail::require_number(doc["sweep"], "to");
    s.step = detail::number_or(doc["sweep"], "step", 1.0);
    s.nu = static_cast<int>(detail::number_or(doc["sweep"], "nu", 1.0));
    if (!(s.step > 0.0) || s.to < s.from)
      throw ConfigError("sweep: need step > 0 and to >= from");
    if (s.nu < 1) throw ConfigError("sweep: key 'nu' must be a positive integer");
    cfg.sweep = s;
  }
  if (doc.contains("profile")) {
    detail::check_keys(doc["profile"], {"r_lo", "r_hi", "points"}, "profile");
    cfg.profile_lo = detail::require_number(doc["profile"], "r_lo");
    cfg.profile_hi = detail::require_number(doc["profile"], "r_hi");
    cfg.profile_points = static_cast<int>(detail::number_or(doc["profile"], "points", 100.0));
    if (!(cfg.profile_lo > 0.0) || !(cfg.profile_hi > cfg.profile_lo) || cfg.profile_points < 2)
      throw ConfigError("profile: need 0 < r_lo < r_hi and points >= 2");
  }
  auto read_doubles = [&](const char* key, std::vector<double>& out) {
    if (!doc.contains(key)) return;
    if (!doc[key].is_array()) throw ConfigError(std::string("key '") + key + "' must be an array");
    for (const auto& v : doc[key]) {
      if (!v.is_number()) throw ConfigError(std::string("key '") + key + "' must hold numbers");
      out.push_back(v.get<double>());
    }
  };
  read_doubles("alphas", cfg.alphas);
  read_doubles("phis", cfg.phis);
  if (doc.contains("ls")) {
    if (!doc["ls"].is_array()) throw ConfigError("key 'ls' must be an array of integers");
    for (const auto& v : doc["ls"]) {
      if (!v.is_number_integer() || v.get<int>() < 0)
        throw ConfigError("key 'ls' must hold nonnegative integers");
      cfg.ls.push_back(v.get<int>());
    }
  }
  if (doc.contains("require_integer_flux")) {
    if (!doc["require_integer_flux"].is_boolean())
      throw ConfigError("key 'require_integer_flux' must be a boolean");
    cfg.require_integer_flux = doc["require_integer_flux"].get<bool>();
  }
  if (cfg.require_integer_flux &&
      cfg.flux.quanta != std::floor(cfg.flux.quanta))
    throw ConfigError("key 'phi_quanta' must be an integer when require_integer_flux is set");

  cfg.echo = doc.dump();
  return cfg;
}

// Constrained quasi-exactly-solvable record for one (n, l) mode of the
// configured family. Throws std::domain_error when the angular index j is
// complex for the configuration (non-physical).
inline SpectrumRecord record_for(const RunConfig& cfg, int n, int l) {
  switch (cfg.family) {
    case PotentialFamily::Kratzer:
    case PotentialFamily::ModifiedKratzer: {
      if (!cfg.spec.molecular)
        throw ConfigError("family '" + std::string(family_name(cfg.family)) +
                          "' requires keys 'd_e' and 'r0'");
      return energy_kratzer(n, l, *cfg.spec.molecular, cfg.geom, cfg.flux,
                            cfg.family == PotentialFamily::ModifiedKratzer);
    }
    case PotentialFamily::Coulomb: {
      if (!cfg.spec.molecular || !(cfg.spec.molecular->eta_c > 0.0))
        throw ConfigError("family 'coulomb' requires key 'eta_c' > 0");
      return energy_coulomb(n, l, cfg.spec.molecular->eta_c, cfg.geom, cfg.flux);
    }
    case PotentialFamily::MieOscillator:
      return energy_mie_constrained(n, l, cfg.spec, cfg.geom, cfg.flux);
    case PotentialFamily::General:
      return energy_general_constrained(n, l, cfg.spec, cfg.geom, cfg.flux);
    case PotentialFamily::Pseudoharmonic: {
      // No 1/r term, hence no truncation constraint: the closed-form energy
      // holds at the configured beta (even n only are series-truncating).
      PotentialSpec reduced = reduce_potential(cfg.spec, cfg.geom);
      SpectrumRecord rec;
      rec.n = n;
      rec.l = l;
      rec.energy = energy_mie(n, l, reduced, cfg.geom, cfg.flux);
      rec.constraint = ConstraintTag::none;
      rec.j_or_variant = mie_angular_index(reduced, cfg.geom, l, cfg.flux);
      rec.family = cfg.family;
      return rec;
    }
  }
  throw ConfigError("unknown potential family");
}

// Coefficient-level view of the configured potential (molecular parameters
// mapped onto the five general coefficients) for oracle runs and profiles.
inline PotentialSpec reduced_spec(const RunConfig& cfg) {
  return reduce_potential(cfg.spec, cfg.geom);
}

inline OutputTable cmd_spectrum(const RunConfig& cfg) {
  OutputTable t;
  t.metadata = {{"tool", "qes"}, {"version", tool_version}, {"command", "spectrum"},
                {"config", cfg.echo}};
  t.header = {"family", "n", "l", "j_or_variant", "constraint", "constrained_value", "energy"};
  for (const auto& [n, l] : cfg.modes) {
    SpectrumRecord rec = record_for(cfg, n, l);
    t.add_row({std::string(family_name(rec.family)), static_cast<long long>(rec.n),
               static_cast<long long>(rec.l), rec.j_or_variant,
               std::string(constraint_name(rec.constraint)), rec.constrained_value, rec.energy});
  }
  return t;
}

struct NamedTable {
  std::string name;  // suffix for split output; empty for the single wide table
  OutputTable table;
};

inline std::vector<NamedTable> cmd_potential(const RunConfig& cfg, bool split) {
  const std::vector<double> alphas = cfg.alphas.empty()
                                         ? std::vector<double>{cfg.geom.alpha}
                                         : cfg.alphas;
  const std::vector<double> phis =
      cfg.phis.empty() ? std::vector<double>{cfg.flux.quanta} : cfg.phis;
  const std::vector<int> ls = cfg.ls.empty() ? std::vector<int>{cfg.l} : cfg.ls;
  const std::vector<double> radii = linspace(cfg.profile_lo, cfg.profile_hi, cfg.profile_points);

  struct Combo {
    double alpha, phi;
    int l;
    std::string label;
  };
  std::vector<Combo> combos;
  for (double a : alphas)
    for (double p : phis)
      for (int l : ls)
        // ';' separator keeps the label CSV-safe when used as a column name.
        combos.push_back({a, p, l,
                          "alpha=" + format_significant(a) + ";phi=" + format_significant(p) +
                              ";l=" + std::to_string(l)});

  auto veff_column = [&](const Combo& c) {
    DefectGeometry g{c.alpha, cfg.geom.mass};
    FluxField f{c.phi, cfg.flux.charge};
    PotentialSpec reduced = reduce_potential(cfg.spec, g);
    std::vector<double> col;
    col.reserve(radii.size());
    for (double r : radii) col.push_back(effective_potential(reduced, g, c.l, f, r));
    return col;
  };

  std::vector<NamedTable> out;
  auto base_metadata = [&](const std::string& extra) {
    std::vector<std::pair<std::string, std::string>> md = {
        {"tool", "qes"}, {"version", tool_version}, {"command", "potential"},
        {"config", cfg.echo}};
    if (!extra.empty()) md.emplace_back("combination", extra);
    return md;
  };
  if (split) {
    for (const Combo& c : combos) {
      OutputTable t;
      t.metadata = base_metadata(c.label);
      t.header = {"r", "veff"};
      std::vector<double> col = veff_column(c);
      for (std::size_t i = 0; i < radii.size(); ++i) t.add_row({radii[i], col[i]});
      out.push_back({c.label, std::move(t)});
    }
  } else {
    OutputTable t;
    t.metadata = base_metadata("");
    t.header = {"r"};
    for (const Combo& c : combos) t.header.push_back("veff[" + c.label + "]");
    std::vector<std::vector<double>> cols;
    for (const Combo& c : combos) cols.push_back(veff_column(c));
    for (std::size_t i = 0; i < radii.size(); ++i) {
      std::vector<Cell> row{radii[i]};
      for (const auto& col : cols) row.push_back(col[i]);
      t.add_row(std::move(row));
    }
    out.push_back({"", std::move(t)});
  }
  return out;
}

struct VerifyResult {
  OutputTable table;
  bool all_converged = true;
  bool all_physical = true;
};

namespace detail {

inline void verify_row(VerifyResult& result, const RunConfig& cfg, int n, int l) {
  OutputTable& t = result.table;
  const std::string fam = family_name(cfg.family);
  try {
    SpectrumRecord rec = record_for(cfg, n, l);
    if (cfg.corrupt_energy) rec.energy += 0.1;
    OracleReport rep = verify_analytic(rec, reduced_spec(cfg), cfg.geom, cfg.flux,
                                       cfg.grid ? &*cfg.grid : nullptr);
    result.all_converged = result.all_converged && rep.converged;
    t.add_row({fam, cfg.geom.alpha, cfg.flux.quanta, static_cast<long long>(n),
               static_cast<long long>(l), rec.energy, rep.matched_energy, rep.rel_gap,
               static_cast<long long>(rep.node_count), static_cast<long long>(rep.spectral_index),
               rep.residual_norm, std::string(rep.converged ? "true" : "false"),
               std::string("true")});
  } catch (const std::domain_error&) {
    // Complex angular index: the configuration has no bound-state solution.
    result.all_physical = false;
    result.all_converged = false;
    t.add_row({fam, cfg.geom.alpha, cfg.flux.quanta, static_cast<long long>(n),
               static_cast<long long>(l), 0.0, 0.0, 0.0, static_cast<long long>(0),
               static_cast<long long>(-1), 0.0, std::string("false"), std::string("false")});
  }
}

// Standard parameter sets for the no-modes verification suite: one
// representative per certifiable family, all with an attractive 1/r piece.
inline std::vector<RunConfig> suite_families(const RunConfig& base) {
  std::vector<RunConfig> out;
  auto push = [&](PotentialFamily f, auto&& fill) {
    RunConfig c = base;
    c.family = f;
    c.spec = PotentialSpec{};
    c.spec.family = f;
    fill(c.spec);
    out.push_back(std::move(c));
  };
  push(PotentialFamily::MieOscillator, [](PotentialSpec& s) {
    s.beta_m1 = -1.0;
    s.beta_m2 = 1.0;
  });
  push(PotentialFamily::Kratzer,
       [](PotentialSpec& s) { s.molecular = MolecularParams{0.0, 1.0, 1.0, 0.0}; });
  push(PotentialFamily::ModifiedKratzer,
       [](PotentialSpec& s) { s.molecular = MolecularParams{0.0, 1.0, 1.0, 0.0}; });
  push(PotentialFamily::Coulomb,
       [](PotentialSpec& s) { s.molecular = MolecularParams{0.0, 0.0, 0.0, 1.0}; });
  push(PotentialFamily::General, [](PotentialSpec& s) {
    s.beta1 = 1.0;
    s.beta_m1 = -1.0;
    s.beta_m2 = 1.0;
  });
  return out;
}

}  // namespace detail

inline VerifyResult cmd_verify(const RunConfig& cfg) {
  VerifyResult result;
  result.table.metadata = {{"tool", "qes"}, {"version", tool_version}, {"command", "verify"},
                           {"config", cfg.echo}};
  result.table.header = {"family",      "alpha",         "phi",      "n",
                         "l",           "analytic_E",    "matched_E", "rel_gap",
                         "node_count",  "spectral_index", "residual", "converged",
                         "physical"};
  if (!cfg.modes.empty()) {
    for (const auto& [n, l] : cfg.modes) detail::verify_row(result, cfg, n, l);
    return result;
  }
  // Default suite: representative families x n in {1,2} x l in {0,1} x
  // alpha in {1, 3/4}, at the configured flux.
  for (const RunConfig& fam_cfg : detail::suite_families(cfg))
    for (double alpha : {1.0, 0.75})
      for (int n : {1, 2})
        for (int l : {0, 1}) {
          RunConfig row_cfg = fam_cfg;
          row_cfg.geom.alpha = alpha;
          detail::verify_row(result, row_cfg, n, l);
        }
  return result;
}

namespace detail {

// Closed-form energy of mode (n, l) at the given geometry and flux; the
// families with a truncation constraint report the constrained energy.
inline double sweep_energy(const RunConfig& cfg, int n, int l, const DefectGeometry& geom,
                           const FluxField& flux) {
  switch (cfg.family) {
    case PotentialFamily::Kratzer:
    case PotentialFamily::ModifiedKratzer:
    case PotentialFamily::Coulomb:
    case PotentialFamily::MieOscillator:
    case PotentialFamily::General: {
      RunConfig local = cfg;
      local.geom = geom;
      local.flux = flux;
      return record_for(local, n, l).energy;
    }
    case PotentialFamily::Pseudoharmonic:
      return energy_mie(n, l, reduce_potential(cfg.spec, geom), geom, flux);
  }
  throw ConfigError("unknown potential family");
}

}  // namespace detail

inline OutputTable cmd_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) throw ConfigError("sweep: missing 'sweep' settings");
  if (cfg.modes.empty()) throw ConfigError("sweep: key 'modes' must name at least one (n, l)");
  const auto [n, l] = cfg.modes.front();
  const SweepSettings& s = *cfg.sweep;

  OutputTable t;
  t.metadata = {{"tool", "qes"}, {"version", tool_version}, {"command", "sweep"},
                {"config", cfg.echo}};

  const int steps = static_cast<int>(std::floor((s.to - s.from) / s.step + 0.5)) + 1;
  auto value_at = [&](int i) { return s.from + i * s.step; };

  if (s.axis == "phi") {
    t.header = {"phi", "energy", "partner_energy", "difference"};
    for (int i = 0; i < steps; ++i) {
      const double phi = value_at(i);
      const double e = detail::sweep_energy(cfg, n, l, cfg.geom, FluxField{phi, cfg.flux.charge});
      // Periodicity partner: the energy depends on l and phi only through
      // l - phi, so shifting both by nu reproduces the same level.
      double partner;
      if (l - s.nu >= 0 && phi - s.nu >= 0.0)
        partner = detail::sweep_energy(cfg, n, l - s.nu, cfg.geom,
                                       FluxField{phi - s.nu, cfg.flux.charge});
      else
        partner = detail::sweep_energy(cfg, n, l + s.nu, cfg.geom,
                                       FluxField{phi + s.nu, cfg.flux.charge});
      t.add_row({phi, e, partner, e - partner});
    }
  } else if (s.axis == "alpha") {
    t.header = {"alpha", "energy"};
    for (int i = 0; i < steps; ++i) {
      const double alpha = value_at(i);
      DefectGeometry g{alpha, cfg.geom.mass};
      try {
        g.validate();
      } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
      }
      t.add_row({alpha, detail::sweep_energy(cfg, n, l, g, cfg.flux)});
    }
  } else {  // axis == "l": defect geometry vs flat space, level by level
    t.header = {"l", "energy", "energy_flat", "difference"};
    const DefectGeometry flat{1.0, cfg.geom.mass};
    for (int i = 0; i < steps; ++i) {
      const int lv = static_cast<int>(std::lround(value_at(i)));
      const double e = detail::sweep_energy(cfg, n, lv, cfg.geom, cfg.flux);
      const double e_flat = detail::sweep_energy(cfg, n, lv, flat, cfg.flux);
      t.add_row({static_cast<long long>(lv), e, e_flat, e - e_flat});
    }
  }
  return t;
}

}  // namespace qes::cli
