#pragma once

// Closed-form energy levels for each potential case, per-mode constrained
// parameters (beta^{n,l}, omega_{n,l}), flux-periodicity transforms, and
// degeneracy reports.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qes/defect.hpp"
#include "qes/heun.hpp"

namespace qes {

enum class ConstraintTag { none, beta, omega };

inline const char* constraint_name(ConstraintTag t) {
  switch (t) {
    case ConstraintTag::none: return "none";
    case ConstraintTag::beta: return "beta";
    case ConstraintTag::omega: return "omega";
  }
  return "unknown";
}

struct SpectrumRecord {
  int n = 1;
  int l = 0;
  double energy = 0.0;
  ConstraintTag constraint = ConstraintTag::none;
  double constrained_value = 0.0;
  double j_or_variant = 0.0;  // j, varsigma, or tau depending on the case
  PotentialFamily family = PotentialFamily::General;
};

// j = sqrt([l'(l'+1) + 2 M beta_m2]/alpha^2 + 1/4)
inline double mie_angular_index(const PotentialSpec& spec, const DefectGeometry& geom,
                                int l, const FluxField& flux) {
  const double lp = effective_orbital(l, flux);
  const double a2 = geom.alpha * geom.alpha;
  return angular_index((lp * (lp + 1.0) + 2.0 * geom.mass * spec.beta_m2) / a2);
}

// E = V0 + alpha sqrt(2 beta / M) (n + j + 1); beta at the caller's value.
inline double energy_mie(int n, int l, const PotentialSpec& spec, const DefectGeometry& geom,
                         const FluxField& flux) {
  geom.validate();
  if (n < 1) throw std::domain_error("energy_mie: n must be >= 1");
  if (spec.beta1 != 0.0)
    throw std::invalid_argument("energy_mie: beta1 must be zero (use energy_general_potential)");
  if (!(spec.beta > 0.0)) throw std::domain_error("energy_mie: beta must be positive");
  const double j = mie_angular_index(spec, geom, l, flux);
  return spec.v0 + geom.alpha * std::sqrt(2.0 * spec.beta / geom.mass) * (n + j + 1.0);
}

// Picks the truncation root with sign matching beta_m1, so the polynomial's
// node structure is consistent with the input potential.
inline double select_kappa_root(int n, double j, double chi, double beta_m1) {
  std::vector<double> roots = truncation_kappa_roots(n, j, chi);
  if (roots.empty())
    throw std::runtime_error("select_kappa_root: no real truncation root (no QES point for this mode)");
  const double want = (beta_m1 < 0.0) ? -1.0 : 1.0;
  double best = 0.0;
  double best_mag = -1.0;
  for (double r : roots) {
    if (r * want > 0.0 && std::abs(r) > best_mag) {
      best = r;
      best_mag = std::abs(r);
    }
  }
  if (best_mag < 0.0)
    throw std::runtime_error("select_kappa_root: no truncation root with the sign of beta_m1");
  return best;
}

// QES record for the Mie-type case: beta tuned to beta^{n,l} so that the
// degree-n polynomial solution exists, energy from the closed form at that
// beta. n=1,2 reproduce the hand-derived constraints exactly.
inline SpectrumRecord energy_mie_constrained(int n, int l, const PotentialSpec& spec,
                                             const DefectGeometry& geom, const FluxField& flux) {
  geom.validate();
  if (n < 1) throw std::domain_error("energy_mie_constrained: n must be >= 1");
  if (spec.beta_m1 == 0.0)
    throw std::invalid_argument("energy_mie_constrained: beta_m1 must be nonzero");
  const double j = mie_angular_index(spec, geom, l, flux);
  const double kappa = select_kappa_root(n, j, 0.0, spec.beta_m1);
  const double beta_nl = kappa_to_constraint(kappa, FreeParam::beta, spec, geom);
  PotentialSpec tuned = spec;
  tuned.beta = beta_nl;
  tuned.beta1 = 0.0;
  SpectrumRecord rec;
  rec.n = n;
  rec.l = l;
  rec.energy = energy_mie(n, l, tuned, geom, flux);
  rec.constraint = ConstraintTag::beta;
  rec.constrained_value = beta_nl;
  rec.j_or_variant = j;
  rec.family = spec.family;
  return rec;
}

// Kratzer / modified-Kratzer record via the generic kappa-inversion path;
// reports the constrained frequency omega_{n,l}. The modified flag adds the
// dissociation-energy offset through V0 = D_e.
inline SpectrumRecord energy_kratzer(int n, int l, const MolecularParams& mol,
                                     const DefectGeometry& geom, const FluxField& flux,
                                     bool modified) {
  if (!(mol.d_e > 0.0) || !(mol.r0 > 0.0))
    throw std::domain_error("energy_kratzer: D_e and r0 must be positive");
  PotentialSpec spec;
  spec.family = modified ? PotentialFamily::ModifiedKratzer : PotentialFamily::Kratzer;
  spec.molecular = mol;
  PotentialSpec reduced = reduce_potential(spec, geom);
  SpectrumRecord rec = energy_mie_constrained(n, l, reduced, geom, flux);
  rec.constraint = ConstraintTag::omega;
  rec.constrained_value = std::sqrt(2.0 * rec.constrained_value / geom.mass);
  rec.family = spec.family;
  return rec;
}

// Coulomb record; tau plays the role of j with beta_m2 = 0.
inline SpectrumRecord energy_coulomb(int n, int l, double eta_c, const DefectGeometry& geom,
                                     const FluxField& flux) {
  if (!(eta_c > 0.0)) throw std::domain_error("energy_coulomb: eta_c must be positive");
  PotentialSpec spec;
  spec.family = PotentialFamily::Coulomb;
  spec.molecular = MolecularParams{0.0, 0.0, 0.0, eta_c};
  PotentialSpec reduced = reduce_potential(spec, geom);
  SpectrumRecord rec = energy_mie_constrained(n, l, reduced, geom, flux);
  rec.constraint = ConstraintTag::omega;
  rec.constrained_value = std::sqrt(2.0 * rec.constrained_value / geom.mass);
  rec.family = PotentialFamily::Coulomb;
  return rec;
}

// E = V0 + alpha sqrt(2 beta / M)(n + 1 + j) - beta1^2/(4 beta); the
// beta1 = 0 specialization coincides with energy_mie.
inline double energy_general_potential_value(int n, int l, const PotentialSpec& spec,
                                             const DefectGeometry& geom, const FluxField& flux) {
  geom.validate();
  if (n < 1) throw std::domain_error("energy_general_potential: n must be >= 1");
  if (!(spec.beta > 0.0)) throw std::domain_error("energy_general_potential: beta must be positive");
  const double j = mie_angular_index(spec, geom, l, flux);
  double e = spec.v0 + geom.alpha * std::sqrt(2.0 * spec.beta / geom.mass) * (n + 1.0 + j);
  if (spec.beta1 != 0.0) e -= spec.beta1 * spec.beta1 / (4.0 * spec.beta);
  return e;
}

inline SpectrumRecord energy_general_potential(int n, int l, const PotentialSpec& spec,
                                               const DefectGeometry& geom, const FluxField& flux) {
  SpectrumRecord rec;
  rec.n = n;
  rec.l = l;
  rec.energy = energy_general_potential_value(n, l, spec, geom, flux);
  rec.constraint = ConstraintTag::none;
  rec.constrained_value = spec.beta;
  rec.j_or_variant = mie_angular_index(spec, geom, l, flux);
  rec.family = PotentialFamily::General;
  return rec;
}

// QES point of the general potential with beta1 != 0: both kappa and chi
// depend on beta, so the truncation condition d_{n+1} = 0 is solved for
// beta directly by sign-change bisection.
inline SpectrumRecord energy_general_constrained(int n, int l, const PotentialSpec& spec,
                                                 const DefectGeometry& geom, const FluxField& flux) {
  geom.validate();
  if (n < 1) throw std::domain_error("energy_general_constrained: n must be >= 1");
  if (spec.beta_m1 == 0.0)
    throw std::invalid_argument("energy_general_constrained: beta_m1 must be nonzero");
  const double j = mie_angular_index(spec, geom, l, flux);
  const double m = geom.mass;
  const double a2 = geom.alpha * geom.alpha;
  auto defect = [&](double beta) {
    const double g2 = 2.0 * m * beta / a2;
    const double q = std::pow(g2, 0.25);
    const double kappa = (2.0 * m * spec.beta_m1 / a2) / q;
    const double chi = (2.0 * m * spec.beta1 / a2) / (q * q * q);
    return truncation_defect(n, j, chi, kappa);
  };
  // kappa -> -inf sign(beta_m1) as beta -> 0+ and kappa, chi -> 0 as
  // beta -> inf, so a sign change exists whenever the chi = 0 problem has
  // a root of the matching sign. Scan log-spaced brackets.
  double lo = 1e-8, hi = 1e8;
  double beta_root = -1.0;
  double b0 = lo, f0 = defect(b0);
  const int cells = 4096;
  for (int i = 1; i <= cells; ++i) {
    const double b1 = lo * std::pow(hi / lo, static_cast<double>(i) / cells);
    const double f1 = defect(b1);
    if (f0 == 0.0) { beta_root = b0; break; }
    if ((f0 < 0.0) != (f1 < 0.0)) {
      double blo = b0, bhi = b1;
      for (int it = 0; it < 200 && bhi - blo > 1e-15 * bhi; ++it) {
        const double mid = 0.5 * (blo + bhi);
        if ((defect(blo) < 0.0) != (defect(mid) < 0.0)) bhi = mid;
        else blo = mid;
      }
      beta_root = 0.5 * (blo + bhi);
      break;
    }
    b0 = b1;
    f0 = f1;
  }
  if (beta_root <= 0.0)
    throw std::runtime_error("energy_general_constrained: no QES beta root found");
  PotentialSpec tuned = spec;
  tuned.beta = beta_root;
  SpectrumRecord rec;
  rec.n = n;
  rec.l = l;
  rec.energy = energy_general_potential_value(n, l, tuned, geom, flux);
  rec.constraint = ConstraintTag::beta;
  rec.constrained_value = beta_root;
  rec.j_or_variant = j;
  rec.family = PotentialFamily::General;
  return rec;
}

// Evaluates the same record at (l, phi +/- nu) and (l -/+ nu, phi); the
// energies agree exactly because every formula depends on l and phi only
// through l - phi.
inline std::pair<SpectrumRecord, SpectrumRecord> flux_shift_identity(
    const std::function<SpectrumRecord(int, FluxField)>& eval, int l, const FluxField& flux,
    int nu) {
  if (l - nu < 0)
    throw std::out_of_range("flux_shift_identity: l - nu < 0 is outside the identity's domain");
  FluxField shifted = flux;
  shifted.quanta = flux.quanta + nu;
  return {eval(l, shifted), eval(l - nu, flux)};
}

struct DegeneracyReport {
  double alpha = 1.0;
  std::vector<std::pair<int, double>> levels;         // (l, E_{n,l}), sorted by l
  std::vector<std::pair<int, int>> collisions;        // l pairs with |dE| < tol
};

inline DegeneracyReport degeneracy_report(int n, int l_max, const PotentialSpec& spec,
                                          const DefectGeometry& geom, const FluxField& flux,
                                          double tol = 1e-9) {
  if (l_max < 1) throw std::domain_error("degeneracy_report: l_max must be >= 1");
  DegeneracyReport rep;
  rep.alpha = geom.alpha;
  for (int l = 0; l <= l_max; ++l)
    rep.levels.emplace_back(l, energy_mie(n, l, spec, geom, flux));
  for (std::size_t i = 0; i < rep.levels.size(); ++i)
    for (std::size_t k = i + 1; k < rep.levels.size(); ++k)
      if (std::abs(rep.levels[i].second - rep.levels[k].second) < tol)
        rep.collisions.emplace_back(rep.levels[i].first, rep.levels[k].first);
  return rep;
}

}  // namespace qes
