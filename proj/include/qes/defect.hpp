#pragma once

// Geometry of a point-like global monopole, Aharonov-Bohm flux line, and the
// confining potential families. Natural units, hbar = c = 1.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qes {

constexpr double pi = 3.14159265358979323846;

struct DefectGeometry {
  double alpha = 1.0;  // solid-angle deficit parameter, 0 < alpha <= 1
  double mass = 1.0;

  void validate() const {
    if (!(alpha > 0.0) || alpha > 1.0)
      throw std::domain_error("DefectGeometry: alpha must satisfy 0 < alpha <= 1");
    if (!(mass > 0.0))
      throw std::domain_error("DefectGeometry: mass must be positive");
  }
};

struct FluxField {
  double quanta = 0.0;  // flux count Phi; Phi_AB = quanta * 2*pi/charge
  double charge = 1.0;

  void validate() const {
    if (quanta < 0.0) throw std::domain_error("FluxField: quanta must be nonnegative");
    if (charge == 0.0) throw std::domain_error("FluxField: charge must be nonzero");
  }

  double flux_ab() const { return quanta * 2.0 * pi / charge; }
};

struct QuantumNumbers {
  int n = 1;  // radial mode, n >= 1
  int l = 0;  // orbital quantum number; the magnetic number m enters only
              // through degeneracy counting and is not carried here

  void validate() const {
    if (n < 1) throw std::domain_error("QuantumNumbers: n must be >= 1");
    if (l < 0) throw std::domain_error("QuantumNumbers: l must be >= 0");
  }
};

// l' = l - Phi; may be negative or non-integer.
inline double effective_orbital(int l, const FluxField& flux) {
  if (l < 0) throw std::domain_error("effective_orbital: l must be >= 0");
  return static_cast<double>(l) - flux.quanta;
}

enum class PotentialFamily {
  General,
  MieOscillator,
  Kratzer,
  ModifiedKratzer,
  Coulomb,
  Pseudoharmonic,
};

inline const char* family_name(PotentialFamily f) {
  switch (f) {
    case PotentialFamily::General: return "general";
    case PotentialFamily::MieOscillator: return "mie_oscillator";
    case PotentialFamily::Kratzer: return "kratzer";
    case PotentialFamily::ModifiedKratzer: return "modified_kratzer";
    case PotentialFamily::Coulomb: return "coulomb";
    case PotentialFamily::Pseudoharmonic: return "pseudoharmonic";
  }
  return "unknown";
}

struct MolecularParams {
  double omega = 0.0;  // oscillator frequency
  double d_e = 0.0;    // dissociation energy
  double r0 = 0.0;     // equilibrium separation
  double eta_c = 0.0;  // Coulomb coupling
};

// V(r) = beta r^2 + beta1 r + beta_m1 / r + beta_m2 / r^2 + v0.
// Molecular families carry their native parameters; reduce_potential maps
// them onto the five general coefficients.
struct PotentialSpec {
  PotentialFamily family = PotentialFamily::General;
  double beta = 0.0;
  double beta1 = 0.0;
  double beta_m1 = 0.0;
  double beta_m2 = 0.0;
  double v0 = 0.0;
  std::optional<MolecularParams> molecular;
};

inline PotentialSpec reduce_potential(const PotentialSpec& spec, const DefectGeometry& geom) {
  geom.validate();
  PotentialSpec out = spec;
  auto need_molecular = [&]() -> const MolecularParams& {
    if (!spec.molecular)
      throw std::invalid_argument(std::string("reduce_potential: family '") +
                                  family_name(spec.family) + "' requires molecular parameters");
    return *spec.molecular;
  };
  switch (spec.family) {
    case PotentialFamily::General:
      break;
    case PotentialFamily::MieOscillator:
      out.beta1 = 0.0;
      break;
    case PotentialFamily::Pseudoharmonic:
      out.beta1 = 0.0;
      out.beta_m1 = 0.0;
      break;
    case PotentialFamily::Kratzer:
    case PotentialFamily::ModifiedKratzer: {
      const MolecularParams& m = need_molecular();
      out.beta = 0.5 * geom.mass * m.omega * m.omega;
      out.beta1 = 0.0;
      out.beta_m1 = -2.0 * m.d_e * m.r0;
      out.beta_m2 = m.d_e * m.r0 * m.r0;
      out.v0 = (spec.family == PotentialFamily::ModifiedKratzer) ? m.d_e : 0.0;
      break;
    }
    case PotentialFamily::Coulomb: {
      const MolecularParams& m = need_molecular();
      out.beta = 0.5 * geom.mass * m.omega * m.omega;
      out.beta1 = 0.0;
      out.beta_m1 = -m.eta_c;
      out.beta_m2 = 0.0;
      out.v0 = 0.0;
      break;
    }
  }
  return out;
}

inline double potential_value(const PotentialSpec& spec, double r) {
  if (!(r > 0.0)) throw std::domain_error("potential_value: r must be positive");
  return spec.beta * r * r + spec.beta1 * r + spec.beta_m1 / r +
         spec.beta_m2 / (r * r) + spec.v0;
}

// V_eff = l'(l'+1)/(2 M alpha^2 r^2) + V(r)/alpha^2.
inline double effective_potential(const PotentialSpec& spec, const DefectGeometry& geom,
                                  int l, const FluxField& flux, double r) {
  geom.validate();
  if (!(r > 0.0)) throw std::domain_error("effective_potential: r must be positive");
  const double lp = effective_orbital(l, flux);
  const double a2 = geom.alpha * geom.alpha;
  return lp * (lp + 1.0) / (2.0 * geom.mass * a2 * r * r) + potential_value(spec, r) / a2;
}

struct EffectivePotentialProfile {
  std::vector<double> radii;
  std::vector<double> values;
  DefectGeometry geometry;
  FluxField flux;
  int l = 0;
  PotentialSpec potential;
};

inline EffectivePotentialProfile profile(const PotentialSpec& spec, const DefectGeometry& geom,
                                         int l, const FluxField& flux,
                                         const std::vector<double>& radii) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0))
      throw std::domain_error("profile: radii must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1]))
      throw std::domain_error("profile: radii must be strictly increasing");
  }
  EffectivePotentialProfile p;
  p.radii = radii;
  p.geometry = geom;
  p.flux = flux;
  p.l = l;
  p.potential = spec;
  p.values.reserve(radii.size());
  for (double r : radii) p.values.push_back(effective_potential(spec, geom, l, flux, r));
  return p;
}

inline std::vector<double> linspace(double lo, double hi, int points) {
  if (points < 2) throw std::invalid_argument("linspace: need at least 2 points");
  std::vector<double> out(points);
  const double h = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out[i] = lo + h * i;
  out.back() = hi;
  return out;
}

}  // namespace qes
