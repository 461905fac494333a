#pragma once

// Independent numerical eigensolver for the radial equation
//   -(alpha^2/2M) psi'' + [V(r) + l'(l'+1)/(2M r^2)] psi = E psi
// used to certify the analytic spectra. The indicial factor r^{j+1/2} is
// divided out and the resulting Sturm-Liouville problem is discretized with
// a second-order finite-volume scheme on a staggered grid (exact natural
// boundary at r = 0, stable down to the critical inverse-square coupling).
// The tridiagonal eigenproblem goes through LAPACK (dstevr), with a Numerov
// shooting cross-check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include <lapacke.h>

#include "qes/defect.hpp"
#include "qes/heun.hpp"
#include "qes/spectra.hpp"

namespace qes {

struct RadialGrid {
  double r_min = 0.0;
  double r_max = 0.0;
  int points = 2000;

  void validate() const {
    if (!(r_min > 0.0) || !(r_max > r_min))
      throw std::domain_error("RadialGrid: need 0 < r_min < r_max");
    if (points < 200) throw std::domain_error("RadialGrid: need at least 200 points");
  }

  double spacing() const { return (r_max - r_min) / (points - 1); }
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> function;  // on the interior nodes of the final grid
};

struct RadialSpectrum {
  std::vector<double> eigenvalues;      // Richardson-extrapolated, ascending
  std::vector<EigenPair> pairs;         // finest-grid eigenpairs
  RadialGrid grid;                      // finest grid used
  bool converged = false;
};

namespace detail {

// Schroedinger-form potential: V(r) + l'(l'+1)/(2 M r^2). The alpha^2
// sits on the kinetic term, so eigenvalues are energies directly.
inline std::function<double(double)> schroedinger_potential(const PotentialSpec& spec,
                                                            const DefectGeometry& geom, int l,
                                                            const FluxField& flux) {
  const double lp = effective_orbital(l, flux);
  const double cent = lp * (lp + 1.0) / (2.0 * geom.mass);
  return [spec, cent](double r) { return potential_value(spec, r) + cent / (r * r); };
}

inline void lowest_tridiagonal_eigenpairs(std::vector<double>& diag, std::vector<double>& off,
                                          int count, std::vector<double>& values,
                                          std::vector<double>& vectors) {
  const int n = static_cast<int>(diag.size());
  count = std::min(count, n);
  values.assign(n, 0.0);
  vectors.assign(static_cast<std::size_t>(n) * count, 0.0);
  std::vector<int> isuppz(2 * std::max(1, count));
  int found = 0;
  const int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0,
                                  0.0, 1, count, 2.0 * LAPACKE_dlamch('S'), &found,
                                  values.data(), vectors.data(), n, isuppz.data());
  if (info != 0 || found < count)
    throw std::runtime_error("oracle: LAPACK dstevr failed to converge");
  values.resize(count);
}

// Finite-volume discretization of the Sturm-Liouville form obtained by
// factoring out the indicial behavior psi = r^s u with s = j + 1/2:
//   -(alpha^2/2M) (r^{2s} u')' + r^{2s} V_rest(r) u = E r^{2s} u,
// where V_rest carries no 1/r^2 piece (centrifugal plus beta_m2 are absorbed
// into s exactly). Nodes sit at (i + 1/2) h, so the weight r^{2s} vanishes at
// the r = 0 flux point and the natural boundary condition is exact -- this
// stays stable even at the critical inverse-square coupling (j = 0), where a
// plain psi'' stencil exhibits fall-to-center. Symmetrization by sqrt of the
// node weights makes the eigenvectors equal to psi at the nodes.
// rest must carry no inverse-square coefficient (beta_m2 == 0). Because its
// remaining terms are pure powers of r, the potential and mass terms use
// exact per-cell moments of r^p; midpoint sampling of the 1/r term would
// degrade the first cell to O(h^{2s}) and stall refinement at small j.
inline std::vector<double> solve_once(const PotentialSpec& rest, double s,
                                      const DefectGeometry& geom, double r_max, int points,
                                      int count, std::vector<EigenPair>* pairs) {
  const int m = points - 2;  // interior nodes at (i + 1/2) h, i = 0..m-1
  const double h = r_max / (m + 0.5);
  const double kin = geom.alpha * geom.alpha / (2.0 * geom.mass * h * h);
  auto w = [s](double r) { return std::pow(r, 2.0 * s); };
  std::vector<double> wbar(m), vbar(m);
  for (int i = 0; i < m; ++i) {
    const double rl = i * h, rr = (i + 1) * h;
    auto moment = [&](double p) {  // cell integral of r^p, exact for p > -1
      return (std::pow(rr, p + 1.0) - (i == 0 ? 0.0 : std::pow(rl, p + 1.0))) / (p + 1.0);
    };
    const double i2s = moment(2.0 * s);
    wbar[i] = i2s / h;
    vbar[i] = (rest.beta * moment(2.0 * s + 2.0) + rest.beta1 * moment(2.0 * s + 1.0) +
               rest.beta_m1 * moment(2.0 * s - 1.0) + rest.v0 * i2s) /
              i2s;
  }
  std::vector<double> diag(m), off(m - 1);
  for (int i = 0; i < m; ++i) {
    const double wl = (i == 0) ? 0.0 : w(i * h);
    const double wr = w((i + 1) * h);
    diag[i] = kin * (wl + wr) / wbar[i] + vbar[i];
    if (i + 1 < m) off[i] = -kin * wr / std::sqrt(wbar[i] * wbar[i + 1]);
  }
  std::vector<double> values, vectors;
  lowest_tridiagonal_eigenpairs(diag, off, count, values, vectors);
  if (pairs) {
    pairs->clear();
    for (std::size_t k = 0; k < values.size(); ++k) {
      EigenPair p;
      p.value = values[k];
      p.function.assign(vectors.begin() + k * m, vectors.begin() + (k + 1) * m);
      pairs->push_back(std::move(p));
    }
  }
  return values;
}

}  // namespace detail

// Outer classical turning radius of energy e, by outward scan; used for the
// default r_max choice (3x the turning radius of the largest energy).
inline double outer_turning_radius(const std::function<double(double)>& veff, double e) {
  // March outward from the potential minimum so an inner repulsive barrier
  // above e (1/r^2 wall) is not mistaken for the outer turning point.
  double r_start = 1e-3, v_start = veff(r_start);
  for (double r = 1e-3; r < 1e4; r *= 1.1) {
    const double v = veff(r);
    if (v < v_start) {
      v_start = v;
      r_start = r;
    }
  }
  double r = std::max(0.5, r_start);
  while (r < 1e4 && veff(r) < e) r *= 1.25;
  return r;
}

inline RadialGrid default_grid(const PotentialSpec& spec, const DefectGeometry& geom, int l,
                               const FluxField& flux, double e_max, int points = 1200) {
  auto veff = detail::schroedinger_potential(spec, geom, l, flux);
  const double r_max = 3.0 * outer_turning_radius(veff, e_max);
  RadialGrid g;
  g.points = points;
  g.r_max = r_max;
  g.r_min = r_max / (points - 1);
  return g;
}

// Lowest `count` eigenpairs, grid-doubled until successive eigenvalues agree
// to 1e-8 relative, Richardson-extrapolated on the final pair of grids. The
// lowest eigenfunction's tail at r_max is checked and the domain expanded if
// it exceeds 1e-8 of its maximum.
inline RadialSpectrum solve_radial_spectrum(const PotentialSpec& spec, const DefectGeometry& geom,
                                            int l, const FluxField& flux, RadialGrid grid,
                                            int count) {
  geom.validate();
  grid.validate();
  if (!(spec.beta > 0.0))
    throw std::domain_error("solve_radial_spectrum: non-confining spec (beta <= 0), spectrum not discrete");
  if (count < 1) throw std::invalid_argument("solve_radial_spectrum: count must be >= 1");
  // Indicial exponent s = j + 1/2 from the inverse-square coefficient
  // (centrifugal term plus beta_m2); throws if j is complex (fall to center).
  const double lp = effective_orbital(l, flux);
  const double gm2 =
      (lp * (lp + 1.0) + 2.0 * geom.mass * spec.beta_m2) / (geom.alpha * geom.alpha);
  const double s = angular_index(gm2) + 0.5;
  PotentialSpec rest = spec;
  rest.beta_m2 = 0.0;

  double r_max = grid.r_max;
  for (int expand = 0; expand < 6; ++expand) {
    RadialSpectrum out;
    int points = grid.points;
    std::vector<double> coarse = detail::solve_once(rest, s, geom, r_max, points, count, nullptr);
    std::vector<double> prev_extrap;
    bool settled = false;
    for (int refine = 0; refine < 8 && !settled; ++refine) {
      const int fine_points = 2 * points - 1;  // halves the spacing exactly
      std::vector<double> finer =
          detail::solve_once(rest, s, geom, r_max, fine_points, count, &out.pairs);
      // Richardson extrapolation of the second-order scheme; the settle test
      // compares successive extrapolants, which converge far faster than the
      // raw eigenvalues.
      out.eigenvalues.resize(count);
      for (int k = 0; k < count; ++k)
        out.eigenvalues[k] = (4.0 * finer[k] - coarse[k]) / 3.0;
      if (!prev_extrap.empty()) {
        settled = true;
        for (int k = 0; k < count; ++k) {
          const double scale = std::max(1.0, std::abs(out.eigenvalues[k]));
          if (std::abs(out.eigenvalues[k] - prev_extrap[k]) > 1e-8 * scale) settled = false;
        }
      }
      prev_extrap = out.eigenvalues;
      coarse = finer;
      points = fine_points;
    }
    out.grid.r_max = r_max;
    out.grid.points = points;
    out.grid.r_min = r_max / (points - 1);
    out.converged = settled;
    // tail check on the lowest eigenfunction
    const std::vector<double>& psi0 = out.pairs.front().function;
    double peak = 0.0;
    for (double v : psi0) peak = std::max(peak, std::abs(v));
    if (std::abs(psi0.back()) <= 1e-8 * peak) {
      if (!settled) throw std::runtime_error("solve_radial_spectrum: eigensolver failed to converge under refinement");
      return out;
    }
    r_max *= 1.5;
  }
  throw std::runtime_error("solve_radial_spectrum: domain expansion did not contain the lowest state");
}

// Max-norm residual of the first-line radial equation,
//   psi'' + (1/alpha^2)[2M(E - V) - l'(l'+1)/r^2] psi = 0,
// via centered differences, scaled by max|psi| times the local coefficient
// magnitude.
inline double ode_residual(const std::function<double(double)>& psi, double energy,
                           const PotentialSpec& spec, const DefectGeometry& geom, int l,
                           const FluxField& flux, const RadialGrid& grid) {
  grid.validate();
  const double lp = effective_orbital(l, flux);
  const double a2 = geom.alpha * geom.alpha;
  const double h = grid.spacing();
  double peak = 0.0;
  for (int i = 0; i < grid.points; ++i)
    peak = std::max(peak, std::abs(psi(grid.r_min + i * h)));
  if (peak == 0.0) throw std::domain_error("ode_residual: psi vanishes on the grid");
  double worst = 0.0;
  for (int i = 1; i + 1 < grid.points; ++i) {
    const double r = grid.r_min + i * h;
    const double d2 = (psi(r + h) - 2.0 * psi(r) + psi(r - h)) / (h * h);
    const double coeff =
        (2.0 * geom.mass * (energy - potential_value(spec, r)) - lp * (lp + 1.0) / (r * r)) / a2;
    const double res = std::abs(d2 + coeff * psi(r));
    const double scale = peak * std::max(1.0, std::abs(coeff));
    worst = std::max(worst, res / scale);
  }
  return worst;
}

// Strict sign changes over interior samples, ignoring |psi| < 1e-12 max.
inline int count_nodes(const std::vector<double>& values) {
  double peak = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) throw std::domain_error("count_nodes: non-finite value");
    peak = std::max(peak, std::abs(v));
  }
  const double floor = 1e-12 * peak;
  int nodes = 0;
  double last = 0.0;
  for (double v : values) {
    if (std::abs(v) < floor) continue;
    if (last != 0.0 && (v < 0.0) != (last < 0.0)) ++nodes;
    last = v;
  }
  return nodes;
}

// Numerov outward shooting: psi(r_max) as a function of E changes sign
// across an eigenvalue; bisection refines it. Secondary cross-check on the
// matched eigenvalue.
inline double numerov_refine(const PotentialSpec& spec, const DefectGeometry& geom, int l,
                             const FluxField& flux, const RadialGrid& grid, double e_lo,
                             double e_hi) {
  grid.validate();
  auto veff = detail::schroedinger_potential(spec, geom, l, flux);
  const double h = grid.r_max / (grid.points - 1);
  const double pref = 2.0 * geom.mass / (geom.alpha * geom.alpha);
  auto endpoint = [&](double e) {
    auto k2 = [&](double r) { return pref * (e - veff(r)); };
    // march from the origin, where psi vanishes exactly; the singular
    // f(0) never enters because it multiplies psi(0) = 0
    double prev = 0.0;
    double cur = h;
    double r = 0.0;
    const double c = h * h / 12.0;
    for (int i = 1; i + 1 < grid.points; ++i) {
      const double fcur = 1.0 + c * k2(r + h);
      const double fnext = 1.0 + c * k2(r + 2.0 * h);
      const double tail = (prev == 0.0) ? 0.0 : (1.0 + c * k2(r)) * prev;
      double next = ((12.0 - 10.0 * fcur) * cur - tail) / fnext;
      r += h;
      prev = cur;
      cur = next;
      const double mag = std::abs(cur);
      if (mag > 1e100) {  // renormalize the march, sign is what matters
        prev /= mag;
        cur /= mag;
      }
    }
    return cur;
  };
  double flo = endpoint(e_lo), fhi = endpoint(e_hi);
  if ((flo < 0.0) == (fhi < 0.0))
    throw std::runtime_error("numerov_refine: bracket does not straddle an eigenvalue");
  for (int it = 0; it < 200 && e_hi - e_lo > 1e-12 * std::max(1.0, std::abs(e_hi)); ++it) {
    const double mid = 0.5 * (e_lo + e_hi);
    const double fm = endpoint(mid);
    if ((flo < 0.0) != (fm < 0.0)) {
      e_hi = mid;
      fhi = fm;
    } else {
      e_lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (e_lo + e_hi);
}

struct OracleReport {
  double target_energy = 0.0;
  double matched_energy = 0.0;
  double abs_gap = 0.0;
  double rel_gap = 0.0;
  int node_count = 0;
  int spectral_index = -1;
  double residual_norm = 0.0;
  bool converged = false;
  bool physical = true;  // false when j is complex for the configuration
};

// Certifies a SpectrumRecord: apply the constrained parameter, solve the
// spectrum, match the analytic E to the nearest eigenvalue, count analytic
// wavefunction nodes, and evaluate the ODE residual. A missing match (no
// eigenvalue within 10%) yields converged = false, never a throw.
inline OracleReport verify_analytic(const SpectrumRecord& record, const PotentialSpec& spec,
                                    const DefectGeometry& geom, const FluxField& flux,
                                    const RadialGrid* grid_opt = nullptr) {
  PotentialSpec tuned = spec;
  switch (record.constraint) {
    case ConstraintTag::beta:
      tuned.beta = record.constrained_value;
      break;
    case ConstraintTag::omega:
      tuned.beta = 0.5 * geom.mass * record.constrained_value * record.constrained_value;
      break;
    case ConstraintTag::none:
      break;
  }

  OracleReport rep;
  rep.target_energy = record.energy;

  // analytic wavefunction at the QES point
  RadialParameters rp = radial_parameters(tuned, geom, record.l, flux, record.energy);
  HeunParameters hp = heun_parameters(rp);
  RadialWavefunction psi =
      assemble_wavefunction(truncate_series(record.n, hp.j, hp.chi, hp.kappa), rp);

  RadialGrid grid = grid_opt ? *grid_opt
                             : default_grid(tuned, geom, record.l, flux,
                                            std::abs(record.energy) + 1.0);
  const int want = record.n + 3;
  RadialSpectrum spectrum = solve_radial_spectrum(tuned, geom, record.l, flux, grid, want);

  int best = 0;
  for (std::size_t k = 1; k < spectrum.eigenvalues.size(); ++k)
    if (std::abs(spectrum.eigenvalues[k] - record.energy) <
        std::abs(spectrum.eigenvalues[best] - record.energy))
      best = static_cast<int>(k);
  rep.matched_energy = spectrum.eigenvalues[best];
  rep.abs_gap = std::abs(rep.matched_energy - record.energy);
  rep.rel_gap = rep.abs_gap / std::max(1e-300, std::abs(record.energy));
  rep.spectral_index = best;

  const RadialGrid& fg = spectrum.grid;
  std::vector<double> samples(fg.points);
  for (int i = 0; i < fg.points; ++i) samples[i] = psi(fg.r_min + i * fg.spacing());
  rep.node_count = count_nodes(samples);
  rep.residual_norm = ode_residual(psi, record.energy, tuned, geom, record.l, flux, fg);

  const bool matched = rep.abs_gap <= 0.1 * std::max(1.0, std::abs(record.energy));
  rep.converged = matched && rep.rel_gap <= 1e-6 && rep.spectral_index == rep.node_count;
  return rep;
}

}  // namespace qes
