#pragma once

// Biconfluent-Heun reduction of the radial equation: dimensionless
// parameters, series recurrence, truncation roots, and polynomial
// wavefunction assembly.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "qes/defect.hpp"

namespace qes {

struct RadialParameters {
  double lambda = 0.0;    // 2M(E - V0)/alpha^2
  double gamma2 = 0.0;    // 2M beta / alpha^2
  double gamma1 = 0.0;    // 2M beta1 / alpha^2
  double gamma_m1 = 0.0;  // 2M beta_m1 / alpha^2
  double gamma_m2 = 0.0;  // [l'(l'+1) + 2M beta_m2] / alpha^2
};

inline RadialParameters radial_parameters(const PotentialSpec& spec, const DefectGeometry& geom,
                                          int l, const FluxField& flux, double energy) {
  geom.validate();
  if (!(spec.beta > 0.0))
    throw std::domain_error("radial_parameters: beta must be positive (x = gamma2^{1/4} r needs gamma2 > 0)");
  const double a2 = geom.alpha * geom.alpha;
  const double lp = effective_orbital(l, flux);
  RadialParameters rp;
  rp.lambda = 2.0 * geom.mass * (energy - spec.v0) / a2;
  rp.gamma2 = 2.0 * geom.mass * spec.beta / a2;
  rp.gamma1 = 2.0 * geom.mass * spec.beta1 / a2;
  rp.gamma_m1 = 2.0 * geom.mass * spec.beta_m1 / a2;
  rp.gamma_m2 = (lp * (lp + 1.0) + 2.0 * geom.mass * spec.beta_m2) / a2;
  return rp;
}

struct HeunParameters {
  double delta = 0.0;  // Lambda / sqrt(gamma2)
  double kappa = 0.0;  // gamma_m1 / gamma2^{1/4}
  double chi = 0.0;    // gamma1 / gamma2^{3/4}; zero iff beta1 = 0
  double j = 0.0;      // sqrt(gamma_m2 + 1/4)
};

inline double angular_index(double gamma_m2) {
  const double arg = gamma_m2 + 0.25;
  if (arg < 0.0)
    throw std::domain_error("angular_index: gamma_m2 + 1/4 < 0, complex index (supercritical configuration)");
  return std::sqrt(arg);
}

inline HeunParameters heun_parameters(const RadialParameters& rp) {
  if (!(rp.gamma2 > 0.0)) throw std::domain_error("heun_parameters: gamma2 must be positive");
  const double q = std::pow(rp.gamma2, 0.25);
  HeunParameters hp;
  hp.delta = rp.lambda / std::sqrt(rp.gamma2);
  hp.kappa = rp.gamma_m1 / q;
  hp.chi = rp.gamma1 / (q * q * q);
  hp.j = angular_index(rp.gamma_m2);
  return hp;
}

// One step of the series recurrence with the truncation eigenvalue
// sigma (Pi when chi = 0) held fixed:
//   d_{i+2} = [{kappa + chi (i+j+3/2)} d_{i+1} - (sigma - 2i) d_i] / [(i+2)(i+2+2j)]
inline double recurrence_step(double j, double kappa, double chi, double sigma,
                              double d_prev2, double d_prev1, int index) {
  if (index < 0) throw std::domain_error("recurrence_step: index must be >= 0");
  const double num = (kappa + chi * (index + j + 1.5)) * d_prev1 - (sigma - 2.0 * index) * d_prev2;
  return num / ((index + 2.0) * (index + 2.0 + 2.0 * j));
}

// d_0 = 1, d_1 = zeta/(1+2j) with zeta = kappa + (chi/2)(1+2j); chi = 0
// reduces to d_1 = kappa/(1+2j).
inline std::vector<double> series_coefficients(double j, double kappa, double chi,
                                               double sigma, int count) {
  if (count < 1) throw std::invalid_argument("series_coefficients: count must be >= 1");
  std::vector<double> d(count);
  d[0] = 1.0;
  if (count > 1) {
    const double zeta = kappa + 0.5 * chi * (1.0 + 2.0 * j);
    d[1] = zeta / (1.0 + 2.0 * j);
  }
  for (int i = 0; i + 2 < count; ++i)
    d[i + 2] = recurrence_step(j, kappa, chi, sigma, d[i], d[i + 1], i);
  return d;
}

// d_{n+1} as a function of kappa with sigma = 2n and chi held fixed.
inline double truncation_defect(int n, double j, double chi, double kappa) {
  std::vector<double> d = series_coefficients(j, kappa, chi, 2.0 * n, n + 2);
  return d[n + 1];
}

namespace detail {

inline double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((flo < 0.0) != (fm < 0.0)) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// All real roots kappa of d_{n+1}(kappa) = 0 with sigma = 2n, ascending.
// Sign-change scan over |kappa| <= 10 sqrt(n(n+2j+2)), bisection to 1e-13.
inline std::vector<double> truncation_kappa_roots(int n, double j, double chi) {
  if (n < 1) throw std::domain_error("truncation_kappa_roots: n must be >= 1");
  if (j < 0.0) throw std::domain_error("truncation_kappa_roots: j must be >= 0");
  auto f = [&](double k) { return truncation_defect(n, j, chi, k); };
  const double bound = 10.0 * std::sqrt(n * (n + 2.0 * j + 2.0)) + std::abs(chi) * (n + j + 2.0);
  const int cells = 8192;
  const double h = 2.0 * bound / cells;
  std::vector<double> roots;
  double x0 = -bound, f0 = f(x0);
  for (int i = 1; i <= cells; ++i) {
    const double x1 = -bound + i * h;
    const double f1 = f(x1);
    if (f0 == 0.0) roots.push_back(x0);
    else if ((f0 < 0.0) != (f1 < 0.0))
      roots.push_back(detail::bisect(f, x0, x1, 1e-13 * std::max(1.0, std::abs(x1))));
    x0 = x1;
    f0 = f1;
  }
  if (f0 == 0.0) roots.push_back(x0);
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-11; }),
              roots.end());
  return roots;
}

enum class FreeParam { beta, omega };

// Inverts kappa = gamma_m1 / gamma2^{1/4} for the confining strength:
//   beta^{n,l} = 8 M^3 beta_m1^4 / (alpha^6 kappa^4),
// and omega^{n,l} = sqrt(2 beta^{n,l} / M) when requested.
inline double kappa_to_constraint(double kappa_root, FreeParam tag, const PotentialSpec& spec,
                                  const DefectGeometry& geom) {
  geom.validate();
  if (spec.beta_m1 == 0.0) {
    if (kappa_root != 0.0)
      throw std::invalid_argument("kappa_to_constraint: beta_m1 = 0 is inconsistent with a nonzero kappa root");
    throw std::invalid_argument("kappa_to_constraint: beta_m1 = 0 leaves the constraint undetermined");
  }
  if (kappa_root == 0.0)
    throw std::invalid_argument("kappa_to_constraint: zero kappa root with nonzero beta_m1");
  const double m = geom.mass;
  const double a = geom.alpha;
  const double b1 = spec.beta_m1;
  const double k4 = kappa_root * kappa_root * kappa_root * kappa_root;
  const double beta = 8.0 * m * m * m * b1 * b1 * b1 * b1 / (std::pow(a, 6) * k4);
  if (tag == FreeParam::beta) return beta;
  return std::sqrt(2.0 * beta / m);
}

struct Exponents {
  double a = 0.0;  // leading power, (1+2j)/2
  double b = 0.5;  // Gaussian exponent
  double c = 0.0;  // linear exponent, chi/2
};

struct HeunSolution {
  Exponents exponents;
  int order = 0;               // polynomial degree n
  std::vector<double> coeffs;  // d_0 .. d_n
  double kappa_root = 0.0;
  double chi = 0.0;
  double j = 0.0;
  double pi_or_sigma = 0.0;  // truncation eigenvalue, 2n
};

// Builds the degree-n polynomial solution at a truncation root and checks
// that the next two recurrence terms vanish.
inline HeunSolution truncate_series(int n, double j, double chi, double kappa_root) {
  if (n < 1) throw std::domain_error("truncate_series: n must be >= 1");
  const double sigma = 2.0 * n;
  std::vector<double> d = series_coefficients(j, kappa_root, chi, sigma, n + 3);
  double dmax = 0.0;
  for (int i = 0; i <= n; ++i) dmax = std::max(dmax, std::abs(d[i]));
  if (std::abs(d[n + 1]) > 1e-10 * dmax || std::abs(d[n + 2]) > 1e-10 * dmax)
    throw std::runtime_error("truncate_series: kappa is not a truncation root (d_{n+1} != 0)");
  HeunSolution sol;
  sol.exponents.a = 0.5 * (1.0 + 2.0 * j);
  sol.exponents.c = 0.5 * chi;
  sol.order = n;
  sol.coeffs.assign(d.begin(), d.begin() + n + 1);
  sol.kappa_root = kappa_root;
  sol.chi = chi;
  sol.j = j;
  sol.pi_or_sigma = sigma;
  return sol;
}

// psi(r) = x^{(1+2j)/2} exp(-x^2/2 - C x) sum_i d_i x^i, x = gamma2^{1/4} r.
// Unnormalized (d_0 = 1); immutable and freely copyable.
class RadialWavefunction {
 public:
  RadialWavefunction(HeunSolution sol, double gamma2)
      : sol_(std::move(sol)), scale_(std::pow(gamma2, 0.25)) {
    if (!(gamma2 > 0.0)) throw std::domain_error("RadialWavefunction: gamma2 must be positive");
  }

  double operator()(double r) const { return at_x(scale_ * r); }

  double at_x(double x) const {
    if (x < 0.0) throw std::domain_error("RadialWavefunction: x must be >= 0");
    if (x == 0.0) return sol_.exponents.a == 0.0 ? poly(0.0) : 0.0;
    return std::pow(x, sol_.exponents.a) *
           std::exp(-0.5 * x * x - sol_.exponents.c * x) * poly(x);
  }

  double poly(double x) const {
    double acc = 0.0;
    for (auto it = sol_.coeffs.rbegin(); it != sol_.coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  double x_scale() const { return scale_; }
  const HeunSolution& solution() const { return sol_; }

 private:
  HeunSolution sol_;
  double scale_;
};

inline RadialWavefunction assemble_wavefunction(const HeunSolution& sol, const RadialParameters& rp) {
  return RadialWavefunction(sol, rp.gamma2);
}

// L2 norm over [0, inf) with the flat measure dr, adaptive Simpson to 1e-10.
inline double l2_norm(const RadialWavefunction& psi, double r_hint) {
  std::function<double(double, double, double, double, double, double, int)> simpson =
      [&](double a, double b, double fa, double fm, double fb, double whole, int depth) -> double {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = psi(lm) * psi(lm), frm = psi(rm) * psi(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 1e-10)
      return left + right;
    return simpson(a, m, fa, flm, fm, left, depth - 1) +
           simpson(m, b, fm, frm, fb, right, depth - 1);
  };
  // tail is Gaussian in x; 12/x_scale + hint is far past any turning point
  const double hi = r_hint + 12.0 / psi.x_scale();
  const double lo = 0.0;
  const double fa = 0.0, fb = psi(hi) * psi(hi);
  const double mid = 0.5 * (lo + hi);
  const double fm = psi(mid) * psi(mid);
  const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
  return std::sqrt(simpson(lo, hi, fa, fm, fb, whole, 40));
}

}  // namespace qes
