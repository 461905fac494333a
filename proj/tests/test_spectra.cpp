#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qes/spectra.hpp"

using namespace qes;

namespace {

PotentialSpec mie(double beta, double beta_m1, double beta_m2, double v0) {
  PotentialSpec s;
  s.family = PotentialFamily::MieOscillator;
  s.beta = beta;
  s.beta_m1 = beta_m1;
  s.beta_m2 = beta_m2;
  s.v0 = v0;
  return s;
}

}  // namespace

TEST_CASE("unconstrained Mie energy") {
  DefectGeometry flat{1.0, 1.0};
  CHECK(energy_mie(1, 0, mie(0.5, 0.0, 0.0, 0.0), flat, FluxField{0.0}) == doctest::Approx(2.5));
  CHECK(energy_mie(1, 0, mie(0.5, 0.0, 0.0, 2.0), flat, FluxField{0.0}) == doctest::Approx(4.5));

  DefectGeometry defect{0.75, 1.0};
  const double expect = 1.0 + 0.75 * std::sqrt(2.0) * (2.0 + std::sqrt(4.111111111111111 + 0.25));
  CHECK(energy_mie(1, 1, mie(1.0, 0.0, 1.0, 1.0), defect, FluxField{0.75}) ==
        doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("constrained Mie records, first and second level closed forms") {
  DefectGeometry flat{1.0, 1.0};
  const FluxField off{0.0};

  SUBCASE("n=1") {
    auto rec = energy_mie_constrained(1, 0, mie(0.0, 1.0, 0.0, 0.0), flat, off);
    CHECK(rec.constrained_value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rec.energy == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(rec.j_or_variant == doctest::Approx(0.5));
  }
  SUBCASE("n=2") {
    auto rec = energy_mie_constrained(2, 0, mie(0.0, 1.0, 0.0, 0.0), flat, off);
    CHECK(rec.constrained_value == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(rec.energy == doctest::Approx(0.7).epsilon(1e-12));
  }
}

TEST_CASE("bb16 at beta^{n,l} equals the bb18/bb21 closed forms") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> mass_d(0.4, 3.0);
  std::uniform_real_distribution<double> alpha_d(0.4, 1.0);
  std::uniform_real_distribution<double> b1_d(0.2, 2.5);
  std::uniform_real_distribution<double> b2_d(0.0, 2.0);
  std::uniform_real_distribution<double> phi_d(0.0, 0.9);
  std::uniform_int_distribution<int> l_d(0, 3);
  std::uniform_int_distribution<int> sign_d(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    DefectGeometry geom{alpha_d(rng), mass_d(rng)};
    const FluxField flux{phi_d(rng)};
    const int l = l_d(rng);
    const double bm1 = (sign_d(rng) ? 1.0 : -1.0) * b1_d(rng);
    PotentialSpec spec = mie(0.0, bm1, b2_d(rng), 0.5);
    const double j = mie_angular_index(spec, geom, l, flux);
    const double m = geom.mass, a = geom.alpha;

    auto r1 = energy_mie_constrained(1, l, spec, geom, flux);
    const double beta1l = std::pow(m, 3) / (2.0 * std::pow(a, 6)) *
                          std::pow(bm1 * bm1 / (j + 0.5), 2);
    CHECK(r1.constrained_value == doctest::Approx(beta1l).epsilon(1e-12));
    const double e1 = spec.v0 + (m / (a * a)) * bm1 * bm1 * (2.0 + j) / (j + 0.5);
    CHECK(r1.energy == doctest::Approx(e1).epsilon(1e-12));
    PotentialSpec tuned = spec;
    tuned.beta = r1.constrained_value;
    CHECK(energy_mie(1, l, tuned, geom, flux) == doctest::Approx(r1.energy).epsilon(1e-12));

    auto r2 = energy_mie_constrained(2, l, spec, geom, flux);
    const double beta2l = std::pow(m, 3) / (32.0 * std::pow(a, 6)) *
                          std::pow(bm1 * bm1 / (j + 0.75), 2);
    CHECK(r2.constrained_value == doctest::Approx(beta2l).epsilon(1e-12));
    const double e2 = spec.v0 + (m / (4.0 * a * a)) * bm1 * bm1 * (3.0 + j) / (j + 0.75);
    CHECK(r2.energy == doctest::Approx(e2).epsilon(1e-12));
  }
}

TEST_CASE("kratzer spectra") {
  DefectGeometry flat{1.0, 1.0};
  const FluxField off{0.0};
  MolecularParams mol{0.0, 1.0, 1.0, 0.0};

  SUBCASE("n=1, flat") {
    auto rec = energy_kratzer(1, 0, mol, flat, off, false);
    CHECK(rec.j_or_variant == doctest::Approx(1.5));
    CHECK(rec.constrained_value == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(rec.energy == doctest::Approx(7.0).epsilon(1e-12));
  }
  SUBCASE("modified flag adds De") {
    auto rec = energy_kratzer(1, 0, mol, flat, off, true);
    CHECK(rec.energy == doctest::Approx(8.0).epsilon(1e-12));
  }
  SUBCASE("n=2, flat") {
    auto rec = energy_kratzer(2, 0, mol, flat, off, false);
    CHECK(rec.constrained_value == doctest::Approx(1.0 / 2.25).epsilon(1e-12));
    CHECK(rec.energy == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("closed-form frequency constraints, random draws") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> pos(0.3, 2.0);
    std::uniform_real_distribution<double> alpha_d(0.4, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
      DefectGeometry geom{alpha_d(rng), pos(rng)};
      MolecularParams m{0.0, pos(rng), pos(rng), 0.0};
      const FluxField flux{0.5};
      auto r1 = energy_kratzer(1, 1, m, geom, flux, false);
      const double vs = r1.j_or_variant;
      const double w1 = 4.0 * geom.mass * m.d_e * m.d_e * m.r0 * m.r0 /
                        (std::pow(geom.alpha, 3) * (vs + 0.5));
      CHECK(r1.constrained_value == doctest::Approx(w1).epsilon(1e-12));
      auto r2 = energy_kratzer(2, 1, m, geom, flux, false);
      const double w2 = geom.mass * m.d_e * m.d_e * m.r0 * m.r0 /
                        (std::pow(geom.alpha, 3) * (vs + 0.75));
      CHECK(r2.constrained_value == doctest::Approx(w2).epsilon(1e-12));
    }
  }
}

TEST_CASE("coulomb spectra") {
  DefectGeometry flat{1.0, 1.0};
  const FluxField off{0.0};

  SUBCASE("n=1 flat") {
    auto rec = energy_coulomb(1, 0, 1.0, flat, off);
    CHECK(rec.j_or_variant == doctest::Approx(0.5));
    CHECK(rec.constrained_value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rec.energy == doctest::Approx(2.5).epsilon(1e-12));
  }
  SUBCASE("n=2 flat") {
    auto rec = energy_coulomb(2, 0, 1.0, flat, off);
    CHECK(rec.constrained_value == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(rec.energy == doctest::Approx(0.7).epsilon(1e-12));
  }
  SUBCASE("ff2 display form agrees: alpha inside vs outside the bracket") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> pos(0.3, 2.0);
    std::uniform_real_distribution<double> alpha_d(0.4, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
      DefectGeometry geom{alpha_d(rng), pos(rng)};
      const FluxField flux{0.25};
      const double eta = pos(rng);
      for (int n : {1, 2}) {
        auto rec = energy_coulomb(n, 1, eta, geom, flux);
        const double lp = effective_orbital(1, flux);
        const double inside = rec.constrained_value *
                              ((n + 1.0) * geom.alpha +
                               std::sqrt(lp * (lp + 1.0) + geom.alpha * geom.alpha / 4.0));
        CHECK(rec.energy == doctest::Approx(inside).epsilon(1e-12));
      }
    }
  }
  SUBCASE("flat-space j algebra: sqrt(l(l+1)+1/4) = l + 1/2") {
    for (int l = 0; l <= 4; ++l) {
      auto rec = energy_coulomb(1, l, 0.7, flat, off);
      CHECK(rec.j_or_variant == doctest::Approx(l + 0.5).epsilon(1e-14));
      CHECK(rec.energy ==
            doctest::Approx(rec.constrained_value * (2.0 + l + 0.5)).epsilon(1e-13));
    }
  }
}

TEST_CASE("general potential energy") {
  DefectGeometry flat{1.0, 1.0};
  const FluxField off{0.0};

  SUBCASE("cornell term shifts by -beta1^2/(4 beta)") {
    PotentialSpec spec;
    spec.beta = 0.5;
    spec.beta1 = 1.0;
    CHECK(energy_general_potential_value(1, 0, spec, flat, off) == doctest::Approx(2.0));
  }
  SUBCASE("beta1 = 0 reduction is exact") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> pos(0.2, 3.0);
    std::uniform_real_distribution<double> alpha_d(0.4, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      PotentialSpec spec = mie(pos(rng), 0.0, pos(rng), pos(rng));
      DefectGeometry geom{alpha_d(rng), pos(rng)};
      const FluxField flux{0.3};
      const double a = energy_general_potential_value(1, 1, spec, geom, flux);
      const double b = energy_mie(1, 1, spec, geom, flux);
      CHECK(a == doctest::Approx(b).epsilon(1e-14));
    }
  }
  SUBCASE("fig 2(a) regression fixture") {
    // alpha = 3/4 would pair with the caption's flux 3/4; the caption fixes
    // l = 1 = M = beta = beta_m2 = beta_m1 = beta1 = V0
    PotentialSpec spec;
    spec.beta = spec.beta1 = spec.beta_m1 = spec.beta_m2 = spec.v0 = 1.0;
    DefectGeometry geom{0.75, 1.0};
    const double e = energy_general_potential_value(1, 1, spec, geom, FluxField{0.75});
    CHECK(std::isfinite(e));
    CHECK(e == doctest::Approx(5.0863259868933115).epsilon(1e-12));
  }
}

TEST_CASE("general QES point with beta1 != 0 certifies its truncation") {
  PotentialSpec spec;
  spec.beta1 = 1.0;
  spec.beta_m1 = -1.0;
  spec.beta_m2 = 0.5;
  DefectGeometry geom{0.75, 1.0};
  const FluxField flux{0.5};
  for (int n : {1, 2}) {
    auto rec = energy_general_constrained(n, 1, spec, geom, flux);
    PotentialSpec tuned = spec;
    tuned.beta = rec.constrained_value;
    auto hp = heun_parameters(radial_parameters(tuned, geom, 1, flux, rec.energy));
    CHECK(std::abs(truncation_defect(n, hp.j, hp.chi, hp.kappa)) < 1e-10);
    CHECK(rec.energy ==
          doctest::Approx(energy_general_potential_value(n, 1, tuned, geom, flux)).epsilon(1e-13));
  }
}

TEST_CASE("flux periodicity identity") {
  DefectGeometry geom{0.75, 1.2};
  PotentialSpec spec = mie(0.0, -1.3, 0.4, 0.2);

  auto eval = [&](int l, FluxField f) { return energy_mie_constrained(1, l, spec, geom, f); };

  SUBCASE("mie case") {
    for (int nu : {1, 2, 3}) {
      auto [shifted, partner] = flux_shift_identity(eval, 3, FluxField{0.25}, nu);
      CHECK(shifted.energy == doctest::Approx(partner.energy).epsilon(1e-13));
    }
  }
  SUBCASE("nu = 0 gives identical records") {
    auto [a, b] = flux_shift_identity(eval, 1, FluxField{0.25}, 0);
    CHECK(a.energy == b.energy);
  }
  SUBCASE("kratzer case") {
    MolecularParams mol{0.0, 1.1, 0.9, 0.0};
    auto keval = [&](int l, FluxField f) { return energy_kratzer(1, l, mol, geom, f, false); };
    auto [shifted, partner] = flux_shift_identity(keval, 2, FluxField{0.4}, 1);
    CHECK(shifted.energy == doctest::Approx(partner.energy).epsilon(1e-13));
  }
  SUBCASE("domain edge") {
    CHECK_THROWS_AS(flux_shift_identity(eval, 1, FluxField{0.25}, 2), std::out_of_range);
  }
  SUBCASE("mie example: E_{1,1}(1.25) = E_{1,0}(0.25)") {
    auto [a, b] = flux_shift_identity(eval, 1, FluxField{0.25}, 1);
    CHECK(b.l == 0);  // partner record
    CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-14));
  }
}

TEST_CASE("monotonicity of the Mie energy") {
  DefectGeometry geom{0.6, 1.0};
  PotentialSpec spec = mie(0.8, 0.0, 0.3, 0.0);
  const FluxField flux{0.5};
  double prev = energy_mie(1, 1, spec, geom, flux);
  for (int n = 2; n <= 6; ++n) {
    const double cur = energy_mie(n, 1, spec, geom, flux);
    CHECK(cur > prev);
    prev = cur;
  }
  // strictly increasing in l (hence in j) for l' = l - phi > 0
  prev = energy_mie(1, 1, spec, geom, flux);
  for (int l = 2; l <= 5; ++l) {
    const double cur = energy_mie(1, l, spec, geom, flux);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("degeneracy report") {
  SUBCASE("flat pure oscillator: no collisions, increasing in l") {
    PotentialSpec spec = mie(0.5, 0.0, 0.0, 0.0);
    DefectGeometry flat{1.0, 1.0};
    auto rep = degeneracy_report(1, 4, spec, flat, FluxField{0.0});
    CHECK(rep.collisions.empty());
    for (std::size_t i = 1; i < rep.levels.size(); ++i)
      CHECK(rep.levels[i].second > rep.levels[i - 1].second);
  }
  SUBCASE("defect shifts every level") {
    PotentialSpec spec = mie(0.5, 0.0, 0.0, 0.0);
    auto flat = degeneracy_report(1, 3, spec, DefectGeometry{1.0, 1.0}, FluxField{0.0});
    auto bent = degeneracy_report(1, 3, spec, DefectGeometry{0.5, 1.0}, FluxField{0.0});
    for (std::size_t i = 0; i < flat.levels.size(); ++i)
      CHECK(std::abs(flat.levels[i].second - bent.levels[i].second) > 1e-3);
  }
  SUBCASE("integer flux relabels l") {
    PotentialSpec spec = mie(0.5, 0.0, 0.2, 0.0);
    DefectGeometry geom{0.8, 1.0};
    auto with_flux = degeneracy_report(1, 4, spec, geom, FluxField{1.0});
    auto without = degeneracy_report(1, 4, spec, geom, FluxField{0.0});
    for (int l = 1; l <= 4; ++l)
      CHECK(with_flux.levels[l].second == doctest::Approx(without.levels[l - 1].second).epsilon(1e-14));
  }
}
