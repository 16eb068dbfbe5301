#include <doctest.h>

#include <cmath>

#include "modspace/experiments.hpp"
#include "modspace/splitstep.hpp"
#include "oracle_helpers.hpp"

using namespace modspace;

namespace {

PotentialSpec none_spec(int dim, int m) {
  PotentialSpec s;
  s.dim = dim;
  s.components = m;
  return s;
}

PotentialSpec harmonic(int dim, int m) {
  PotentialSpec s = none_spec(dim, m);
  s.quadratic = quadratic_preset("harmonic", dim, 1.0);
  return s;
}

}  // namespace

TEST_CASE("EvolutionConfig validation") {
  EvolutionConfig c;
  c.dt = 1e-3;
  c.T = 1.0;
  c.validate();
  c.dt = 3e-4;  // T/dt not integral
  CHECK_THROWS(c.validate());
  c.dt = -1;
  CHECK_THROWS(c.validate());
  c.dt = 1e-3;
  c.splitting_order = 4;
  CHECK_THROWS(c.validate());
}

TEST_CASE("split_step examples") {
  Grid g(1, 128, 12.0);
  CliffordSystem cs = CliffordSystem::preset("dirac1d", 1.0);
  SpinorField psi0 = gaussian_spinor(g, 2);

  SUBCASE("free case matches the spectral propagator") {
    EvolutionConfig c;
    c.dt = 1e-2;
    c.T = 1.0;
    SpinorField u = split_step_final(cs, none_spec(1, 2), psi0, c);
    SpinorField ref = free_dirac_propagate(cs, psi0, 1.0);
    CHECK(relative_l2_error(u, ref) < 1e-10);
  }
  SUBCASE("Hermitian potential preserves the L2 norm") {
    PotentialSpec s = none_spec(1, 2);
    s.hermitian1 = hermitian_preset("trig", 1, 2);
    EvolutionConfig c;
    c.dt = 1e-3;
    c.T = 1.0;
    SpinorField u = split_step_final(cs, s, psi0, c);
    CHECK(oracle::rel_err(quadrature_sum(u, 2.0), quadrature_sum(psi0, 2.0)) <
          1e-9);
  }
  SUBCASE("harmonic potential: Richardson order 2") {
    PotentialSpec s = harmonic(1, 2);
    const double T = 0.5;
    auto run = [&](double dt) {
      EvolutionConfig c;
      c.dt = dt;
      c.T = T;
      return split_step_final(cs, s, psi0, c);
    };
    SpinorField ref = run(1.25e-3);
    const double e1 = l2_distance(run(1e-2), ref);
    const double e2 = l2_distance(run(5e-3), ref);
    const double order = std::log2(e1 / e2);
    CHECK(order == doctest::Approx(2.0).epsilon(0.1));
  }
  SUBCASE("snapshots come back in requested order") {
    EvolutionConfig c;
    c.dt = 0.05;
    c.T = 0.2;
    auto traj = split_step_evolve(cs, none_spec(1, 2), psi0, c,
                                  {0.2, 0.0, 0.1});
    CHECK(traj.size() == 3);
    CHECK(relative_l2_error(traj[1], psi0) == 0.0);
    CHECK(relative_l2_error(traj[0], free_dirac_propagate(cs, psi0, 0.2)) <
          1e-10);
  }
  SUBCASE("misaligned sample time rejected") {
    EvolutionConfig c;
    c.dt = 0.05;
    c.T = 0.2;
    CHECK_THROWS(split_step_evolve(cs, none_spec(1, 2), psi0, c, {0.07}));
  }
  SUBCASE("non-finite state aborts") {
    SpinorField bad = psi0;
    bad.at(0, 0) = Complex(std::nan(""), 0.0);
    EvolutionConfig c;
    c.dt = 0.05;
    c.T = 0.1;
    CHECK_THROWS(split_step_evolve(cs, none_spec(1, 2), bad, c, {0.0}));
  }
}

TEST_CASE("unitarity drift and non-Hermitian growth band") {
  Grid g(1, 128, 12.0);
  CliffordSystem cs = CliffordSystem::preset("dirac1d", 1.0);
  SpinorField psi0 = gaussian_spinor(g, 2);

  SUBCASE("Hermitian drift below 1e-9 per unit time") {
    PotentialSpec s = harmonic(1, 2);
    s.bounded = bounded_preset("hermitian-bounded", 1, 2);
    EvolutionConfig c;
    c.dt = 1e-3;
    c.T = 1.0;
    SpinorField u = split_step_final(cs, s, psi0, c);
    CHECK(std::abs(quadrature_sum(u, 2.0) / quadrature_sum(psi0, 2.0) - 1.0) <
          1e-9);
  }
  SUBCASE("non-Hermitian growth tracks e^{gamma T}") {
    const double gamma = 0.5;
    PotentialSpec s = none_spec(1, 2);
    s.bounded = bounded_preset("nonhermitian-bounded", 1, 2, gamma);
    EvolutionConfig c;
    c.dt = 1e-3;
    c.T = 1.0;
    SpinorField u = split_step_final(cs, s, psi0, c);
    const double growth = quadrature_sum(u, 2.0) / quadrature_sum(psi0, 2.0);
    CHECK(growth <= std::exp(gamma * c.T) * (1 + 1e-6));
    CHECK(growth >= std::exp(gamma * c.T) * (1 - 1e-6));
  }
}

TEST_CASE("self-convergence: halving dt quarters the error") {
  Grid g(1, 64, 10.0);
  CliffordSystem cs = CliffordSystem::preset("dirac1d", 1.0);
  SpinorField psi0 = gaussian_spinor(g, 2);
  PotentialSpec s = harmonic(1, 2);
  auto run = [&](double dt) {
    EvolutionConfig c;
    c.dt = dt;
    c.T = 0.4;
    return split_step_final(cs, s, psi0, c);
  };
  SpinorField ref = run(1e-3);
  const double e1 = l2_distance(run(8e-3), ref);
  const double e2 = l2_distance(run(4e-3), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}
