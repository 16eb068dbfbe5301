#include <doctest.h>

#include <cmath>

#include "modspace/dirac.hpp"
#include "modspace/experiments.hpp"
#include "modspace/norms.hpp"
#include "oracle_helpers.hpp"

using namespace modspace;

namespace {

Vec make_xi(double a, double b = 0, double c = 0, int dim = 1) {
  Vec v = Vec::zero(dim);
  v[0] = a;
  if (dim > 1) v[1] = b;
  if (dim > 2) v[2] = c;
  return v;
}

Vec random_xi(int dim, CounterRng& rng) {
  Vec v = Vec::zero(dim);
  for (int a = 0; a < dim; ++a) v[a] = 6.0 * (rng.uniform() - 0.5);
  return v;
}

}  // namespace

TEST_CASE("Clifford relations are exact for all presets") {
  for (const char* name : {"dirac1d", "dirac2d", "dirac3d"}) {
    CliffordSystem cs = CliffordSystem::preset(name, 1.0);
    const Matrix id = Matrix::Identity(cs.components, cs.components);
    for (int j = 0; j < cs.dim; ++j) {
      for (int k = 0; k < cs.dim; ++k) {
        const Matrix anti = cs.alpha[j] * cs.alpha[k] + cs.alpha[k] * cs.alpha[j];
        const Matrix expect = (j == k ? 2.0 : 0.0) * id;
        CHECK((anti - expect).cwiseAbs().maxCoeff() == 0.0);
      }
      CHECK((cs.alpha[j] * cs.beta + cs.beta * cs.alpha[j]).cwiseAbs().maxCoeff() ==
            0.0);
      CHECK((cs.alpha[j] - cs.alpha[j].adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK((cs.beta * cs.beta - id).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS(CliffordSystem::preset("bogus", 1.0));
}

TEST_CASE("dirac_symbol examples") {
  SUBCASE("xi = 0 gives mass beta") {
    CliffordSystem cs = CliffordSystem::preset("dirac3d", 2.5);
    const Matrix h = cs.symbol(make_xi(0, 0, 0, 3));
    CHECK((h - 2.5 * cs.beta).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("square is scalar (|xi|^2 + m^2) I") {
    CounterRng rng(77);
    for (const char* name : {"dirac1d", "dirac2d", "dirac3d"}) {
      CliffordSystem cs = CliffordSystem::preset(name, 0.7);
      for (int rep = 0; rep < 20; ++rep) {
        const Vec xi = random_xi(cs.dim, rng);
        const Matrix h = cs.symbol(xi);
        const Matrix sq = h * h;
        const double e2 = xi.norm2() + cs.mass * cs.mass;
        CHECK((sq - e2 * Matrix::Identity(cs.components, cs.components))
                  .cwiseAbs()
                  .maxCoeff() < 1e-13 * e2);
      }
    }
  }
  SUBCASE("1d preset, xi = 3, mass = 4: eigenvalues +-5") {
    CliffordSystem cs = CliffordSystem::preset("dirac1d", 4.0);
    Eigen::SelfAdjointEigenSolver<Matrix> es(cs.symbol(make_xi(3.0)));
    CHECK(es.eigenvalues()(0) == doctest::Approx(-5.0).epsilon(1e-12));
    CHECK(es.eigenvalues()(1) == doctest::Approx(5.0).epsilon(1e-12));
  }
}

TEST_CASE("projection examples") {
  SUBCASE("xi = 0 with mass reduces to (I +- beta)/2") {
    CliffordSystem cs = CliffordSystem::preset("dirac1d", 1.3);
    ProjectionPair p = projections(cs, make_xi(0.0));
    const Matrix id = Matrix::Identity(2, 2);
    CHECK((p.plus - 0.5 * (id + cs.beta)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((p.minus - 0.5 * (id - cs.beta)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK_FALSE(p.singular);
  }
  SUBCASE("projector identities at random frequencies") {
    CounterRng rng(5);
    for (const char* name : {"dirac1d", "dirac3d"}) {
      CliffordSystem cs = CliffordSystem::preset(name, 0.9);
      const Matrix id = Matrix::Identity(cs.components, cs.components);
      for (int rep = 0; rep < 100; ++rep) {
        const Vec xi = random_xi(cs.dim, rng);
        ProjectionPair p = projections(cs, xi);
        CHECK((p.plus + p.minus - id).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((p.plus * p.plus - p.plus).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((p.minus * p.minus - p.minus).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((p.plus * p.minus).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((p.plus - p.plus.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(p.plus.trace().real() - cs.components / 2.0) < 1e-12);
        CHECK(std::abs(p.minus.trace().real() - cs.components / 2.0) < 1e-12);
      }
    }
  }
  SUBCASE("massless zero-frequency node is flagged") {
    CliffordSystem cs = CliffordSystem::preset("dirac1d", 0.0);
    ProjectionPair p = projections(cs, make_xi(0.0));
    CHECK(p.singular);
    CHECK((p.plus - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("free_dirac_propagate examples") {
  Grid g(1, 128, 12.0);
  CliffordSystem cs = CliffordSystem::preset("dirac1d", 1.0);
  SpinorField psi0 = gaussian_spinor(g, 2);
  SUBCASE("t = 0 is the identity") {
    CHECK(relative_l2_error(free_dirac_propagate(cs, psi0, 0.0), psi0) <
          1e-13);
  }
  SUBCASE("unitarity at several times") {
    const double n0 = quadrature_sum(psi0, 2.0);
    for (double t : {0.5, 1.0, 5.0})
      CHECK(oracle::rel_err(
                quadrature_sum(free_dirac_propagate(cs, psi0, t), 2.0), n0) <
            1e-11);
  }
  SUBCASE("plane wave in the positive-energy range") {
    Vec xi0 = make_xi(g.freq1d(80));
    ProjectionPair p = projections(cs, xi0);
    Eigen::Vector2cd seed;
    seed << 1.0, 0.5;
    Eigen::Vector2cd v = p.plus * seed;
    v.normalize();
    SpinorField pw = plane_wave(g, xi0, {v(0), v(1)});
    const double t = 0.8;
    SpinorField out = free_dirac_propagate(cs, pw, t);
    const double e = std::sqrt(xi0.norm2() + 1.0);
    const Complex phase = std::polar(1.0, -t * e);
    double worst = 0;
    for (std::size_t x = 0; x < g.size(); ++x)
      for (int c = 0; c < 2; ++c)
        worst = std::max(worst,
                         std::abs(out.at(x, c) - phase * pw.at(x, c)));
    CHECK(worst < 1e-11);
  }
  SUBCASE("group law") {
    SpinorField one = free_dirac_propagate(cs, free_dirac_propagate(cs, psi0, 0.4), 0.6);
    SpinorField two = free_dirac_propagate(cs, psi0, 1.0);
    CHECK(relative_l2_error(one, two) < 1e-12);
  }
}

TEST_CASE("klein_gordon_propagate examples") {
  Grid g(1, 128, 12.0);
  SpinorField psi0 = gaussian_spinor(g, 2);
  SUBCASE("t = 0 identity") {
    CHECK(relative_l2_error(klein_gordon_propagate(psi0, 1.0, 0.0, +1), psi0) <
          1e-13);
  }
  SUBCASE("semigroup composition") {
    SpinorField one = klein_gordon_propagate(
        klein_gordon_propagate(psi0, 1.0, 0.3, +1), 1.0, 0.7, +1);
    SpinorField two = klein_gordon_propagate(psi0, 1.0, 1.0, +1);
    CHECK(relative_l2_error(one, two) < 1e-12);
  }
  SUBCASE("massless half-wave transport of a right-mover") {
    // band-limited packet supported on xi > 0 only
    Grid gg(1, 256, 20.0);
    SpinorField spec(gg, 1, Domain::Frequency);
    for (std::size_t k = 0; k < gg.size(); ++k) {
      const double xi = gg.frequency(k)[0];
      if (xi > 0.5 && xi < 4.0)
        spec.at(k, 0) = std::exp(-(xi - 2.0) * (xi - 2.0));
    }
    SpinorField f = inverse_ft(spec);
    const int shift_steps = 16;
    const double t = shift_steps * gg.dx();
    SpinorField moved = klein_gordon_propagate(f, 0.0, t, +1);
    // e^{-i t xi} on xi > 0 content translates by +t
    double worst = 0;
    for (std::size_t x = 0; x < gg.size(); ++x) {
      const std::size_t src = static_cast<std::size_t>(
          gg.wrap(static_cast<int>(x) - shift_steps));
      worst = std::max(worst, std::abs(moved.at(x, 0) - f.at(src, 0)));
    }
    CHECK(worst < 1e-11);
  }
}

TEST_CASE("project_field examples and energy splitting") {
  Grid g(1, 128, 12.0);
  CliffordSystem cs = CliffordSystem::preset("dirac1d", 1.0);
  SpinorField psi = oracle::random_field(g, 2, 19);
  SUBCASE("idempotent and complete") {
    SpinorField p1 = project_field(cs, psi, +1);
    CHECK(relative_l2_error(project_field(cs, p1, +1), p1) < 1e-12);
    SpinorField sum = p1;
    sum += project_field(cs, psi, -1);
    CHECK(relative_l2_error(sum, psi) < 1e-12);
  }
  SUBCASE("projection is bounded by (1 + mass/2) in weighted norms") {
    Window phi = Window::gaussian(g, 1.0);
    const double two_sigma = 1.0;
    const NormSpec spec{4, 2, 0, -two_sigma};
    for (std::uint64_t s = 0; s < 5; ++s) {
      CounterRng rng(600 + s);
      SpinorField f = random_band_limited_field(g, 2, 1.0 / 3.0, rng);
      const double lhs = mod_norm(project_field(cs, f, +1), phi, spec);
      const double rhs = mod_norm(f, phi, spec);
      CHECK(lhs <= (1.0 + cs.mass / 2.0) * rhs);
    }
  }
  SUBCASE("free flow commutes with the projections") {
    SpinorField a =
        project_field(cs, free_dirac_propagate(cs, psi, 0.7), +1);
    SpinorField b =
        free_dirac_propagate(cs, project_field(cs, psi, +1), 0.7);
    CHECK(relative_l2_error(a, b) < 1e-11);
  }
  SUBCASE("energy splitting into half Klein-Gordon flows") {
    SpinorField plus = project_field(cs, psi, +1);
    SpinorField minus = project_field(cs, psi, -1);
    const double t = 0.9;
    SpinorField full = free_dirac_propagate(cs, psi, t);
    SpinorField split = klein_gordon_propagate(plus, cs.mass, t, +1);
    split += klein_gordon_propagate(minus, cs.mass, t, -1);
    CHECK(relative_l2_error(split, full) < 1e-10);
  }
}
