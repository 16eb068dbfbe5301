#include <doctest.h>

#include <cmath>
#include <limits>

#include "modspace/grid.hpp"
#include "oracle_helpers.hpp"

using namespace modspace;

TEST_CASE("grid invariants") {
  CHECK_THROWS(Grid(1, 6, 1.0));   // not a power of two
  CHECK_THROWS(Grid(1, 2, 1.0));   // below minimum
  CHECK_THROWS(Grid(4, 8, 1.0));   // dimension cap
  CHECK_THROWS(Grid(1, 8, -1.0));

  Grid g(1, 16, 5.0);
  CHECK(g.dx() * g.dxi() * g.n() == doctest::Approx(2 * M_PI).epsilon(1e-15));
  // frequency nodes symmetric about 0 up to the Nyquist node
  CHECK(g.freq1d(g.n() / 2) == 0.0);
  for (int k = 1; k < g.n(); ++k)
    CHECK(g.freq1d(k) == doctest::Approx(-g.freq1d(g.n() - k)).epsilon(1e-15));
  CHECK(g.freq1d(0) == doctest::Approx(-M_PI * g.n() / (2 * g.half_width())));
}

TEST_CASE("grid index helpers") {
  Grid g(2, 8, 3.0);
  // diff_index matches pointwise wrapped subtraction
  std::array<int, kMaxDim> ia{5, 2, 0}, ib{1, 7, 0};
  const std::size_t a = g.encode(ia), b = g.encode(ib);
  const std::size_t d = g.diff_index(a, b);
  const Vec pd = g.point(d);
  const Vec disp = g.displacement(a, b);
  for (int ax = 0; ax < 2; ++ax)
    CHECK(pd[ax] == doctest::Approx(disp[ax]).epsilon(1e-15));
  // reflection: point(reflect(a)) == -point(a) modulo the torus
  const Vec pa = g.point(a);
  const Vec pr = g.point(g.reflect_index(a));
  for (int ax = 0; ax < 2; ++ax) {
    double s = pa[ax] + pr[ax];
    s = std::remainder(s, 2 * g.half_width());
    CHECK(std::abs(s) < 1e-14);
  }
}

TEST_CASE("quadrature_sum examples") {
  SUBCASE("zero field") {
    Grid g(1, 32, 5.0);
    SpinorField f(g, 2);
    CHECK(quadrature_sum(f, 2.0) == 0.0);
  }
  SUBCASE("constant field on total length 2 pi") {
    Grid g(1, 64, M_PI);
    SpinorField f(g, 3);
    for (std::size_t x = 0; x < g.size(); ++x) f.at(x, 0) = 1.0;
    CHECK(quadrature_sum(f, 2.0) ==
          doctest::Approx(std::sqrt(2 * M_PI)).epsilon(1e-13));
  }
  SUBCASE("random field vs direct-summation oracle, p=3") {
    Grid g(1, 8, 2.0);
    SpinorField f = oracle::random_field(g, 2, 99);
    CHECK(oracle::rel_err(quadrature_sum(f, 3.0),
                          oracle::direct_quadrature(f, 3.0)) < 1e-13);
  }
  SUBCASE("rejects p < 1") {
    Grid g(1, 8, 2.0);
    SpinorField f(g, 1);
    CHECK_THROWS(quadrature_sum(f, 0.5));
  }
  SUBCASE("p = infinity is the max") {
    Grid g(1, 8, 2.0);
    SpinorField f(g, 1);
    f.at(3, 0) = Complex(3.0, 4.0);
    CHECK(quadrature_sum(f, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(5.0));
  }
}

TEST_CASE("quadrature_sum properties") {
  Grid g(1, 32, 4.0);
  SpinorField f = oracle::random_field(g, 2, 7);
  for (double p : {1.0, 2.0, 3.5}) {
    // absolute homogeneity
    SpinorField cf = f;
    cf *= Complex(0.3, -1.2);
    CHECK(oracle::rel_err(quadrature_sum(cf, p),
                          std::abs(Complex(0.3, -1.2)) *
                              quadrature_sum(f, p)) < 1e-12);
    // monotone in pointwise magnitude: g = 2 f dominates f
    SpinorField g2 = f;
    g2 *= Complex(2.0, 0.0);
    CHECK(quadrature_sum(f, p) <= quadrature_sum(g2, p));
  }
}

TEST_CASE("finite check") {
  Grid g(1, 8, 2.0);
  SpinorField f(g, 1);
  f.at(0, 0) = Complex(std::nan(""), 0.0);
  CHECK_THROWS(f.check_finite("test"));
}
