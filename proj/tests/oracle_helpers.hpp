#pragma once

// Independent reference computations for the test suites. Everything here
// deliberately avoids the FFT/code paths under test: plain loops, long
// double accumulation, adaptive quadrature.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/rng.hpp"
#include "modspace/wavepacket.hpp"

namespace oracle {

using modspace::Complex;
using modspace::Grid;
using modspace::PhaseSpaceField;
using modspace::SpinorField;
using modspace::Vec;
using modspace::Window;

using LComplex = std::complex<long double>;

inline double rel_err(double a, double b) {
  const double d = std::abs(a - b);
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0 ? d : d / s;
}

/// (sum_x |f|^p dx^N)^(1/p) by direct long double summation.
inline double direct_quadrature(const SpinorField& f, double p) {
  const double w = f.domain() == modspace::Domain::Space
                       ? f.grid().cell_volume()
                       : f.grid().freq_cell_volume();
  long double acc = 0;
  for (std::size_t x = 0; x < f.grid().size(); ++x) {
    long double s = 0;
    for (int c = 0; c < f.components(); ++c) s += std::norm(f.at(x, c));
    acc += std::pow(std::sqrt(static_cast<double>(s)), p);
  }
  return std::pow(static_cast<double>(acc) * w, 1.0 / p);
}

/// sum_y f(y) e^{-i y.xi} dx^N by the O(n^2) double loop.
inline std::vector<Complex> direct_grid_dft(const Grid& g,
                                            const std::vector<Complex>& f) {
  std::vector<Complex> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec xi = g.frequency(k);
    LComplex acc = 0;
    for (std::size_t y = 0; y < g.size(); ++y) {
      const double ph = -modspace::dot(g.point(y), xi);
      acc += LComplex(f[y]) * LComplex(std::cos(ph), std::sin(ph));
    }
    out[k] = Complex(static_cast<double>(acc.real()),
                     static_cast<double>(acc.imag())) *
             g.cell_volume();
  }
  return out;
}

/// W_phi f by the O(n^3) direct double sum.
inline PhaseSpaceField direct_wp_transform(const Window& phi,
                                           const SpinorField& f) {
  const Grid& g = f.grid();
  PhaseSpaceField W(g, f.components());
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t xi = 0; xi < g.size(); ++xi) {
      const Vec xiv = g.frequency(xi);
      for (int c = 0; c < f.components(); ++c) {
        LComplex acc = 0;
        for (std::size_t y = 0; y < g.size(); ++y) {
          const double ph = -modspace::dot(g.point(y), xiv);
          acc += LComplex(std::conj(phi.value(g.diff_index(x, y)))) *
                 LComplex(f.at(y, c)) * LComplex(std::cos(ph), std::sin(ph));
        }
        W.at(x, xi, c) = Complex(static_cast<double>(acc.real()),
                                 static_cast<double>(acc.imag())) *
                         g.cell_volume();
      }
    }
  return W;
}

/// Flat weighted l^p over the whole (x, xi) grid, direct summation.
inline double direct_flat_lp(const PhaseSpaceField& F, double p) {
  const Grid& g = F.grid();
  long double acc = 0;
  for (std::size_t x = 0; x < g.size(); ++x)
    for (std::size_t xi = 0; xi < g.size(); ++xi)
      acc += std::pow(F.point_norm(x, xi), p);
  return std::pow(static_cast<double>(acc) * g.cell_volume() *
                      g.freq_cell_volume(),
                  1.0 / p);
}

/// Adaptive Simpson quadrature on [a, b].
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol = 1e-13,
                               int depth = 24) {
  const double c = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fc = f(c);
  std::function<double(double, double, double, double, double, double, int)>
      rec = [&](double lo, double hi, double flo, double fhi, double fmid,
                double whole, int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) < 15 * tol)
      return left + right + (left + right - whole) / 15.0;
    return rec(lo, mid, flo, fmid, flm, left, d - 1) +
           rec(mid, hi, fmid, fhi, frm, right, d - 1);
  };
  const double whole = (b - a) / 6.0 * (fa + 4 * fc + fb);
  return rec(a, b, fa, fb, fc, whole, depth);
}

/// Random spinor field with iid standard-normal components (not band
/// limited; for pure algebra tests).
inline SpinorField random_field(const Grid& g, int m, std::uint64_t seed) {
  modspace::CounterRng rng(seed);
  SpinorField f(g, m);
  for (std::size_t x = 0; x < g.size(); ++x)
    for (int c = 0; c < m; ++c)
      f.at(x, c) = Complex(rng.normal(), rng.normal());
  return f;
}

}  // namespace oracle
