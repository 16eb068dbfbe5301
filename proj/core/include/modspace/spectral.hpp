#pragma once

#include <Eigen/Dense>
#include <functional>

#include "modspace/grid.hpp"

namespace modspace {

using Matrix = Eigen::MatrixXcd;

/// Frequency-side matrix symbol M(xi). size == 1 means a scalar symbol
/// broadcast over all components. When `hermitian` is set, applications
/// verify M(xi) = M(xi)^* at each node they touch (1e-12).
struct MultiplierSymbol {
  int size = 1;
  bool hermitian = false;
  std::function<Matrix(const Vec& xi)> eval;

  static MultiplierSymbol scalar(std::function<Complex(const Vec&)> f,
                                 bool hermitian = false);
};

/// F f(xi) = (2*pi)^{-N/2} sum_y f(y) e^{-i y.xi} dx^N, componentwise.
SpinorField forward_ft(const SpinorField& f);

/// Inverse of forward_ft (exact round trip in exact arithmetic).
SpinorField inverse_ft(const SpinorField& fhat);

/// F^{-1} [ M(xi) (F f)(xi) ]. Linear in f; throws on size mismatch.
SpinorField apply_multiplier(const MultiplierSymbol& sym, const SpinorField& f);

/// <D>^s: scalar symbol (1 + |xi|^2)^{s/2}.
SpinorField bessel(double s, const SpinorField& f);

}  // namespace modspace
