#pragma once

#include <string>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/spectral.hpp"

namespace modspace {

/// Clifford data for the free operator with symbol
/// h0(xi) = alpha . xi + mass * beta: Hermitian alpha_j, beta with
/// alpha_j alpha_k + alpha_k alpha_j = 2 delta_jk, alpha_j beta + beta
/// alpha_j = 0, beta^2 = I (exact for the presets).
struct CliffordSystem {
  int dim = 1;         // space dimension N
  int components = 2;  // spinor size m
  double mass = 1.0;
  std::vector<Matrix> alpha;
  Matrix beta;

  /// "dirac1d" (sigma1, sigma3), "dirac2d" (sigma1, sigma2; sigma3) or
  /// "dirac3d" (standard 4x4 Pauli-block matrices).
  static CliffordSystem preset(const std::string& name, double mass);

  Matrix symbol(const Vec& xi) const;  // h0(xi)
  MultiplierSymbol multiplier() const;
};

/// Spectral projections P+-(xi) = (I +- h0(xi)/E)/2, E = sqrt(|xi|^2+m^2).
/// At the massless singular node (mass 0, xi = 0) both are I/2 by
/// convention; `singular` reports whether that node was hit.
struct ProjectionPair {
  Matrix plus;
  Matrix minus;
  bool singular = false;
};
ProjectionPair projections(const CliffordSystem& cs, const Vec& xi);

/// e^{-it H0}: F^{-1} [e^{-itE} P+ + e^{+itE} P-] F, evaluated as
/// cos(tE) I - i sin(tE) h0(xi)/E per node (exact diagonalization).
SpinorField free_dirac_propagate(const CliffordSystem& cs,
                                 const SpinorField& psi0, double t);

/// Scalar half-Klein-Gordon flow e^{-i sign t sqrt(mass^2 + |xi|^2)}
/// applied componentwise; sign = +1 matches the positive-energy branch of
/// the free flow.
SpinorField klein_gordon_propagate(const SpinorField& psi0, double mass,
                                   double t, int sign);

/// Applies P+ (sign=+1) or P- (sign=-1) as a matrix multiplier.
SpinorField project_field(const CliffordSystem& cs, const SpinorField& psi,
                          int sign);

/// e^{i xi0.x} v sampled on the grid (xi0 should be a dual-grid node for
/// exact spectral localization).
SpinorField plane_wave(const Grid& grid, const Vec& xi0,
                       const std::vector<Complex>& v);

}  // namespace modspace
