#pragma once

#include <array>
#include <functional>
#include <map>
#include <vector>

#include "modspace/grid.hpp"
#include "modspace/spectral.hpp"

namespace modspace {

/// Scalar window phi on a grid, with samples of the derivatives
/// d^beta phi precomputed up to a requested order (analytically for the
/// Gaussian factory, spectrally otherwise). Construction enforces
/// ||phi||_2 > 0 and an L2 tail outside |x| <= L/2 below 1e-10 of the
/// total, the discrete stand-in for rapid decay.
class Window {
 public:
  using MultiIndex = std::array<int, kMaxDim>;

  Window(Grid grid, std::vector<Complex> samples, int max_deriv_order = 2);

  /// L2-normalized Gaussian exp(-|x|^2 / (2 width^2)).
  static Window gaussian(const Grid& grid, double width,
                         int max_deriv_order = 2);
  /// x_axis * gaussian: an odd window, orthogonal to every even one.
  static Window odd_gaussian(const Grid& grid, double width);

  const Grid& grid() const { return grid_; }
  const std::vector<Complex>& values() const { return values_; }
  Complex value(std::size_t flat) const { return values_[flat]; }
  double l2_norm() const { return l2_norm_; }
  int max_derivative_order() const { return max_order_; }
  const std::vector<Complex>& derivative(const MultiIndex& beta) const;

 private:
  void validate() const;
  void build_spectral_derivatives();

  Grid grid_;
  std::vector<Complex> values_;
  int max_order_;
  double l2_norm_;
  std::map<MultiIndex, std::vector<Complex>> derivs_;
};

/// C^m-valued samples over the (x, xi) product of a grid and its DFT-dual
/// frequency grid (n_xi = n per axis). Layout
/// data[(x_flat * n_xi^N + xi_flat) * m + c].
class PhaseSpaceField {
 public:
  PhaseSpaceField(Grid grid, int components);

  const Grid& grid() const { return grid_; }
  int components() const { return m_; }
  std::size_t xi_size() const { return grid_.size(); }

  Complex& at(std::size_t x, std::size_t xi, int c) {
    return data_[(x * grid_.size() + xi) * m_ + c];
  }
  const Complex& at(std::size_t x, std::size_t xi, int c) const {
    return data_[(x * grid_.size() + xi) * m_ + c];
  }
  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  double point_norm(std::size_t x, std::size_t xi) const;
  double sup_abs() const;
  /// L2 over (x, xi) with dx^N dxi^N quadrature.
  double l2_norm() const;
  void check_finite(const char* label) const;

  PhaseSpaceField& operator+=(const PhaseSpaceField& o);
  PhaseSpaceField& operator-=(const PhaseSpaceField& o);
  PhaseSpaceField& operator*=(Complex c);

 private:
  Grid grid_;
  int m_;
  std::vector<Complex> data_;
};

/// W_phi f(x, xi) = sum_y conj(phi(x-y)) f(y) e^{-i y.xi} dx^N
/// (one DFT per x slice; no (2*pi) factor).
PhaseSpaceField wp_transform(const Window& phi, const SpinorField& f);

/// W_psi^* F(x) = sum_{y,xi} F(y,xi) psi(x-y) e^{+i x.xi}
///                dx^N (2*pi)^{-N} dxi^N.
SpinorField wp_adjoint(const Window& psi, const PhaseSpaceField& F);

/// Pairing that makes W_psi^* W_phi = c * Id exactly on the grid:
/// c = sum_z psi(-z) conj(phi(z)) dx^N. Equals <psi, phi> for windows
/// with even symmetry.
Complex inversion_pairing(const Window& psi, const Window& phi);

/// c^{-1} W_psi^* F; throws when |c| <= 1e-8 ||psi|| ||phi||
/// (near-orthogonal pair, ill-conditioned inversion).
SpinorField wp_invert(const Window& phi, const Window& psi,
                      const PhaseSpaceField& F);

/// Generalized transform with an m x m matrix kernel in place of the
/// scalar window: (x, xi) -> sum_y K(x-y, xi) f(y) e^{-i y.xi} dx^N.
/// K receives flat grid indices (z on the spatial grid, xi on the dual
/// grid); xi_independent kernels run one DFT per x slice, the general
/// case falls back to the direct sum.
PhaseSpaceField wp_transform_matrix_window(
    const Grid& grid, int m, bool xi_independent,
    const std::function<Matrix(std::size_t z_flat, std::size_t xi_flat)>& K,
    const SpinorField& f);

/// G(x, xi) = F(x, xi + delta(x)), evaluated by trigonometric
/// interpolation along the xi axis (exact for the n-mode interpolant).
PhaseSpaceField xi_shifted(const PhaseSpaceField& F,
                           const std::function<Vec(std::size_t x)>& delta);

}  // namespace modspace
