#pragma once

#include <map>
#include <optional>
#include <vector>

#include "modspace/dirac.hpp"
#include "modspace/potentials.hpp"
#include "modspace/wavepacket.hpp"

namespace modspace {

using MultiIndex = Window::MultiIndex;

/// Symbol increment b(eta; xi) = a(xi - eta) - a(xi), with its growth
/// order k: |d_eta^alpha b| <= C_alpha <eta>^k uniformly in xi for
/// admissible symbols.
struct SymbolRemainder {
  int m = 1;
  int growth_order = 1;
  std::function<Matrix(const Vec& eta, const Vec& xi)> eval;
  /// xi-independent b; lets kernel construction evaluate b once.
  bool xi_independent = false;

  static SymbolRemainder from_symbol(const MultiplierSymbol& a, int m,
                                     int growth_order);
  /// Closed form -alpha.eta (exactly xi-independent).
  static SymbolRemainder dirac(const CliffordSystem& cs);
};

/// Sampled sup_eta |d_eta^alpha b| / <eta>^k per xi shell, |alpha| <= 2
/// (central differences). `uniform` fails when the ratio grows with |xi|,
/// which is how a quadratic symbol trips the admissibility condition.
struct SymbolBoundReport {
  double sup_ratio = 0.0;
  double ratio_near_zero = 0.0;
  double ratio_far = 0.0;
  bool uniform = true;
};
SymbolBoundReport check_symbol_bound(const SymbolRemainder& b,
                                     const std::vector<Vec>& etas,
                                     const std::vector<Vec>& xis);

/// Window-smoothed kernel S(z, xi) of the frequency-side remainder:
/// S(., xi) is the inverse transform over eta of
/// (a(xi + eta) - a(xi)) (F conj(phi))(eta), sampled on the z grid with
/// derivatives up to `max_deriv_order` (spectral differentiation). The
/// eta -> -eta reflection relative to b makes the decomposition
/// W_phi(a(D)u) = a(xi) W_phi u + R0 u hold exactly for band-limited u.
class SKernel {
 public:
  SKernel(Grid grid, int m, int decay_n, bool xi_independent);

  const Grid& grid() const { return grid_; }
  int components() const { return m_; }
  int decay_n() const { return decay_n_; }
  bool xi_independent() const { return xi_independent_; }

  const Matrix& value(std::size_t z, std::size_t xi) const {
    return sample(MultiIndex{0, 0, 0}, z, xi);
  }
  const Matrix& sample(const MultiIndex& beta, std::size_t z,
                       std::size_t xi) const;
  bool has_derivative(const MultiIndex& beta) const {
    return samples_.count(beta) > 0;
  }

  std::map<MultiIndex, std::vector<Matrix>>& storage() { return samples_; }
  const std::map<MultiIndex, std::vector<Matrix>>& storage() const {
    return samples_;
  }

 private:
  Grid grid_;
  int m_;
  int decay_n_;
  bool xi_independent_;
  std::map<MultiIndex, std::vector<Matrix>> samples_;
};

/// Builds S from a symbol increment and window; requires 2n > N.
SKernel build_s_kernel(const SymbolRemainder& b, const Window& phi,
                       int decay_n, int max_deriv_order = 2);

/// One row of the decay table: max_z <z>^{2n} |d^beta S(z,.)| (max over
/// xi nodes for xi-dependent kernels).
struct KernelDecayRow {
  MultiIndex beta;
  double max_weighted;
};
std::vector<KernelDecayRow> kernel_decay_table(const SKernel& s,
                                               int max_beta_order);

/// R u(t,x,xi) = sum_y e^{-i y.xi} conj(phi(x-y))
///   sum_jk d_j d_k Q_jk(t, x+d, x) u(y) dx^N, d = wrapped y-x.
PhaseSpaceField remainder_R(const PotentialSpec& spec, const Window& phi,
                            const SpinorField& u, double t);

/// R1 u: first-order version with sum_k d_k V_k(t, x+d, x).
PhaseSpaceField remainder_R1(const PotentialSpec& spec, const Window& phi,
                             const SpinorField& u, double t);

/// Rtilde u = W_phi(V2(t,.) u).
PhaseSpaceField remainder_Rtilde(const PotentialSpec& spec, const Window& phi,
                                 const SpinorField& u, double t);

/// R0 u(x,xi) = sum_y S(x-y,xi) e^{-i y.xi} u(y) dx^N.
PhaseSpaceField remainder_R0(const SKernel& s, const SpinorField& u);

struct PicardOptions {
  int iterations = 3;
  int snapshots_per_unit = 64;
  int substeps_per_snapshot = 4;
  int grad_substeps_per_unit = 256;
  /// Cap on stored snapshots for the characteristic-shift path.
  int max_snapshots = 4096;
};

struct PicardIterationStats {
  double sup_diff = 0.0;
  double l2_diff = 0.0;
};

struct PicardResult {
  std::vector<double> times;
  /// Final iterate W(t_i) at every snapshot.
  std::vector<PhaseSpaceField> trajectory;
  /// wp_invert of W(T) after 0, 1, ..., iterations corrections.
  std::vector<SpinorField> recovered_final;
  std::vector<PicardIterationStats> history;
  bool converged = true;
};

/// Propagates W_phi u directly in phase space by fixed-point iteration on
/// the characteristic-flow representation: snapshots W^0(t) come from the
/// time-ordered phase factor composed with the xi pullback of W_phi psi0,
/// and each correction adds -i int_0^t Phase(t,tau) (R + Rtilde + R0 or
/// R1 + Rtilde + R0)[wp_invert(W^k(tau))] d tau (composite trapezoid on
/// the snapshot grid; trigonometric interpolation for the pullback).
/// `a` is the Hermitian symbol of the free part; pass skernel = nullptr
/// when a vanishes (then R0 is dropped). The potential must match one
/// path: quadratic-diagonal (+bounded) or hermitian-C1 (+bounded).
PicardResult picard_propagate(const MultiplierSymbol& a,
                              const SKernel* skernel,
                              const PotentialSpec& spec, const Window& phi,
                              const SpinorField& psi0, double T,
                              const PicardOptions& opts);

/// Dirac convenience: a = Clifford symbol, S built from its increment.
PicardResult picard_propagate_dirac(const CliffordSystem& cs,
                                    const PotentialSpec& spec,
                                    const Window& phi,
                                    const SpinorField& psi0, double T,
                                    const PicardOptions& opts);

}  // namespace modspace
