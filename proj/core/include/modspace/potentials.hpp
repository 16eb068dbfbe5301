#pragma once

#include <functional>
#include <optional>
#include <string>

#include "modspace/dirac.hpp"
#include "modspace/grid.hpp"
#include "modspace/spectral.hpp"

namespace modspace {

/// Real diagonal potential Q(t,x) I with bounded derivatives of order >= 2
/// (the quadratic class): carries value, gradient and Hessian evaluators
/// plus the declared second-derivative bound.
struct QuadraticPart {
  std::string name;
  double hess_bound = 0.0;
  std::function<double(double t, const Vec& x)> value;
  std::function<Vec(double t, const Vec& x)> gradient;
  std::function<Eigen::MatrixXd(double t, const Vec& x)> hessian;
};

/// Hermitian matrix potential with bounded derivatives of order >= 1 (the
/// sub-quadratic class): value and first partials.
struct HermitianPart {
  std::string name;
  double grad_bound = 0.0;
  std::function<Matrix(double t, const Vec& x)> value;
  std::function<Matrix(double t, const Vec& x, int k)> partial;
};

/// Bounded matrix potential (order >= 0); need not be Hermitian.
struct BoundedPart {
  std::string name;
  double bound = 0.0;
  bool hermitian = true;
  std::function<Matrix(double t, const Vec& x)> value;
};

/// Tagged sum V = Q I + V1 + V2 of the three admissible classes.
struct PotentialSpec {
  int dim = 1;
  int components = 2;
  bool time_dependent = false;
  std::optional<QuadraticPart> quadratic;
  std::optional<HermitianPart> hermitian1;
  std::optional<BoundedPart> bounded;

  Matrix total(double t, const Vec& x) const;
  bool is_hermitian() const {
    return !bounded || bounded->hermitian;
  }
  bool empty() const { return !quadratic && !hermitian1 && !bounded; }
};

/// Named quadratic profiles: "zero", "harmonic" (|x|^2/2), "inverted",
/// "linear" (amplitude * sum_j x_j), "cosine" (amplitude * sum_j cos x_j),
/// "driven-linear" (cos(t) * sum_j x_j).
QuadraticPart quadratic_preset(const std::string& name, int dim,
                               double amplitude = 1.0);

/// Named Hermitian profiles for m in {2,4}: "trig" (sin/cos times the
/// Clifford generators), "em" (electromagnetic block form), "linear-sigma3"
/// (x1 times the diagonal generator).
HermitianPart hermitian_preset(const std::string& name, int dim, int m);

/// Named bounded profiles: "hermitian-bounded", "nonhermitian-bounded"
/// (anti-Hermitian core i*gamma*I plus a small Hermitian trig admixture).
BoundedPart bounded_preset(const std::string& name, int dim, int m,
                           double gamma = 0.5);

/// Q_jk(t,y,x) = int_0^1 (d_j d_k Q)(t, x + th (y-x)) (1-th) dth by
/// order-8 Gauss-Legendre (exact for polynomial integrands to degree 15).
double eval_Qjk(const PotentialSpec& spec, double t, const Vec& y,
                const Vec& x, int j, int k);

/// V_k(t,y,x) = int_0^1 (d_k V1)(t, x + th (y-x)) dth, same quadrature.
Matrix eval_Vk(const PotentialSpec& spec, double t, const Vec& y,
               const Vec& x, int k);

/// int_{t0}^{t1} grad Q(tau, x) dtau by composite Simpson with
/// substeps_per_unit panels per unit time (zero when no quadratic part).
Vec integral_grad_Q(const PotentialSpec& spec, double t0, double t1,
                    const Vec& x, int substeps_per_unit = 64);

/// Characteristic frequency g(s;t,x,xi) = xi - int_t^s grad Q(tau,x) dtau;
/// classes without a gradient shift by zero.
Vec characteristics_g(const PotentialSpec& spec, double s, double t,
                      const Vec& x, const Vec& xi,
                      int substeps_per_unit = 64);

/// h(s;t,x,xi) = a(g(s;t,x,xi)) + (Q - x.grad Q)(s,x) I for the quadratic
/// path, with a = the Clifford symbol.
Matrix phase_h(const CliffordSystem& cs, const PotentialSpec& spec, double s,
               double t, const Vec& x, const Vec& xi,
               int substeps_per_unit = 64);

/// Samples Hessian entries of the quadratic part over a grid and checks
/// them against the declared bound (small slack for roundoff).
void validate_quadratic_bounds(const PotentialSpec& spec, const Grid& grid,
                               const std::vector<double>& times);

}  // namespace modspace
