#include "modspace/potentials.hpp"

#include <cmath>
#include <stdexcept>

namespace modspace {

namespace {

// 8-point Gauss-Legendre on [0,1].
constexpr int kGLOrder = 8;
const double kGLNode[kGLOrder] = {
    0.5 - 0.4801449282487682 , 0.5 - 0.3983332387068134,
    0.5 - 0.2627662049581645 , 0.5 - 0.0917173212478249,
    0.5 + 0.0917173212478249 , 0.5 + 0.2627662049581645,
    0.5 + 0.3983332387068134 , 0.5 + 0.4801449282487682};
const double kGLWeight[kGLOrder] = {
    0.0506142681451881 / 1.0, 0.1111905172266872,
    0.1568533229389436,       0.1813418916891810,
    0.1813418916891810,       0.1568533229389436,
    0.1111905172266872,       0.0506142681451881};

Matrix pauli_or_alpha(int which, int m) {
  // which: 1,2 -> off-diagonal generators; 3 -> diagonal generator.
  Matrix s2(2, 2);
  const Complex i(0.0, 1.0);
  if (which == 1)
    s2 << 0, 1, 1, 0;
  else if (which == 2)
    s2 << 0, -i, i, 0;
  else
    s2 << 1, 0, 0, -1;
  if (m == 2) return s2;
  Matrix g = Matrix::Zero(4, 4);
  if (which == 3) {
    g.block(0, 0, 2, 2) = Matrix::Identity(2, 2);
    g.block(2, 2, 2, 2) = -Matrix::Identity(2, 2);
  } else {
    g.block(0, 2, 2, 2) = s2;
    g.block(2, 0, 2, 2) = s2;
  }
  return g;
}

Vec lerp(const Vec& x, const Vec& y, double th) {
  Vec p = Vec::zero(x.dim);
  for (int a = 0; a < x.dim; ++a) p[a] = x[a] + th * (y[a] - x[a]);
  return p;
}

// Composite Simpson for a Vec-valued integrand over [t0, t1].
Vec simpson_vec(const std::function<Vec(double)>& f, double t0, double t1,
                int dim, int substeps_per_unit) {
  Vec acc = Vec::zero(dim);
  if (t0 == t1) return acc;
  const double len = std::abs(t1 - t0);
  int panels = std::max(2, static_cast<int>(std::ceil(len * substeps_per_unit)));
  if (panels % 2) ++panels;
  const double h = (t1 - t0) / panels;
  for (int i = 0; i <= panels; ++i) {
    const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const Vec v = f(t0 + i * h);
    for (int a = 0; a < dim; ++a) acc[a] += w * v[a];
  }
  for (int a = 0; a < dim; ++a) acc[a] *= h / 3.0;
  return acc;
}

}  // namespace

Matrix PotentialSpec::total(double t, const Vec& x) const {
  Matrix v = Matrix::Zero(components, components);
  if (quadratic)
    v += quadratic->value(t, x) * Matrix::Identity(components, components);
  if (hermitian1) v += hermitian1->value(t, x);
  if (bounded) v += bounded->value(t, x);
  return v;
}

QuadraticPart quadratic_preset(const std::string& name, int dim,
                               double amplitude) {
  QuadraticPart q;
  q.name = name;
  if (name == "zero") {
    q.hess_bound = 0.0;
    q.value = [](double, const Vec&) { return 0.0; };
    q.gradient = [dim](double, const Vec&) { return Vec::zero(dim); };
    q.hessian = [dim](double, const Vec&) {
      return Eigen::MatrixXd::Zero(dim, dim).eval();
    };
  } else if (name == "harmonic" || name == "inverted") {
    const double sgn = name == "harmonic" ? amplitude : -amplitude;
    q.hess_bound = std::abs(sgn);
    q.value = [sgn](double, const Vec& x) { return 0.5 * sgn * x.norm2(); };
    q.gradient = [sgn, dim](double, const Vec& x) {
      Vec g = Vec::zero(dim);
      for (int a = 0; a < dim; ++a) g[a] = sgn * x[a];
      return g;
    };
    q.hessian = [sgn, dim](double, const Vec&) {
      return (sgn * Eigen::MatrixXd::Identity(dim, dim)).eval();
    };
  } else if (name == "linear") {
    q.hess_bound = 0.0;
    q.value = [amplitude, dim](double, const Vec& x) {
      double s = 0;
      for (int a = 0; a < dim; ++a) s += x[a];
      return amplitude * s;
    };
    q.gradient = [amplitude, dim](double, const Vec&) {
      Vec g = Vec::zero(dim);
      for (int a = 0; a < dim; ++a) g[a] = amplitude;
      return g;
    };
    q.hessian = [dim](double, const Vec&) {
      return Eigen::MatrixXd::Zero(dim, dim).eval();
    };
  } else if (name == "cosine") {
    q.hess_bound = std::abs(amplitude);
    q.value = [amplitude, dim](double, const Vec& x) {
      double s = 0;
      for (int a = 0; a < dim; ++a) s += std::cos(x[a]);
      return amplitude * s;
    };
    q.gradient = [amplitude, dim](double, const Vec& x) {
      Vec g = Vec::zero(dim);
      for (int a = 0; a < dim; ++a) g[a] = -amplitude * std::sin(x[a]);
      return g;
    };
    q.hessian = [amplitude, dim](double, const Vec& x) {
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
      for (int a = 0; a < dim; ++a) h(a, a) = -amplitude * std::cos(x[a]);
      return h;
    };
  } else if (name == "driven-linear") {
    q.hess_bound = 0.0;
    q.value = [amplitude, dim](double t, const Vec& x) {
      double s = 0;
      for (int a = 0; a < dim; ++a) s += x[a];
      return amplitude * std::cos(t) * s;
    };
    q.gradient = [amplitude, dim](double t, const Vec&) {
      Vec g = Vec::zero(dim);
      for (int a = 0; a < dim; ++a) g[a] = amplitude * std::cos(t);
      return g;
    };
    q.hessian = [dim](double, const Vec&) {
      return Eigen::MatrixXd::Zero(dim, dim).eval();
    };
  } else {
    throw std::invalid_argument("quadratic_preset: unknown profile " + name);
  }
  return q;
}

HermitianPart hermitian_preset(const std::string& name, int dim, int m) {
  if (m != 2 && m != 4)
    throw std::invalid_argument("hermitian_preset: m must be 2 or 4");
  HermitianPart h;
  h.name = name;
  const Matrix g1 = pauli_or_alpha(1, m);
  const Matrix g3 = pauli_or_alpha(3, m);
  if (name == "trig") {
    h.grad_bound = 0.8;
    h.value = [g1, g3](double, const Vec& x) {
      return Matrix(0.5 * std::sin(x[0]) * g3 + 0.3 * std::cos(x[0]) * g1);
    };
    h.partial = [g1, g3, dim](double, const Vec& x, int k) {
      if (k != 0) {
        (void)dim;
        return Matrix(Matrix::Zero(g1.rows(), g1.cols()));
      }
      return Matrix(0.5 * std::cos(x[0]) * g3 - 0.3 * std::sin(x[0]) * g1);
    };
  } else if (name == "em") {
    // Electromagnetic block form: scalar potentials on the diagonal
    // blocks, a vector potential coupled through the off-diagonal
    // generators; all entries have bounded derivatives of every order.
    h.grad_bound = 1.2;
    const int nd = dim;
    h.value = [m, nd](double t, const Vec& x) {
      Matrix v = Matrix::Zero(m, m);
      const Matrix id = Matrix::Identity(m, m);
      const Matrix g3l = pauli_or_alpha(3, m);
      const double qp = 0.6 * std::sin(x[0]);
      const double qm = -0.45 * std::cos(x[0]);
      v += 0.5 * (qp + qm) * id + 0.5 * (qp - qm) * g3l;
      for (int j = 0; j < nd; ++j) {
        const double aj = 0.5 * std::cos(x[j] - 0.7 * t);
        v += aj * pauli_or_alpha(j + 1, m);
      }
      return v;
    };
    h.partial = [m, nd](double t, const Vec& x, int k) {
      Matrix v = Matrix::Zero(m, m);
      const Matrix id = Matrix::Identity(m, m);
      const Matrix g3l = pauli_or_alpha(3, m);
      if (k == 0) {
        const double dqp = 0.6 * std::cos(x[0]);
        const double dqm = 0.45 * std::sin(x[0]);
        v += 0.5 * (dqp + dqm) * id + 0.5 * (dqp - dqm) * g3l;
      }
      if (k < nd) {
        const double daj = -0.5 * std::sin(x[k] - 0.7 * t);
        v += daj * pauli_or_alpha(k + 1, m);
      }
      return v;
    };
  } else if (name == "linear-sigma3") {
    h.grad_bound = 1.0;
    h.value = [g3](double, const Vec& x) { return Matrix(x[0] * g3); };
    h.partial = [g3](double, const Vec&, int k) {
      return k == 0 ? g3 : Matrix(Matrix::Zero(g3.rows(), g3.cols()));
    };
  } else {
    throw std::invalid_argument("hermitian_preset: unknown profile " + name);
  }
  return h;
}

BoundedPart bounded_preset(const std::string& name, int dim, int m,
                           double gamma) {
  (void)dim;
  if (m != 2 && m != 4)
    throw std::invalid_argument("bounded_preset: m must be 2 or 4");
  BoundedPart b;
  b.name = name;
  const Matrix g1 = pauli_or_alpha(1, m);
  const Matrix g2 = pauli_or_alpha(2, m);
  if (name == "hermitian-bounded") {
    b.hermitian = true;
    b.bound = 0.7;
    b.value = [g1, g2, m](double, const Vec& x) {
      return Matrix(0.4 * std::cos(x[0]) * g1 + 0.3 * std::sin(2.0 * x[0]) * g2 +
                    0.2 * Matrix::Identity(m, m));
    };
  } else if (name == "nonhermitian-bounded") {
    // Anti-Hermitian core i*gamma*I drives e^{gamma t} norm growth; the
    // trig admixture keeps it honestly matrix-valued.
    b.hermitian = false;
    b.bound = std::sqrt(gamma * gamma + 0.09 * gamma * gamma);
    b.value = [g1, m, gamma](double, const Vec& x) {
      return Matrix(Complex(0.0, gamma) * Matrix::Identity(m, m) +
                    0.3 * gamma * std::cos(x[0]) * g1);
    };
  } else {
    throw std::invalid_argument("bounded_preset: unknown profile " + name);
  }
  return b;
}

double eval_Qjk(const PotentialSpec& spec, double t, const Vec& y,
                const Vec& x, int j, int k) {
  if (!spec.quadratic)
    throw std::invalid_argument("eval_Qjk: potential has no quadratic part");
  double acc = 0;
  for (int i = 0; i < kGLOrder; ++i) {
    const double th = kGLNode[i];
    const Eigen::MatrixXd h = spec.quadratic->hessian(t, lerp(x, y, th));
    acc += kGLWeight[i] * (1.0 - th) * h(j, k);
  }
  return acc;
}

Matrix eval_Vk(const PotentialSpec& spec, double t, const Vec& y,
               const Vec& x, int k) {
  if (!spec.hermitian1)
    throw std::invalid_argument("eval_Vk: potential has no C1 part");
  Matrix acc = Matrix::Zero(spec.components, spec.components);
  for (int i = 0; i < kGLOrder; ++i) {
    const double th = kGLNode[i];
    acc += kGLWeight[i] * spec.hermitian1->partial(t, lerp(x, y, th), k);
  }
  return acc;
}

Vec integral_grad_Q(const PotentialSpec& spec, double t0, double t1,
                    const Vec& x, int substeps_per_unit) {
  if (!spec.quadratic || t0 == t1) return Vec::zero(spec.dim);
  if (!spec.time_dependent) {
    Vec g = spec.quadratic->gradient(t0, x);
    for (int a = 0; a < g.dim; ++a) g[a] *= (t1 - t0);
    return g;
  }
  return simpson_vec(
      [&](double tau) { return spec.quadratic->gradient(tau, x); }, t0, t1,
      spec.dim, substeps_per_unit);
}

Vec characteristics_g(const PotentialSpec& spec, double s, double t,
                      const Vec& x, const Vec& xi, int substeps_per_unit) {
  const Vec shift = integral_grad_Q(spec, t, s, x, substeps_per_unit);
  Vec g = xi;
  for (int a = 0; a < xi.dim; ++a) g[a] -= shift[a];
  return g;
}

Matrix phase_h(const CliffordSystem& cs, const PotentialSpec& spec, double s,
               double t, const Vec& x, const Vec& xi, int substeps_per_unit) {
  if (!spec.quadratic)
    throw std::invalid_argument("phase_h: quadratic-path potential required");
  const Vec g = characteristics_g(spec, s, t, x, xi, substeps_per_unit);
  const double q = spec.quadratic->value(s, x);
  const Vec grad = spec.quadratic->gradient(s, x);
  return cs.symbol(g) +
         (q - dot(x, grad)) * Matrix::Identity(cs.components, cs.components);
}

void validate_quadratic_bounds(const PotentialSpec& spec, const Grid& grid,
                               const std::vector<double>& times) {
  if (!spec.quadratic) return;
  double worst = 0;
  for (double t : times) {
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const Eigen::MatrixXd h = spec.quadratic->hessian(t, grid.point(p));
      worst = std::max(worst, h.cwiseAbs().maxCoeff());
    }
  }
  if (worst > spec.quadratic->hess_bound + 1e-12)
    throw std::runtime_error(
        "validate_quadratic_bounds: sampled Hessian exceeds declared bound "
        "for potential " +
        spec.quadratic->name);
}

}  // namespace modspace
