#include "modspace/dirac.hpp"

#include <cmath>
#include <stdexcept>

namespace modspace {

namespace {

Matrix pauli(int j) {
  Matrix s(2, 2);
  const Complex i(0.0, 1.0);
  switch (j) {
    case 1:
      s << 0, 1, 1, 0;
      break;
    case 2:
      s << 0, -i, i, 0;
      break;
    default:
      s << 1, 0, 0, -1;
      break;
  }
  return s;
}

Matrix pauli_block_alpha(int j) {
  Matrix a = Matrix::Zero(4, 4);
  a.block(0, 2, 2, 2) = pauli(j);
  a.block(2, 0, 2, 2) = pauli(j);
  return a;
}

}  // namespace

CliffordSystem CliffordSystem::preset(const std::string& name, double mass) {
  if (mass < 0) throw std::invalid_argument("CliffordSystem: mass >= 0");
  CliffordSystem cs;
  cs.mass = mass;
  if (name == "dirac1d") {
    cs.dim = 1;
    cs.components = 2;
    cs.alpha = {pauli(1)};
    cs.beta = pauli(3);
  } else if (name == "dirac2d") {
    cs.dim = 2;
    cs.components = 2;
    cs.alpha = {pauli(1), pauli(2)};
    cs.beta = pauli(3);
  } else if (name == "dirac3d") {
    cs.dim = 3;
    cs.components = 4;
    cs.alpha = {pauli_block_alpha(1), pauli_block_alpha(2),
                pauli_block_alpha(3)};
    Matrix b = Matrix::Zero(4, 4);
    b.block(0, 0, 2, 2) = Matrix::Identity(2, 2);
    b.block(2, 2, 2, 2) = -Matrix::Identity(2, 2);
    cs.beta = b;
  } else {
    throw std::invalid_argument("CliffordSystem: unknown preset " + name);
  }
  return cs;
}

Matrix CliffordSystem::symbol(const Vec& xi) const {
  Matrix h = mass * beta;
  for (int j = 0; j < dim; ++j) h += xi[j] * alpha[static_cast<std::size_t>(j)];
  return h;
}

MultiplierSymbol CliffordSystem::multiplier() const {
  MultiplierSymbol sym;
  sym.size = components;
  sym.hermitian = true;
  sym.eval = [*this](const Vec& xi) { return symbol(xi); };
  return sym;
}

ProjectionPair projections(const CliffordSystem& cs, const Vec& xi) {
  const double e2 = xi.norm2() + cs.mass * cs.mass;
  const Matrix id = Matrix::Identity(cs.components, cs.components);
  ProjectionPair p;
  if (e2 <= 0.0) {
    // massless zero-frequency node: both branches collapse onto I/2
    p.plus = 0.5 * id;
    p.minus = 0.5 * id;
    p.singular = true;
    return p;
  }
  const Matrix h = cs.symbol(xi) / std::sqrt(e2);
  p.plus = 0.5 * (id + h);
  p.minus = 0.5 * (id - h);
  return p;
}

SpinorField free_dirac_propagate(const CliffordSystem& cs,
                                 const SpinorField& psi0, double t) {
  if (psi0.grid().dim() != cs.dim)
    throw std::invalid_argument("free_dirac_propagate: grid dim != N");
  if (t == 0.0) return psi0;
  MultiplierSymbol sym;
  sym.size = cs.components;
  sym.hermitian = false;  // unitary, not Hermitian
  sym.eval = [cs, t](const Vec& xi) {
    const double e2 = xi.norm2() + cs.mass * cs.mass;
    const Matrix id = Matrix::Identity(cs.components, cs.components);
    if (e2 <= 0.0) return id;  // massless xi=0 node: phase fixed to 1
    const double e = std::sqrt(e2);
    return Matrix(std::cos(t * e) * id -
                  Complex(0.0, 1.0) * (std::sin(t * e) / e) * cs.symbol(xi));
  };
  return apply_multiplier(sym, psi0);
}

SpinorField klein_gordon_propagate(const SpinorField& psi0, double mass,
                                   double t, int sign) {
  if (t == 0.0) return psi0;
  MultiplierSymbol sym = MultiplierSymbol::scalar([mass, t, sign](const Vec& xi) {
    const double e = std::sqrt(xi.norm2() + mass * mass);
    const double ph = -sign * t * e;
    return Complex(std::cos(ph), std::sin(ph));
  });
  return apply_multiplier(sym, psi0);
}

SpinorField project_field(const CliffordSystem& cs, const SpinorField& psi,
                          int sign) {
  MultiplierSymbol sym;
  sym.size = cs.components;
  sym.hermitian = true;
  sym.eval = [cs, sign](const Vec& xi) {
    ProjectionPair p = projections(cs, xi);
    return sign >= 0 ? p.plus : p.minus;
  };
  return apply_multiplier(sym, psi);
}

SpinorField plane_wave(const Grid& grid, const Vec& xi0,
                       const std::vector<Complex>& v) {
  SpinorField f(grid, static_cast<int>(v.size()));
  for (std::size_t x = 0; x < grid.size(); ++x) {
    const double ph = dot(grid.point(x), xi0);
    const Complex e(std::cos(ph), std::sin(ph));
    for (int c = 0; c < f.components(); ++c)
      f.at(x, c) = e * v[static_cast<std::size_t>(c)];
  }
  return f;
}

}  // namespace modspace
