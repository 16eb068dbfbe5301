#include "modspace/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "modspace/fft.hpp"
#include "modspace/parallel.hpp"

namespace modspace {

MultiplierSymbol MultiplierSymbol::scalar(
    std::function<Complex(const Vec&)> f, bool hermitian) {
  MultiplierSymbol s;
  s.size = 1;
  s.hermitian = hermitian;
  s.eval = [f = std::move(f)](const Vec& xi) {
    Matrix m(1, 1);
    m(0, 0) = f(xi);
    return m;
  };
  return s;
}

namespace {

void componentwise_dft(const SpinorField& f, SpinorField& out, bool forward) {
  const Grid& g = f.grid();
  const int m = f.components();
  const std::size_t size = g.size();
  parallel_for(0, static_cast<std::size_t>(m), [&](std::size_t c) {
    std::vector<Complex> in(size), res(size);
    for (std::size_t x = 0; x < size; ++x) in[x] = f.at(x, static_cast<int>(c));
    if (forward)
      grid_dft(g, in.data(), res.data());
    else
      grid_idft(g, in.data(), res.data());
    for (std::size_t x = 0; x < size; ++x) out.at(x, static_cast<int>(c)) = res[x];
  });
}

void check_hermitian(const Matrix& M, const Vec& xi) {
  double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    (void)xi;
    throw std::runtime_error(
        "apply_multiplier: symbol flagged hermitian is not hermitian at a "
        "frequency node");
  }
}

}  // namespace

SpinorField forward_ft(const SpinorField& f) {
  SpinorField out(f.grid(), f.components(), Domain::Frequency);
  componentwise_dft(f, out, true);
  const double c = std::pow(2.0 * M_PI, -0.5 * f.grid().dim());
  out *= c;
  return out;
}

SpinorField inverse_ft(const SpinorField& fhat) {
  SpinorField out(fhat.grid(), fhat.components(), Domain::Space);
  componentwise_dft(fhat, out, false);
  const double c = std::pow(2.0 * M_PI, 0.5 * fhat.grid().dim());
  out *= c;
  return out;
}

SpinorField apply_multiplier(const MultiplierSymbol& sym,
                             const SpinorField& f) {
  const Grid& g = f.grid();
  const int m = f.components();
  if (sym.size != 1 && sym.size != m)
    throw std::invalid_argument(
        "apply_multiplier: symbol size does not match field components");

  SpinorField spec(g, m, Domain::Frequency);
  componentwise_dft(f, spec, true);

  const std::size_t size = g.size();
  parallel_for(0, size, [&](std::size_t k) {
    const Vec xi = g.frequency(k);
    const Matrix M = sym.eval(xi);
    if (sym.hermitian) check_hermitian(M, xi);
    if (sym.size == 1) {
      const Complex s = M(0, 0);
      for (int c = 0; c < m; ++c) spec.at(k, c) *= s;
    } else {
      Eigen::VectorXcd v(m);
      for (int c = 0; c < m; ++c) v(c) = spec.at(k, c);
      Eigen::VectorXcd w = M * v;
      for (int c = 0; c < m; ++c) spec.at(k, c) = w(c);
    }
  });

  SpinorField out(g, m, Domain::Space);
  componentwise_dft(spec, out, false);
  return out;
}

SpinorField bessel(double s, const SpinorField& f) {
  MultiplierSymbol sym = MultiplierSymbol::scalar(
      [s](const Vec& xi) {
        return Complex(std::pow(1.0 + xi.norm2(), 0.5 * s), 0.0);
      },
      true);
  return apply_multiplier(sym, f);
}

}  // namespace modspace
