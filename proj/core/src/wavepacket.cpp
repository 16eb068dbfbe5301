#include "modspace/wavepacket.hpp"

#include <cmath>
#include <stdexcept>

#include "modspace/fft.hpp"
#include "modspace/parallel.hpp"

namespace modspace {

namespace {

std::vector<Window::MultiIndex> multi_indices_up_to(int dim, int order) {
  std::vector<Window::MultiIndex> out;
  Window::MultiIndex beta{0, 0, 0};
  // enumerate all beta with |beta| <= order over `dim` axes
  std::function<void(int, int)> rec = [&](int axis, int left) {
    if (axis == dim) {
      out.push_back(beta);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      beta[static_cast<std::size_t>(axis)] = k;
      rec(axis + 1, left - k);
    }
    beta[static_cast<std::size_t>(axis)] = 0;
  };
  rec(0, order);
  return out;
}

}  // namespace

Window::Window(Grid grid, std::vector<Complex> samples, int max_deriv_order)
    : grid_(grid), values_(std::move(samples)), max_order_(max_deriv_order) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("Window: sample count does not match grid");
  double mass = 0;
  for (const Complex& z : values_) mass += std::norm(z);
  l2_norm_ = std::sqrt(mass * grid_.cell_volume());
  validate();
  build_spectral_derivatives();
}

void Window::validate() const {
  if (!(l2_norm_ > 0.0))
    throw std::invalid_argument("Window: ||phi||_2 must be positive");
  double total = 0, tail = 0;
  const double r = grid_.half_width() / 2.0;
  for (std::size_t j = 0; j < grid_.size(); ++j) {
    const double a = std::norm(values_[j]);
    total += a;
    if (std::sqrt(grid_.point(j).norm2()) > r) tail += a;
  }
  if (tail > 1e-10 * total)
    throw std::invalid_argument(
        "Window: L2 mass outside |x| <= L/2 exceeds 1e-10 of total; widen "
        "the box or narrow the window");
}

void Window::build_spectral_derivatives() {
  const std::size_t size = grid_.size();
  std::vector<Complex> spec(size);
  grid_dft(grid_, values_.data(), spec.data());
  for (const MultiIndex& beta : multi_indices_up_to(grid_.dim(), max_order_)) {
    int total = 0;
    for (int a = 0; a < grid_.dim(); ++a) total += beta[static_cast<std::size_t>(a)];
    if (total == 0) continue;
    if (derivs_.count(beta)) continue;  // analytic entry already present
    std::vector<Complex> mod(size);
    for (std::size_t k = 0; k < size; ++k) {
      const Vec xi = grid_.frequency(k);
      Complex factor(1.0, 0.0);
      for (int a = 0; a < grid_.dim(); ++a)
        for (int rep = 0; rep < beta[static_cast<std::size_t>(a)]; ++rep)
          factor *= Complex(0.0, xi[a]);
      mod[k] = spec[k] * factor;
    }
    std::vector<Complex> der(size);
    grid_idft(grid_, mod.data(), der.data());
    derivs_[beta] = std::move(der);
  }
}

Window Window::gaussian(const Grid& grid, double width, int max_deriv_order) {
  if (!(width > 0)) throw std::invalid_argument("Window: width must be > 0");
  const std::size_t size = grid.size();
  std::vector<Complex> vals(size);
  double mass = 0;
  for (std::size_t j = 0; j < size; ++j) {
    const Vec x = grid.point(j);
    const double v = std::exp(-x.norm2() / (2.0 * width * width));
    vals[j] = Complex(v, 0.0);
    mass += v * v;
  }
  const double scale = 1.0 / std::sqrt(mass * grid.cell_volume());
  for (auto& z : vals) z *= scale;

  Window w(grid, vals, 0);
  w.max_order_ = max_deriv_order;
  // analytic derivatives of the normalized Gaussian:
  //   d_j phi = -(x_j / w^2) phi,
  //   d_j d_k phi = (x_j x_k / w^4 - delta_jk / w^2) phi.
  const double iw2 = 1.0 / (width * width);
  for (const MultiIndex& beta : multi_indices_up_to(grid.dim(), std::min(max_deriv_order, 2))) {
    int total = 0;
    for (int a = 0; a < grid.dim(); ++a) total += beta[static_cast<std::size_t>(a)];
    if (total == 0) continue;
    std::vector<Complex> der(size);
    if (total == 1) {
      int j = 0;
      for (int a = 0; a < grid.dim(); ++a)
        if (beta[static_cast<std::size_t>(a)] == 1) j = a;
      for (std::size_t p = 0; p < size; ++p)
        der[p] = -grid.point(p)[j] * iw2 * w.values_[p];
    } else {
      int j = -1, k = -1;
      for (int a = 0; a < grid.dim(); ++a) {
        int b = beta[static_cast<std::size_t>(a)];
        if (b == 2) j = k = a;
        if (b == 1) (j < 0 ? j : k) = a;
      }
      for (std::size_t p = 0; p < size; ++p) {
        const Vec x = grid.point(p);
        double coef = x[j] * x[k] * iw2 * iw2 - (j == k ? iw2 : 0.0);
        der[p] = coef * w.values_[p];
      }
    }
    w.derivs_[beta] = std::move(der);
  }
  w.build_spectral_derivatives();
  return w;
}

Window Window::odd_gaussian(const Grid& grid, double width) {
  const std::size_t size = grid.size();
  std::vector<Complex> vals(size);
  double mass = 0;
  for (std::size_t j = 0; j < size; ++j) {
    const Vec x = grid.point(j);
    const double v = x[0] * std::exp(-x.norm2() / (2.0 * width * width));
    vals[j] = Complex(v, 0.0);
    mass += v * v;
  }
  const double scale = 1.0 / std::sqrt(mass * grid.cell_volume());
  for (auto& z : vals) z *= scale;
  return Window(grid, vals, 2);
}

const std::vector<Complex>& Window::derivative(const MultiIndex& beta) const {
  auto it = derivs_.find(beta);
  if (it == derivs_.end())
    throw std::invalid_argument("Window: derivative order not precomputed");
  return it->second;
}

PhaseSpaceField::PhaseSpaceField(Grid grid, int components)
    : grid_(grid), m_(components) {
  data_.assign(grid_.size() * grid_.size() * static_cast<std::size_t>(m_),
               Complex(0.0, 0.0));
}

double PhaseSpaceField::point_norm(std::size_t x, std::size_t xi) const {
  double s = 0;
  for (int c = 0; c < m_; ++c) s += std::norm(at(x, xi, c));
  return std::sqrt(s);
}

double PhaseSpaceField::sup_abs() const {
  double mx = 0;
  for (std::size_t x = 0; x < grid_.size(); ++x)
    for (std::size_t xi = 0; xi < grid_.size(); ++xi)
      mx = std::max(mx, point_norm(x, xi));
  return mx;
}

double PhaseSpaceField::l2_norm() const {
  double s = 0;
  for (const Complex& z : data_) s += std::norm(z);
  return std::sqrt(s * grid_.cell_volume() * grid_.freq_cell_volume());
}

void PhaseSpaceField::check_finite(const char* label) const {
  for (const Complex& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::runtime_error(std::string(label) +
                               ": non-finite entry in phase-space data");
  }
}

PhaseSpaceField& PhaseSpaceField::operator+=(const PhaseSpaceField& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}
PhaseSpaceField& PhaseSpaceField::operator-=(const PhaseSpaceField& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}
PhaseSpaceField& PhaseSpaceField::operator*=(Complex c) {
  for (auto& z : data_) z *= c;
  return *this;
}

PhaseSpaceField wp_transform(const Window& phi, const SpinorField& f) {
  if (!(phi.grid() == f.grid()))
    throw std::invalid_argument("wp_transform: window/field grid mismatch");
  const Grid& g = f.grid();
  const int m = f.components();
  const std::size_t size = g.size();
  PhaseSpaceField W(g, m);

  parallel_for(0, size, [&](std::size_t x) {
    std::vector<Complex> in(size), out(size);
    for (int c = 0; c < m; ++c) {
      for (std::size_t y = 0; y < size; ++y)
        in[y] = std::conj(phi.value(g.diff_index(x, y))) * f.at(y, c);
      grid_dft(g, in.data(), out.data());
      for (std::size_t xi = 0; xi < size; ++xi) W.at(x, xi, c) = out[xi];
    }
  });
  return W;
}

SpinorField wp_adjoint(const Window& psi, const PhaseSpaceField& F) {
  if (!(psi.grid() == F.grid()))
    throw std::invalid_argument("wp_adjoint: window/field grid mismatch");
  const Grid& g = F.grid();
  const int m = F.components();
  const std::size_t size = g.size();

  // B(y, x) = (2 pi)^{-N} dxi^N sum_xi F(y, xi) e^{+i x.xi}, per component.
  PhaseSpaceField B(g, m);
  parallel_for(0, size, [&](std::size_t y) {
    std::vector<Complex> in(size), out(size);
    for (int c = 0; c < m; ++c) {
      for (std::size_t xi = 0; xi < size; ++xi) in[xi] = F.at(y, xi, c);
      grid_idft(g, in.data(), out.data());
      for (std::size_t x = 0; x < size; ++x) B.at(y, x, c) = out[x];
    }
  });

  SpinorField out(g, m, Domain::Space);
  const double w = g.cell_volume();
  parallel_for(0, size, [&](std::size_t x) {
    for (int c = 0; c < m; ++c) {
      Complex acc(0.0, 0.0);
      for (std::size_t y = 0; y < size; ++y)
        acc += psi.value(g.diff_index(x, y)) * B.at(y, x, c);
      out.at(x, c) = acc * w;
    }
  });
  return out;
}

Complex inversion_pairing(const Window& psi, const Window& phi) {
  if (!(psi.grid() == phi.grid()))
    throw std::invalid_argument("inversion_pairing: grid mismatch");
  const Grid& g = phi.grid();
  Complex c(0.0, 0.0);
  for (std::size_t z = 0; z < g.size(); ++z)
    c += psi.value(g.reflect_index(z)) * std::conj(phi.value(z));
  return c * g.cell_volume();
}

SpinorField wp_invert(const Window& phi, const Window& psi,
                      const PhaseSpaceField& F) {
  const Complex c = inversion_pairing(psi, phi);
  if (std::abs(c) <= 1e-8 * psi.l2_norm() * phi.l2_norm())
    throw std::invalid_argument(
        "wp_invert: window pairing too close to zero (near-orthogonal "
        "windows)");
  SpinorField f = wp_adjoint(psi, F);
  f *= Complex(1.0, 0.0) / c;
  return f;
}

PhaseSpaceField wp_transform_matrix_window(
    const Grid& grid, int m, bool xi_independent,
    const std::function<Matrix(std::size_t z_flat, std::size_t xi_flat)>& K,
    const SpinorField& f) {
  if (f.components() != m)
    throw std::invalid_argument(
        "wp_transform_matrix_window: kernel/field size mismatch");
  if (!(grid == f.grid()))
    throw std::invalid_argument("wp_transform_matrix_window: grid mismatch");
  const std::size_t size = grid.size();
  PhaseSpaceField W(grid, m);

  if (xi_independent) {
    parallel_for(0, size, [&](std::size_t x) {
      std::vector<Complex> in(size), out(size);
      std::vector<Eigen::VectorXcd> v(size, Eigen::VectorXcd(m));
      for (std::size_t y = 0; y < size; ++y) {
        Eigen::VectorXcd u(m);
        for (int c = 0; c < m; ++c) u(c) = f.at(y, c);
        v[y] = K(grid.diff_index(x, y), 0) * u;
      }
      for (int c = 0; c < m; ++c) {
        for (std::size_t y = 0; y < size; ++y) in[y] = v[y](c);
        grid_dft(grid, in.data(), out.data());
        for (std::size_t xi = 0; xi < size; ++xi) W.at(x, xi, c) = out[xi];
      }
    });
    return W;
  }

  const double w = grid.cell_volume();
  parallel_for(0, size, [&](std::size_t x) {
    for (std::size_t xi = 0; xi < size; ++xi) {
      const Vec xiv = grid.frequency(xi);
      Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(m);
      for (std::size_t y = 0; y < size; ++y) {
        const double ph = -dot(grid.point(y), xiv);
        const Complex e(std::cos(ph), std::sin(ph));
        Eigen::VectorXcd u(m);
        for (int c = 0; c < m; ++c) u(c) = f.at(y, c);
        acc += e * (K(grid.diff_index(x, y), xi) * u);
      }
      for (int c = 0; c < m; ++c) W.at(x, xi, c) = acc(c) * w;
    }
  });
  return W;
}

PhaseSpaceField xi_shifted(const PhaseSpaceField& F,
                           const std::function<Vec(std::size_t x)>& delta) {
  const Grid& g = F.grid();
  const int m = F.components();
  const std::size_t size = g.size();
  PhaseSpaceField G(g, m);
  parallel_for(0, size, [&](std::size_t x) {
    const Vec d = delta(x);
    std::vector<Complex> in(size), mid(size);
    for (int c = 0; c < m; ++c) {
      for (std::size_t xi = 0; xi < size; ++xi) in[xi] = F.at(x, xi, c);
      grid_idft(g, in.data(), mid.data());
      for (std::size_t y = 0; y < size; ++y) {
        const double ph = -dot(g.point(y), d);
        mid[y] *= Complex(std::cos(ph), std::sin(ph));
      }
      grid_dft(g, mid.data(), in.data());
      for (std::size_t xi = 0; xi < size; ++xi) G.at(x, xi, c) = in[xi];
    }
  });
  return G;
}

}  // namespace modspace
