#include "modspace/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace modspace {

namespace {
bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::size_t ipow(int base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
  return r;
}
}  // namespace

Grid::Grid(int dimension, int points_per_axis, double half_width)
    : dim_(dimension), n_(points_per_axis), half_width_(half_width) {
  if (dim_ < 1 || dim_ > kMaxDim)
    throw std::invalid_argument("Grid: dimension must be 1, 2 or 3");
  if (n_ < 4 || !is_pow2(n_))
    throw std::invalid_argument("Grid: n must be a power of two >= 4");
  if (!(half_width_ > 0.0))
    throw std::invalid_argument("Grid: half-width must be positive");
  dx_ = 2.0 * half_width_ / n_;
  dxi_ = M_PI / half_width_;
  cell_vol_ = std::pow(dx_, dim_);
  freq_cell_vol_ = std::pow(dxi_, dim_);
  size_ = ipow(n_, dim_);
}

void Grid::decode(std::size_t flat, std::array<int, kMaxDim>& idx) const {
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[static_cast<std::size_t>(a)] = static_cast<int>(flat % n_);
    flat /= static_cast<std::size_t>(n_);
  }
}

std::size_t Grid::encode(const std::array<int, kMaxDim>& idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim_; ++a)
    flat = flat * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]);
  return flat;
}

Vec Grid::point(std::size_t flat) const {
  std::array<int, kMaxDim> idx;
  decode(flat, idx);
  Vec p = Vec::zero(dim_);
  for (int a = 0; a < dim_; ++a) p[a] = point1d(idx[static_cast<std::size_t>(a)]);
  return p;
}

Vec Grid::frequency(std::size_t flat) const {
  std::array<int, kMaxDim> idx;
  decode(flat, idx);
  Vec p = Vec::zero(dim_);
  for (int a = 0; a < dim_; ++a) p[a] = freq1d(idx[static_cast<std::size_t>(a)]);
  return p;
}

std::size_t Grid::diff_index(std::size_t a, std::size_t b) const {
  std::array<int, kMaxDim> ia, ib, id;
  decode(a, ia);
  decode(b, ib);
  // point(a) - point(b) = (ia - ib) * dx; its grid index is ia - ib + n/2.
  for (int ax = 0; ax < dim_; ++ax) {
    auto s = static_cast<std::size_t>(ax);
    id[s] = wrap(ia[s] - ib[s] + n_ / 2);
  }
  return encode(id);
}

std::size_t Grid::reflect_index(std::size_t a) const {
  std::array<int, kMaxDim> ia, ir;
  decode(a, ia);
  for (int ax = 0; ax < dim_; ++ax) {
    auto s = static_cast<std::size_t>(ax);
    ir[s] = wrap(-ia[s]);
  }
  return encode(ir);
}

Vec Grid::displacement(std::size_t a, std::size_t b) const {
  std::array<int, kMaxDim> ia, ib;
  decode(a, ia);
  decode(b, ib);
  Vec d = Vec::zero(dim_);
  for (int ax = 0; ax < dim_; ++ax) {
    auto s = static_cast<std::size_t>(ax);
    int k = ia[s] - ib[s];
    // wrap into [-n/2, n/2)
    k = wrap(k + n_ / 2) - n_ / 2;
    d[ax] = k * dx_;
  }
  return d;
}

int Grid::index_parity(std::size_t flat) const {
  int s = 0;
  for (int a = 0; a < dim_; ++a) {
    s += static_cast<int>(flat % static_cast<std::size_t>(n_));
    flat /= static_cast<std::size_t>(n_);
  }
  return (s & 1) ? -1 : 1;
}

SpinorField::SpinorField(Grid grid, int components, Domain domain)
    : grid_(grid), m_(components), domain_(domain) {
  if (m_ < 1) throw std::invalid_argument("SpinorField: components >= 1");
  data_.assign(grid_.size() * static_cast<std::size_t>(m_), Complex(0.0, 0.0));
}

double SpinorField::point_norm(std::size_t x_flat) const {
  double s = 0;
  for (int c = 0; c < m_; ++c) s += std::norm(data_[x_flat * m_ + c]);
  return std::sqrt(s);
}

void SpinorField::check_finite(const char* label) const {
  for (const Complex& z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::runtime_error(std::string(label) +
                               ": non-finite entry in field data");
  }
}

SpinorField& SpinorField::operator+=(const SpinorField& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}
SpinorField& SpinorField::operator-=(const SpinorField& o) {
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}
SpinorField& SpinorField::operator*=(Complex c) {
  for (auto& z : data_) z *= c;
  return *this;
}

double quadrature_sum(const SpinorField& f, double p) {
  if (!(p >= 1.0))
    throw std::invalid_argument("quadrature_sum: requires p >= 1");
  const double w = f.domain() == Domain::Space ? f.grid().cell_volume()
                                               : f.grid().freq_cell_volume();
  if (std::isinf(p)) {
    double mx = 0;
    for (std::size_t x = 0; x < f.grid().size(); ++x)
      mx = std::max(mx, f.point_norm(x));
    return mx;
  }
  double acc = 0;
  for (std::size_t x = 0; x < f.grid().size(); ++x)
    acc += std::pow(f.point_norm(x), p);
  return std::pow(acc * w, 1.0 / p);
}

double l2_distance(const SpinorField& a, const SpinorField& b) {
  SpinorField d = a;
  d -= b;
  return quadrature_sum(d, 2.0);
}

double relative_l2_error(const SpinorField& a, const SpinorField& b) {
  double nb = quadrature_sum(b, 2.0);
  if (nb == 0.0) return quadrature_sum(a, 2.0);
  return l2_distance(a, b) / nb;
}

}  // namespace modspace
