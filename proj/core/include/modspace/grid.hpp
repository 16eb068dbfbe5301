#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

namespace modspace {

using Complex = std::complex<double>;

constexpr int kMaxDim = 3;

/// Small fixed-capacity vector for points/frequencies in up to 3 dims.
struct Vec {
  std::array<double, kMaxDim> v{0.0, 0.0, 0.0};
  int dim = 0;

  static Vec zero(int n) {
    Vec r;
    r.dim = n;
    return r;
  }
  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  double norm2() const {
    double s = 0;
    for (int i = 0; i < dim; ++i) s += v[i] * v[i];
    return s;
  }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.dim; ++i) s += a[i] * b[i];
  return s;
}

/// Uniform periodic grid on [-L, L)^N with n (a power of two >= 4) points
/// per axis and the DFT-dual frequency grid xi_k = (k - n/2) * pi/L, so
/// that dx * dxi * n = 2*pi per axis exactly.
class Grid {
 public:
  Grid(int dimension, int points_per_axis, double half_width);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double half_width() const { return half_width_; }
  double dx() const { return dx_; }
  double dxi() const { return dxi_; }
  /// dx^N and dxi^N quadrature weights.
  double cell_volume() const { return cell_vol_; }
  double freq_cell_volume() const { return freq_cell_vol_; }
  std::size_t size() const { return size_; }

  double point1d(int j) const { return -half_width_ + j * dx_; }
  double freq1d(int k) const { return (k - n_ / 2) * dxi_; }

  Vec point(std::size_t flat) const;
  Vec frequency(std::size_t flat) const;

  void decode(std::size_t flat, std::array<int, kMaxDim>& idx) const;
  std::size_t encode(const std::array<int, kMaxDim>& idx) const;

  int wrap(int j) const {
    int r = j % n_;
    return r < 0 ? r + n_ : r;
  }
  /// Flat index of the componentwise difference a - b (periodic).
  std::size_t diff_index(std::size_t a, std::size_t b) const;
  /// Flat index of -a (periodic reflection through the origin node).
  std::size_t reflect_index(std::size_t a) const;
  /// Displacement point(a) - point(b) wrapped into [-L, L)^N.
  Vec displacement(std::size_t a, std::size_t b) const;

  /// Parity (-1)^(sum of multi-index components); used by the DFT shift
  /// between the [-L,L) layout and FFT index order.
  int index_parity(std::size_t flat) const;

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && half_width_ == o.half_width_;
  }

 private:
  int dim_;
  int n_;
  double half_width_;
  double dx_, dxi_, cell_vol_, freq_cell_vol_;
  std::size_t size_;
};

/// Which quadrature weight a field carries: dx^N on the spatial grid,
/// dxi^N after a forward transform.
enum class Domain { Space, Frequency };

/// C^m-valued samples on a Grid, layout data[x_flat * m + c].
class SpinorField {
 public:
  SpinorField(Grid grid, int components, Domain domain = Domain::Space);

  const Grid& grid() const { return grid_; }
  int components() const { return m_; }
  Domain domain() const { return domain_; }

  Complex& at(std::size_t x_flat, int c) { return data_[x_flat * m_ + c]; }
  const Complex& at(std::size_t x_flat, int c) const {
    return data_[x_flat * m_ + c];
  }
  std::vector<Complex>& data() { return data_; }
  const std::vector<Complex>& data() const { return data_; }

  /// Euclidean norm over components at one grid point.
  double point_norm(std::size_t x_flat) const;

  /// Throws if any entry is non-finite.
  void check_finite(const char* label) const;

  SpinorField& operator+=(const SpinorField& o);
  SpinorField& operator-=(const SpinorField& o);
  SpinorField& operator*=(Complex c);

 private:
  Grid grid_;
  int m_;
  Domain domain_;
  std::vector<Complex> data_;
};

/// (sum_x |f(x)|^p w^N)^(1/p) with w the domain cell volume; max norm for
/// p = infinity. Rejects p < 1.
double quadrature_sum(const SpinorField& f, double p);

/// L2 distance ||a - b||_2 (same grid/components required).
double l2_distance(const SpinorField& a, const SpinorField& b);

/// ||a - b||_2 / ||b||_2.
double relative_l2_error(const SpinorField& a, const SpinorField& b);

}  // namespace modspace
