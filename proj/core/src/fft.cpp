#include "modspace/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace modspace {

namespace {

std::mutex g_plan_mutex;
std::map<std::tuple<int, int, int>, fftw_plan> g_plans;

fftw_plan get_plan(int dim, int n, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto key = std::make_tuple(dim, n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;

  std::size_t total = 1;
  std::vector<int> dims(static_cast<std::size_t>(dim), n);
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
  // Scratch only for planning; FFTW_UNALIGNED lets us execute on any buffer.
  std::vector<Complex> scratch(total);
  auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft(dim, dims.data(), ptr, ptr, sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
  g_plans[key] = plan;
  return plan;
}

}  // namespace

void fft_transform(const Complex* in, Complex* out, int dim, int n, int sign) {
  fftw_plan plan = get_plan(dim, n, sign);
  auto* fin = reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in));
  auto* fout = reinterpret_cast<fftw_complex*>(out);
  fftw_execute_dft(plan, fin, fout);
}

// With x_j = -L + j dx and xi_k = (k - n/2) dxi, each axis factors as
// e^{-i x_j xi_k} = (-1)^j (-1)^k e^{-2 pi i jk/n} (n/2 even), so the grid
// transform is an FFT with parity twiddles on both sides.
void grid_dft(const Grid& grid, const Complex* in, Complex* out) {
  const std::size_t size = grid.size();
  std::vector<Complex> tmp(size);
  for (std::size_t j = 0; j < size; ++j)
    tmp[j] = grid.index_parity(j) > 0 ? in[j] : -in[j];
  fft_transform(tmp.data(), out, grid.dim(), grid.n(), -1);
  const double w = grid.cell_volume();
  for (std::size_t k = 0; k < size; ++k)
    out[k] *= grid.index_parity(k) > 0 ? w : -w;
}

void grid_idft(const Grid& grid, const Complex* in, Complex* out) {
  const std::size_t size = grid.size();
  std::vector<Complex> tmp(size);
  for (std::size_t k = 0; k < size; ++k)
    tmp[k] = grid.index_parity(k) > 0 ? in[k] : -in[k];
  fft_transform(tmp.data(), out, grid.dim(), grid.n(), +1);
  const double w =
      grid.freq_cell_volume() / std::pow(2.0 * M_PI, grid.dim());
  for (std::size_t j = 0; j < size; ++j)
    out[j] *= grid.index_parity(j) > 0 ? w : -w;
}

}  // namespace modspace
