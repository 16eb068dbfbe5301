#pragma once

#include "modspace/grid.hpp"

namespace modspace {

/// Unnormalized c2c DFT over a rank-`dim` row-major array with n points
/// per axis. sign = -1 applies e^{-2*pi*i*j*k/n} per axis (FFTW forward),
/// sign = +1 the conjugate. Plans are cached; execution is thread-safe so
/// independent slices may transform concurrently.
void fft_transform(const Complex* in, Complex* out, int dim, int n, int sign);

/// Samples of sum_y f(y) e^{-i y.xi} dx^N on the dual grid (layout of
/// `grid`, one component). In-place safe.
void grid_dft(const Grid& grid, const Complex* in, Complex* out);

/// Inverse: sum_xi F(xi) e^{+i x.xi} (2*pi)^{-N} dxi^N; exact inverse of
/// grid_dft in exact arithmetic.
void grid_idft(const Grid& grid, const Complex* in, Complex* out);

}  // namespace modspace
