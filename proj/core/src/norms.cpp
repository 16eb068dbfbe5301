#include "modspace/norms.hpp"

#include <cmath>
#include <stdexcept>

#include "modspace/fft.hpp"
#include "modspace/parallel.hpp"

namespace modspace {

namespace {

double bracket(const Vec& v) { return std::sqrt(1.0 + v.norm2()); }

/// Finishes the outer xi reduction given the inner values per xi node.
double outer_reduce(const Grid& g, const std::vector<double>& inner,
                    const NormSpec& spec) {
  if (std::isinf(spec.q)) {
    double mx = 0;
    for (std::size_t xi = 0; xi < g.size(); ++xi)
      mx = std::max(mx, inner[xi] * std::pow(bracket(g.frequency(xi)), spec.s));
    return mx;
  }
  double acc = 0;
  for (std::size_t xi = 0; xi < g.size(); ++xi)
    acc += std::pow(inner[xi], spec.q) *
           std::pow(bracket(g.frequency(xi)), spec.q * spec.s);
  return std::pow(acc * g.freq_cell_volume(), 1.0 / spec.q);
}

}  // namespace

void NormSpec::validate() const {
  if (!(p >= 1.0) || !(q >= 1.0))
    throw std::invalid_argument("NormSpec: p and q must be >= 1");
}

double mixed_norm(const PhaseSpaceField& F, const NormSpec& spec) {
  spec.validate();
  const Grid& g = F.grid();
  const std::size_t size = g.size();
  std::vector<double> inner(size, 0.0);

  if (std::isinf(spec.p)) {
    for (std::size_t x = 0; x < size; ++x) {
      const double wx = std::pow(bracket(g.point(x)), spec.r);
      for (std::size_t xi = 0; xi < size; ++xi)
        inner[xi] = std::max(inner[xi], F.point_norm(x, xi) * wx);
    }
  } else {
    for (std::size_t x = 0; x < size; ++x) {
      const double wx = std::pow(bracket(g.point(x)), spec.p * spec.r);
      for (std::size_t xi = 0; xi < size; ++xi)
        inner[xi] += std::pow(F.point_norm(x, xi), spec.p) * wx;
    }
    for (std::size_t xi = 0; xi < size; ++xi)
      inner[xi] = std::pow(inner[xi] * g.cell_volume(), 1.0 / spec.p);
  }
  return outer_reduce(g, inner, spec);
}

std::vector<double> mod_norms(const SpinorField& f, const Window& phi,
                              const std::vector<NormSpec>& specs) {
  for (const NormSpec& s : specs) s.validate();
  if (!(phi.grid() == f.grid()))
    throw std::invalid_argument("mod_norms: window/field grid mismatch");
  const Grid& g = f.grid();
  const int m = f.components();
  const std::size_t size = g.size();
  const std::size_t nspec = specs.size();

  // x slices are processed in fixed-size blocks: rows of a block transform
  // in parallel, accumulation runs serially in x order so results do not
  // depend on the thread count.
  const std::size_t block = 64;
  std::vector<std::vector<double>> acc(nspec, std::vector<double>(size, 0.0));
  std::vector<Complex> rows(std::min(block, size) * size *
                            static_cast<std::size_t>(m));

  for (std::size_t x0 = 0; x0 < size; x0 += block) {
    const std::size_t cnt = std::min(block, size - x0);
    parallel_for(0, cnt, [&](std::size_t i) {
      const std::size_t x = x0 + i;
      std::vector<Complex> in(size), out(size);
      for (int c = 0; c < m; ++c) {
        for (std::size_t y = 0; y < size; ++y)
          in[y] = std::conj(phi.value(g.diff_index(x, y))) * f.at(y, c);
        grid_dft(g, in.data(), out.data());
        for (std::size_t xi = 0; xi < size; ++xi)
          rows[(i * size + xi) * static_cast<std::size_t>(m) +
               static_cast<std::size_t>(c)] = out[xi];
      }
    });
    for (std::size_t i = 0; i < cnt; ++i) {
      const std::size_t x = x0 + i;
      const Vec xv = g.point(x);
      for (std::size_t sidx = 0; sidx < nspec; ++sidx) {
        const NormSpec& spec = specs[sidx];
        const bool pinf = std::isinf(spec.p);
        const double wx = pinf ? std::pow(bracket(xv), spec.r)
                               : std::pow(bracket(xv), spec.p * spec.r);
        for (std::size_t xi = 0; xi < size; ++xi) {
          double a = 0;
          for (int c = 0; c < m; ++c)
            a += std::norm(rows[(i * size + xi) * static_cast<std::size_t>(m) +
                                static_cast<std::size_t>(c)]);
          a = std::sqrt(a);
          if (pinf)
            acc[sidx][xi] = std::max(acc[sidx][xi], a * wx);
          else
            acc[sidx][xi] += std::pow(a, spec.p) * wx;
        }
      }
    }
  }

  std::vector<double> out(nspec, 0.0);
  for (std::size_t sidx = 0; sidx < nspec; ++sidx) {
    const NormSpec& spec = specs[sidx];
    std::vector<double>& inner = acc[sidx];
    if (!std::isinf(spec.p)) {
      for (std::size_t xi = 0; xi < size; ++xi)
        inner[xi] = std::pow(inner[xi] * g.cell_volume(), 1.0 / spec.p);
    }
    out[sidx] = outer_reduce(g, inner, spec);
  }
  return out;
}

double mod_norm(const SpinorField& f, const Window& phi,
                const NormSpec& spec) {
  return mod_norms(f, phi, {spec})[0];
}

std::pair<double, double> window_equivalence_ratio(
    const std::vector<SpinorField>& ensemble, const Window& phi,
    const Window& psi, const NormSpec& spec) {
  if (ensemble.empty())
    throw std::invalid_argument("window_equivalence_ratio: empty ensemble");
  double lo = kInf, hi = 0.0;
  for (const SpinorField& f : ensemble) {
    const double a = mod_norm(f, phi, spec);
    const double b = mod_norm(f, psi, spec);
    if (a == 0.0 || b == 0.0)
      throw std::invalid_argument(
          "window_equivalence_ratio: zero field in ensemble");
    const double r = b / a;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

}  // namespace modspace
