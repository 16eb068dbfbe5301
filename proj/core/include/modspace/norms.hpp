#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "modspace/wavepacket.hpp"

namespace modspace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Mixed-norm exponents p, q in [1, inf] and polynomial weights
/// <x>^r, <xi>^s.
struct NormSpec {
  double p = 2.0;
  double q = 2.0;
  double r = 0.0;
  double s = 0.0;

  void validate() const;
};

/// || F ||: inner x-integral with weight <x>^{pr} (dx^N quadrature), outer
/// xi-integral with weight <xi>^{qs} (dxi^N); max over the axis when the
/// exponent is infinite.
double mixed_norm(const PhaseSpaceField& F, const NormSpec& spec);

/// Modulation norm ||W_phi f|| for every spec in one pass over x slices;
/// avoids materializing the phase-space field on large grids.
std::vector<double> mod_norms(const SpinorField& f, const Window& phi,
                              const std::vector<NormSpec>& specs);

double mod_norm(const SpinorField& f, const Window& phi, const NormSpec& spec);

/// Extremes of mod_norm_psi / mod_norm_phi over an ensemble; throws on an
/// ensemble member with vanishing norm.
std::pair<double, double> window_equivalence_ratio(
    const std::vector<SpinorField>& ensemble, const Window& phi,
    const Window& psi, const NormSpec& spec);

}  // namespace modspace
