#pragma once

#include <vector>

#include "modspace/dirac.hpp"
#include "modspace/grid.hpp"
#include "modspace/potentials.hpp"

namespace modspace {

/// Strang splitting setup: step size, horizon, order (2 only).
struct EvolutionConfig {
  double dt = 1e-3;
  double T = 1.0;
  int splitting_order = 2;

  void validate() const;
};

/// Reference solver for i d_t u = a(D) u + V(t,x) u: Strang composition
/// e^{-i dt/2 V} e^{-i dt a(D)} e^{-i dt/2 V}. The kinetic factor uses the
/// exact Clifford diagonalization per frequency node; potential factors
/// use per-point matrix exponentials with midpoint-in-time sampling of V.
/// Returns snapshots at `sample_times`, each of which must land on a step
/// boundary. Aborts with a diagnostic if the state turns non-finite.
std::vector<SpinorField> split_step_evolve(
    const CliffordSystem& cs, const PotentialSpec& spec,
    const SpinorField& psi0, const EvolutionConfig& cfg,
    const std::vector<double>& sample_times);

SpinorField split_step_final(const CliffordSystem& cs,
                             const PotentialSpec& spec,
                             const SpinorField& psi0,
                             const EvolutionConfig& cfg);

}  // namespace modspace
