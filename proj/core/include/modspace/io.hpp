#pragma once

#include <string>

#include "modspace/wavepacket.hpp"

namespace modspace {

/// Binary dump layout (little-endian): uint32 N, n, n_xi, m; float64 L;
/// then row-major (re, im) float64 pairs. Spinor fields carry n_xi = 0,
/// phase-space fields n_xi = n.
void write_field(const std::string& path, const SpinorField& f);
void write_field(const std::string& path, const PhaseSpaceField& F);

SpinorField read_spinor_field(const std::string& path);
PhaseSpaceField read_phase_space_field(const std::string& path);

/// Deterministic float formatting for CSV cells ("%.17g"; "inf" for an
/// infinite exponent).
std::string csv_number(double v);

}  // namespace modspace
