#pragma once

#include "modspace/spectral.hpp"

namespace modspace {

/// exp(-i theta H) for Hermitian H: closed form for 2x2 (Pauli split),
/// eigendecomposition otherwise.
Matrix herm_phase_factor(const Matrix& H, double theta);

/// exp(A) for a general square matrix (scaling-and-squaring Pade).
Matrix general_matrix_exp(const Matrix& A);

}  // namespace modspace
