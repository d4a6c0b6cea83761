#pragma once

#include <cstdint>

#include "schro/common.hpp"

namespace schro {

// Data is viewed as a row-major (outer, M, inner) array; transforms act on the middle axis.
// to_physical applies Phi (w = Phi c), to_spectral applies Phi^{-1}.
void to_physical(cplx* data, long long outer, int M, long long inner);
void to_spectral(cplx* data, long long outer, int M, long long inner);

// Applies a dense M x M matrix along the middle axis.
void apply_axis(const CMat& A, cplx* data, long long outer, int M, long long inner);

// Number of single-axis transforms executed since the last reset (for accounting tests).
std::uint64_t transform_count();
void reset_transform_count();

}  // namespace schro
