#pragma once

#include "kreach/sparse.hpp"

namespace kreach {

// Rigorous enclosure of the field of values of C inside the rectangle
// [a, b] x [-c, c] of the complex plane:
//   a <= lambda_min( (C + C^T)/2 )
//   b >= lambda_max( (C + C^T)/2 )
//   c >= max |lambda( (C - C^T)/2 )|
struct SpectralBounds {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// Gershgorin bounds on the symmetric part and an infinity-norm bound on the
// skew part. Always sound, O(nnz).
SpectralBounds spectral_bounds(const SparseMatrix& c_matrix);

// Lanczos estimates of the extreme eigenvalues of the symmetric part plus
// the Ritz residuals. The estimates are typically much tighter than
// Gershgorin but are not guaranteed outer bounds, so they are reported for
// auditing only; certificates always consume the Gershgorin values.
struct SpectralDiagnostics {
  SpectralBounds gershgorin;
  double ritz_min = 0.0;
  double ritz_max = 0.0;
  double residual_min = 0.0;  // residual bound for the smallest Ritz pair
  double residual_max = 0.0;  // residual bound for the largest Ritz pair
};

SpectralDiagnostics spectral_bounds_refined(const SparseMatrix& c_matrix,
                                            Index lanczos_steps = 40);

} // namespace kreach
