#pragma once

#include "kreach/sparse.hpp"

namespace kreach {

// Arnoldi factorization C V = V H + h_residual v_next e_xi^T.
struct KrylovDecomposition {
  Mat v;       // n x xi, orthonormal columns, v.col(0) = seed/|seed|
  Mat h;       // xi x xi upper Hessenberg
  double beta = 0.0;       // |seed|_2
  Index xi = 0;            // effective dimension actually built
  bool happy_breakdown = false;
  double h_residual = 0.0;  // h_{xi+1, xi} at termination (~0 on breakdown)
};

// Modified Gram-Schmidt Arnoldi with selective reorthogonalization. Stops
// early (happy breakdown) when the next subdiagonal entry drops to
// tol * two_norm_upper(C); the returned basis and Hessenberg matrix are
// truncated to the effective dimension.
//
// pre: square C, nonzero seed, 1 <= xi_max <= n.
KrylovDecomposition arnoldi(const SparseMatrix& c, const Vec& seed,
                            Index xi_max, double breakdown_tol = 1e-14);

// beta * V * e^(H t) * e_1, the reduced-space approximation of e^(C t) seed.
Vec exp_action(const KrylovDecomposition& dec, double t);

} // namespace kreach
