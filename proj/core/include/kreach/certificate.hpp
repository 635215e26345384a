#pragma once

#include <utility>

#include "kreach/spectral.hpp"

namespace kreach {

// A-posteriori bound on the reduced-space exponential error:
//   |e^(C t) v - beta V e^(H t) e_1|  <=  |v| * eps_norm * t.
// `appendix_b` marks the elliptic-integral bound; `saad_fallback` the
// conservative factorial bound used when the pipeline fails or leaves its
// domain.
struct ErrorCertificate {
  enum class Method { appendix_b, saad_fallback };

  double eps_norm = 0.0;  // per unit time
  SpectralBounds bounds;
  double m = 0.0;
  double nu = 0.0;
  double q = 0.0;
  Method method = Method::saad_fallback;
  Index xi = 0;           // reduced dimension the bound was computed for
  double norm_two = 0.0;  // two-norm upper bound of C used in the formulas
};

// Rate eps such that the action error at any s in [0, t] is bounded by
// |v| * eps * s. The elliptic-integral bound is a per-unit-time rate
// already; the factorial bound is superlinear in time and gets rescaled to
// cover horizon t. Returns the smaller of the two valid bounds.
double certified_rate(const ErrorCertificate& cert, double t);

// Solves nu := (E(m) - (1-m)K(m))/c = (E(1-m) - mK(1-m))/(0.5(b-a)) for m by
// bisection (residual below 1e-12 at usual scales) and returns {m, nu}.
// Throws std::domain_error when no bracket exists numerically.
std::pair<double, double> solve_nu_m(const SpectralBounds& bounds);

// Bisection on res(q) = (xi-1)q + (2-xi)q^2 - C~(1-q)sqrt((1-q^2)^2+4mq^2)
// with C~ = 1/(2 nu); returns the root in (0,1).
double optimize_q(Index xi, double nu, double m);

ErrorCertificate epsilon_norm(const SparseMatrix& c, Index xi);

// Same pipeline with precomputed spectral data (norm_two_upper >= |C|_2);
// lets callers amortize the O(nnz) bound computation across many xi.
ErrorCertificate epsilon_norm(const SpectralBounds& bounds,
                              double norm_two_upper, Index xi);

struct ChosenDimension {
  Index xi = 0;
  ErrorCertificate cert;
  // false when the cap was reached without certifying the target (the
  // analysis may proceed; bounds stay sound, only wider than requested)
  bool target_met = false;
};

// Smallest xi with eps_norm(C, xi) * t_horizon <= target_eps, capped at
// min(xi_cap, n). xi = n always counts as meeting the target: the iteration
// then spans the full space and terminates in a happy breakdown whose
// residual replaces the formula bound.
ChosenDimension choose_dimension(const SparseMatrix& c, double target_eps,
                                 double t_horizon, Index xi_cap);

} // namespace kreach
