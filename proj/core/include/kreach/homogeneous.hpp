#pragma once

#include <utility>
#include <vector>

#include "kreach/certificate.hpp"
#include "kreach/krylov.hpp"
#include "kreach/policies.hpp"
#include "kreach/zonotope.hpp"

namespace kreach {

// One propagated column (the center or one generator of a zonotope).
struct SeedPropagation {
  KrylovDecomposition dec;
  ErrorCertificate cert;
  double seed_norm = 0.0;
  // effective per-unit-norm, per-unit-time error bound for this seed: the
  // breakdown residual bound when the iteration terminated early, the
  // matrix-level certificate otherwise
  double eps_norm = 0.0;
  bool zero = false;  // zero seeds skip the iteration entirely
};

struct HomogeneousStepResult {
  Zonotope mapped;     // images of center and generators
  IntervalVector err;  // symmetric certificate interval
  std::vector<SeedPropagation> per_seed;  // [0] = center, then generators
  double t = 0.0;
  Index xi = 0;  // requested reduced dimension after policy resolution
};

// min(policy.fixed or certificate search result, n)
Index resolve_xi(const SparseMatrix& a, double t_horizon, const XiPolicy& policy);

// Per-seed error rate: the terminal-residual bound when the iteration broke
// down (exact invariant subspace up to h_residual), the matrix certificate
// otherwise. Multiply by ||seed|| * t for a full error radius.
double effective_eps_rate(const KrylovDecomposition& dec,
                          const ErrorCertificate& cert, double t);

// Smallest Taylor order eta in [2, policy.cap] with
// norm_h_delta / (eta + 2) < policy.eps_max; throws when the cap is hit
// (remedy: reduce the time increment).
Index taylor_order(double norm_h_delta, const EtaPolicy& policy);

// Lagrange remainder radius of the order-eta expansion of e^(H delta):
// (|H| delta)^(eta+1) / (eta+1)! * 1 / (1 - |H| delta / (eta+2)).
double taylor_remainder(double norm_h_delta, Index eta);

std::pair<Vec, IntervalVector> hom_point_single(const SparseMatrix& a, const Vec& x0,
                                                double t, const XiPolicy& policy = {});

HomogeneousStepResult hom_point_set(const SparseMatrix& a, const Zonotope& z,
                                    double t, const XiPolicy& policy = {});

struct AbsorbedError {
  Zonotope set;
  IntervalVector err;  // zero interval in generator mode
};

// generators: error interval becomes axis-aligned generators of the set;
// interval: set stays the bare carrier, error travels separately.
AbsorbedError absorb_error(const HomogeneousStepResult& result, ErrorChannel mode);

// Enclosure of { e^(A t) x : x in iv }: center from the midpoint seed,
// radius from the elementwise-absolute matrix |A| acting on the radius seed
// plus both certificate terms. Tiny negative components of the reduced
// magnitude term are replaced by their absolute values (pure widening).
IntervalVector interval_propagate(const SparseMatrix& a, const IntervalVector& iv,
                                  double t, const XiPolicy& policy = {});

// Interval matrix F with
//   F = sum_{i=2}^{eta} [ (i^(-i/(i-1)) - i^(-1/(i-1))) delta^i, 0 ] H^i / i!
//       (+) [-1,1]^(xi x xi) * phi(delta),
// bounding the gap between true in-step trajectories and the chord between
// the endpoint states. Throws when no eta up to the cap satisfies the
// contraction condition (reduce delta).
IntervalMatrix correction_matrix(const Mat& h, double delta,
                                 const EtaPolicy& policy = {});

// F * e_1 without forming the matrix: center/radius pair in reduced space.
std::pair<Vec, Vec> correction_column(const Mat& h, double delta,
                                      const EtaPolicy& policy = {});

struct TimeIntervalParts {
  Zonotope set;              // full tube enclosure
  IntervalVector curvature;  // the curvature box already included in `set`
};

// Enclosure of the reach tube over [0, delta] starting from Z, given the
// step result at delta for the same Z: convex hull of Z and the mapped set
// (certificate errors absorbed as generators), plus the curvature term
// lifted from the cached per-seed decompositions and collapsed into one
// box, reported separately for diagnostics. strict additionally widens by
// the step error interval once more.
TimeIntervalParts time_interval_parts(const SparseMatrix& a, const Zonotope& z,
                                      const HomogeneousStepResult& step_result_at_delta,
                                      double delta, const EtaPolicy& policy = {},
                                      bool strict = false);
Zonotope time_interval_set(const SparseMatrix& a, const Zonotope& z,
                           const HomogeneousStepResult& step_result_at_delta,
                           double delta, const EtaPolicy& policy = {},
                           bool strict = false);

} // namespace kreach
