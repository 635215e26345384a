#pragma once

#include <utility>

#include "kreach/homogeneous.hpp"

namespace kreach {

// [[A, u], [0, 0]] with unit seed e_{n+1}: trajectories of the augmented
// autonomous system project (first n coordinates) onto particular solutions
// of dx = Ax + u started at zero.
struct AugmentedSystem {
  SparseMatrix a_tilde;
  Vec seed;
};

AugmentedSystem augment(const SparseMatrix& a, const Vec& u);

// integral_0^delta e^(A t) dt * u, enclosed as value + symmetric error box.
std::pair<Vec, IntervalVector> const_input_point(const SparseMatrix& a, const Vec& u,
                                                 double delta,
                                                 const XiPolicy& policy = {});

// integral_{t0}^{te} e^(A (delta - t)) dt * u for 0 <= t0 <= te <= delta.
std::pair<Vec, IntervalVector> partial_input_point(const SparseMatrix& a,
                                                   const Vec& u, double t0, double te,
                                                   double delta,
                                                   const XiPolicy& policy = {});

// Carrier zonotope plus the separated symmetric error box, so the engine can
// route the error through either channel.
struct InputSetParts {
  Zonotope carrier;
  IntervalVector err;
  // false when any column's dimension search hit the cap before certifying
  // the requested target (bounds stay sound, only wider than requested)
  bool target_met = true;
};

// Enclosure of { integral_0^delta e^(A t) dt * u : u in U }: every input
// signal is held constant over the step.
InputSetParts const_uncertain_input_parts(const SparseMatrix& a, const Zonotope& u_set,
                                          double delta, const XiPolicy& policy = {});
Zonotope const_uncertain_input_set(const SparseMatrix& a, const Zonotope& u_set,
                                   double delta, const XiPolicy& policy = {});

// Enclosure of { integral_0^delta e^(A (delta-t)) u(t) dt : u(t) in U } for
// arbitrarily time-varying measurable signals. The carrier holds one
// generator per (input generator, Taylor order) pair; truncation and
// certificate terms are collected in the error box.
InputSetParts varying_input_parts(const SparseMatrix& a, const Zonotope& u_set,
                                  double delta, const EtaPolicy& eta_policy = {},
                                  const XiPolicy& xi_policy = {});
Zonotope varying_input_set(const SparseMatrix& a, const Zonotope& u_set, double delta,
                           const EtaPolicy& eta_policy = {},
                           const XiPolicy& xi_policy = {});

} // namespace kreach
