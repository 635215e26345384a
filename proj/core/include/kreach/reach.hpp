#pragma once

#include <vector>

#include "kreach/input_solution.hpp"

namespace kreach {

// Configuration of the propagation loop. The horizon is covered by
// ceil(t_f / delta) intervals of fixed width delta; when t_f is not a
// multiple of delta the trailing partial interval is widened to a full one
// (a sound over-approximation, flagged in the result).
struct ReachConfig {
  double delta = 0.0;  // time increment, > 0
  double t_f = 0.0;    // horizon, >= delta
  InputMode input_mode = InputMode::varying;
  ErrorChannel error_channel = ErrorChannel::interval;
  XiPolicy xi;
  EtaPolicy eta;
  // Fail (CertificateFailure) instead of proceeding with wider bounds when a
  // dimension search hits its cap before certifying the target, and widen
  // every time-interval set once more by the step error.
  bool strict_soundness = false;
};

// Per-step record. Certificate vectors report the separated error terms of
// the interval channel; in generator mode those terms are absorbed into the
// carriers and the vectors stay zero.
struct StepDiagnostics {
  Index step = 0;     // 1-based
  double t_lo = 0.0;  // covered interval [t_lo, t_hi]
  double t_hi = 0.0;
  Index xi_carrier = 0;    // reduced dimension for carrier propagation
  Index xi_box = 0;        // reduced dimension for error-box propagation
  double eps_rate = 0.0;   // largest per-seed error rate of this step's map
  Index point_generators = 0;     // generator count of the time-point set
  Index interval_generators = 0;  // generator count of the time-interval set
  Vec cert_radius;        // accumulated certificate radius inside the step's sets
  Vec input_cert_radius;  // part of cert_radius contributed by input certificates
  Vec curvature_radius;   // radius of the curvature box in the time-interval set
  double wall_seconds = 0.0;
};

struct ReachResult {
  std::vector<Zonotope> time_point_sets;     // states exactly at t_k = k delta
  std::vector<Zonotope> time_interval_sets;  // states throughout [t_{k-1}, t_k]
  std::vector<StepDiagnostics> steps;
  bool horizon_padded = false;  // t_f was rounded up to a step multiple
};

// Over-approximates the states reachable under dx = A x + u(t), u(t) in U,
// x(0) in X0, over [0, t_f]. Inputs are held constant per step in constant
// mode and arbitrarily time-varying in varying mode. The homogeneous and
// particular solutions propagate separately in a wrapping-free recursion:
// the particular part accumulates as an axis-aligned box, so set sizes stay
// flat across steps in the interval error channel.
ReachResult reach(const SparseMatrix& a, const Zonotope& x0, const Zonotope& u_set,
                  const ReachConfig& cfg);

// Convenience overload for dx = A x + B u: maps U through B first.
ReachResult reach(const SparseMatrix& a, const SparseMatrix& b, const Zonotope& x0,
                  const Zonotope& u_set, const ReachConfig& cfg);

struct SafetyReport {
  bool safe = true;
  Index first_violation_step = 0;  // 1-based; 0 when no step is flagged
  std::vector<bool> step_safe;     // one verdict per time-interval set
};

// A step passes iff the interval hull of its time-interval set is disjoint
// from the unsafe box in every monitored coordinate; coords[j] is the state
// index monitored against [unsafe.inf[j], unsafe.sup[j]]. Over-approximative
// sets make a pass a proof of safety while a flag may be spurious.
SafetyReport check_safety(const ReachResult& result, const std::vector<Index>& coords,
                          const IntervalVector& unsafe);

} // namespace kreach
