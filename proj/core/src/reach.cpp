#include "kreach/reach.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "kreach/errors.hpp"

namespace kreach {
namespace {

// Resolves the reduced dimension once so every per-step call skips the
// search; in strict mode an unreachable target is a hard failure.
XiPolicy freeze_policy(const SparseMatrix& m, double t_horizon, const XiPolicy& base,
                       bool strict, const char* what) {
  XiPolicy frozen = base;
  if (base.fixed > 0) {
    frozen.fixed = std::min(base.fixed, m.rows());
    return frozen;
  }
  const ChosenDimension chosen =
      choose_dimension(m, base.target_eps, t_horizon, base.cap);
  if (strict && !chosen.target_met)
    throw CertificateFailure(std::string(what) +
                             ": certificate target not met within the dimension cap");
  frozen.fixed = chosen.xi;
  return frozen;
}

double max_seed_rate(const HomogeneousStepResult& step) {
  double rate = 0.0;
  for (const SeedPropagation& s : step.per_seed) rate = std::max(rate, s.eps_norm);
  return rate;
}

} // namespace

ReachResult reach(const SparseMatrix& a, const Zonotope& x0, const Zonotope& u_set,
                  const ReachConfig& cfg) {
  const auto start_time = std::chrono::steady_clock::now();
  const Index n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("reach: system matrix must be square");
  if (x0.dim() != n) throw std::invalid_argument("reach: initial set dimension mismatch");
  if (u_set.dim() != n) throw std::invalid_argument("reach: input set dimension mismatch");
  if (!(cfg.delta > 0.0)) throw std::invalid_argument("reach: delta must be positive");
  if (cfg.t_f < cfg.delta * (1.0 - 1e-12))
    throw std::invalid_argument("reach: horizon shorter than one step");

  const Index num_steps = std::max<Index>(
      1, static_cast<Index>(std::ceil(cfg.t_f / cfg.delta - 1e-9)));
  const bool interval_mode = cfg.error_channel == ErrorChannel::interval;
  const bool strict = cfg.strict_soundness;

  const XiPolicy carrier_policy =
      freeze_policy(a, cfg.delta, cfg.xi, strict, "carrier propagation");
  XiPolicy box_policy;
  if (interval_mode)
    box_policy = freeze_policy(a.elementwise_abs(), cfg.delta, cfg.xi, strict,
                               "error propagation");

  // One-step input solution; the recursion only ever propagates it linearly.
  InputSetParts input = cfg.input_mode == InputMode::varying
                            ? varying_input_parts(a, u_set, cfg.delta, cfg.eta, cfg.xi)
                            : const_uncertain_input_parts(a, u_set, cfg.delta, cfg.xi);
  if (strict && !input.target_met)
    throw CertificateFailure(
        "input solution: certificate target not met within the dimension cap");

  ReachResult result;
  result.horizon_padded =
      static_cast<double>(num_steps) * cfg.delta > cfg.t_f * (1.0 + 1e-12);
  result.time_point_sets.reserve(static_cast<size_t>(num_steps));
  result.time_interval_sets.reserve(static_cast<size_t>(num_steps));
  result.steps.reserve(static_cast<size_t>(num_steps));

  Zonotope carrier_h = x0;
  Zonotope carrier_b = std::move(input.carrier);
  IntervalVector e_h = IntervalVector::zero(n);  // separated carrier error
  IntervalVector e_b = std::move(input.err);
  if (!interval_mode) {
    // the generator channel carries the input error as generators so the
    // propagation maps it along with the carrier
    carrier_b = minkowski_sum(carrier_b, interval_to_zonotope(e_b));
    e_b = IntervalVector::zero(n);
  }
  IntervalVector p_box = IntervalVector::zero(n);   // accumulated input boxes
  IntervalVector p_cert = IntervalVector::zero(n);  // their certificate part

  auto step_mark = start_time;
  for (Index k = 1; k <= num_steps; ++k) {
    const HomogeneousStepResult step_h =
        hom_point_set(a, carrier_h, cfg.delta, carrier_policy);
    TimeIntervalParts tube_parts =
        time_interval_parts(a, carrier_h, step_h, cfg.delta, cfg.eta, strict);
    Zonotope tube = std::move(tube_parts.set);

    if (k > 1) {
      const HomogeneousStepResult step_b =
          hom_point_set(a, carrier_b, cfg.delta, carrier_policy);
      if (interval_mode) {
        e_b = interval_propagate(a, e_b, cfg.delta, box_policy) + step_b.err;
        carrier_b = step_b.mapped;
      } else {
        carrier_b = absorb_error(step_b, ErrorChannel::generators).set;
      }
    }
    p_box = p_box + interval_hull(carrier_b);
    p_cert = p_cert + e_b;
    const IntervalVector r_p = p_box + p_cert;

    if (interval_mode) {
      e_h = interval_propagate(a, e_h, cfg.delta, box_policy) + step_h.err;
      carrier_h = step_h.mapped;
      tube = minkowski_sum(tube, interval_to_zonotope(e_h));
    } else {
      carrier_h = absorb_error(step_h, ErrorChannel::generators).set;
    }

    Zonotope point_set = minkowski_sum(carrier_h, interval_to_zonotope(r_p));
    if (interval_mode)
      point_set = minkowski_sum(point_set, interval_to_zonotope(e_h));
    const Zonotope interval_set = minkowski_sum(tube, interval_to_zonotope(r_p));

    StepDiagnostics diag;
    diag.step = k;
    diag.t_lo = static_cast<double>(k - 1) * cfg.delta;
    diag.t_hi = static_cast<double>(k) * cfg.delta;
    diag.xi_carrier = step_h.xi;
    diag.xi_box = interval_mode ? box_policy.fixed : 0;
    diag.eps_rate = max_seed_rate(step_h);
    diag.point_generators = point_set.num_generators();
    diag.interval_generators = interval_set.num_generators();
    diag.cert_radius = e_h.radius() + p_cert.radius();
    diag.input_cert_radius = p_cert.radius();
    diag.curvature_radius = tube_parts.curvature.radius();
    const auto now = std::chrono::steady_clock::now();
    diag.wall_seconds = std::chrono::duration<double>(now - step_mark).count();
    step_mark = now;

    result.time_point_sets.push_back(std::move(point_set));
    result.time_interval_sets.push_back(std::move(interval_set));
    result.steps.push_back(std::move(diag));
  }
  return result;
}

ReachResult reach(const SparseMatrix& a, const SparseMatrix& b, const Zonotope& x0,
                  const Zonotope& u_set, const ReachConfig& cfg) {
  if (b.rows() != a.rows())
    throw std::invalid_argument("reach: input matrix row count mismatch");
  if (b.cols() != u_set.dim())
    throw std::invalid_argument("reach: input matrix column count mismatch");
  return reach(a, x0, linear_map(b, u_set), cfg);
}

SafetyReport check_safety(const ReachResult& result, const std::vector<Index>& coords,
                          const IntervalVector& unsafe) {
  if (unsafe.dim() != static_cast<Index>(coords.size()))
    throw std::invalid_argument(
        "check_safety: one unsafe interval per monitored coordinate");

  SafetyReport report;
  report.step_safe.reserve(result.time_interval_sets.size());
  for (size_t k = 0; k < result.time_interval_sets.size(); ++k) {
    const IntervalVector hull = interval_hull(result.time_interval_sets[k]);
    bool step_ok = true;
    for (size_t j = 0; j < coords.size(); ++j) {
      const Index c = coords[j];
      if (c < 0 || c >= hull.dim())
        throw std::out_of_range("check_safety: monitored coordinate out of range");
      const bool disjoint = hull.sup[c] < unsafe.inf[static_cast<Index>(j)] ||
                            unsafe.sup[static_cast<Index>(j)] < hull.inf[c];
      if (!disjoint) {
        step_ok = false;
        break;
      }
    }
    report.step_safe.push_back(step_ok);
    if (!step_ok && report.safe) {
      report.safe = false;
      report.first_violation_step = static_cast<Index>(k) + 1;
    }
  }
  return report;
}

} // namespace kreach
