#include "kreach/homogeneous.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kreach/errors.hpp"
#include "kreach/expm.hpp"
#include "kreach/parallel.hpp"

namespace kreach {

// On happy breakdown the Arnoldi relation is exact up to the terminal
// residual; the error integral then bounds the action error by
// |v| * h_residual * t * e^(max(b,0) t), which callers consume as rate * t.
// max(1, t) keeps the bound valid beyond unit horizons.
double effective_eps_rate(const KrylovDecomposition& dec,
                          const ErrorCertificate& cert, double t) {
  if (dec.happy_breakdown)
    return dec.h_residual * std::exp(std::max(cert.bounds.b, 0.0) * std::max(1.0, t));
  return certified_rate(cert, t);
}

namespace {

SeedPropagation propagate_seed(const SparseMatrix& a, const Vec& seed, Index xi,
                               double breakdown_tol, const ErrorCertificate& cert,
                               double t) {
  SeedPropagation s;
  s.cert = cert;
  s.seed_norm = seed.norm();
  if (s.seed_norm == 0.0) {
    s.zero = true;
    return s;
  }
  s.dec = arnoldi(a, seed, xi, breakdown_tol);
  s.eps_norm = effective_eps_rate(s.dec, cert, t);
  return s;
}

} // namespace

Index resolve_xi(const SparseMatrix& a, double t_horizon, const XiPolicy& policy) {
  const Index n = a.rows();
  if (policy.fixed > 0) return std::min(policy.fixed, n);
  return choose_dimension(a, policy.target_eps, t_horizon, policy.cap).xi;
}

std::pair<Vec, IntervalVector> hom_point_single(const SparseMatrix& a, const Vec& x0,
                                                double t, const XiPolicy& policy) {
  if (a.rows() != a.cols() || a.rows() != x0.size())
    throw std::invalid_argument("hom_point_single: dimension mismatch");
  if (t < 0.0) throw std::invalid_argument("hom_point_single: negative time");

  const Index n = a.rows();
  if (x0.norm() == 0.0)
    return {Vec::Zero(n), IntervalVector::zero(n)};

  const Index xi = resolve_xi(a, t, policy);
  const ErrorCertificate cert = epsilon_norm(a, xi);
  const SeedPropagation s =
      propagate_seed(a, x0, xi, policy.breakdown_tol, cert, t);
  const Vec x_hat = exp_action(s.dec, t);
  const double radius = s.seed_norm * s.eps_norm * t;
  return {x_hat, IntervalVector::symmetric(Vec::Constant(n, radius))};
}

HomogeneousStepResult hom_point_set(const SparseMatrix& a, const Zonotope& z,
                                    double t, const XiPolicy& policy) {
  if (a.rows() != a.cols() || a.rows() != z.dim())
    throw std::invalid_argument("hom_point_set: dimension mismatch");
  if (t < 0.0) throw std::invalid_argument("hom_point_set: negative time");

  const Index n = a.rows();
  const Index p = z.num_generators();
  const Index xi = resolve_xi(a, t, policy);
  const ErrorCertificate cert = epsilon_norm(a, xi);

  HomogeneousStepResult out;
  out.t = t;
  out.xi = xi;
  out.per_seed.resize(static_cast<size_t>(p) + 1);

  parallel_for(p + 1, [&](Index i) {
    const Vec seed = (i == 0) ? z.center() : Vec(z.generators().col(i - 1));
    out.per_seed[static_cast<size_t>(i)] =
        propagate_seed(a, seed, xi, policy.breakdown_tol, cert, t);
  });

  Vec center = Vec::Zero(n);
  Mat gens = Mat::Zero(n, p);
  double err_radius = 0.0;

  // The reduced exponentials share t, so each seed's action is evaluated
  // once here (serial: the small solves are cheap relative to Arnoldi).
  for (Index i = 0; i <= p; ++i) {
    const SeedPropagation& s = out.per_seed[static_cast<size_t>(i)];
    if (s.zero) continue;
    const Vec image = exp_action(s.dec, t);
    if (i == 0)
      center = image;
    else
      gens.col(i - 1) = image;
    err_radius += s.seed_norm * s.eps_norm * t;
  }

  out.mapped = Zonotope(std::move(center), std::move(gens));
  out.err = IntervalVector::symmetric(Vec::Constant(n, err_radius));
  return out;
}

AbsorbedError absorb_error(const HomogeneousStepResult& result, ErrorChannel mode) {
  AbsorbedError out;
  if (mode == ErrorChannel::interval) {
    out.set = result.mapped;
    out.err = result.err;
    return out;
  }
  out.set = minkowski_sum(result.mapped, interval_to_zonotope(result.err));
  out.err = IntervalVector::zero(result.mapped.dim());
  return out;
}

IntervalVector interval_propagate(const SparseMatrix& a, const IntervalVector& iv,
                                  double t, const XiPolicy& policy) {
  if (a.rows() != a.cols() || a.rows() != iv.dim())
    throw std::invalid_argument("interval_propagate: dimension mismatch");
  if (t < 0.0) throw std::invalid_argument("interval_propagate: negative time");

  const Index n = a.rows();
  const Vec b_c = iv.midpoint();
  const Vec b_delta = iv.radius();

  Vec center = Vec::Zero(n);
  Vec mu = Vec::Zero(n);

  double center_eps_term = 0.0;
  if (b_c.norm() > 0.0) {
    const Index xi = resolve_xi(a, t, policy);
    const ErrorCertificate cert = epsilon_norm(a, xi);
    const SeedPropagation s =
        propagate_seed(a, b_c, xi, policy.breakdown_tol, cert, t);
    center = exp_action(s.dec, t);
    center_eps_term = s.seed_norm * s.eps_norm * t;
  }

  double radius_eps_term = 0.0;
  if (b_delta.norm() > 0.0) {
    const SparseMatrix a_abs = a.elementwise_abs();
    const Index xi_bar = resolve_xi(a_abs, t, policy);
    const ErrorCertificate cert_bar = epsilon_norm(a_abs, xi_bar);
    const SeedPropagation s =
        propagate_seed(a_abs, b_delta, xi_bar, policy.breakdown_tol, cert_bar, t);
    // e^(|A| t) maps nonnegative vectors to nonnegative vectors; rounding in
    // the reduced evaluation can still produce tiny negative components,
    // which are flipped to keep the radius valid.
    mu = exp_action(s.dec, t).cwiseAbs();
    radius_eps_term = s.seed_norm * s.eps_norm * t;
  }

  mu.array() += radius_eps_term + center_eps_term;
  return IntervalVector(center - mu, center + mu);
}

Index taylor_order(double norm_h_delta, const EtaPolicy& policy) {
  if (!(policy.eps_max > 0.0) || policy.cap < 2)
    throw std::invalid_argument("taylor_order: invalid eta policy");
  for (Index eta = 2; eta <= policy.cap; ++eta) {
    if (norm_h_delta / (static_cast<double>(eta) + 2.0) < policy.eps_max)
      return eta;
  }
  throw CertificateFailure(
      "taylor_order: no admissible Taylor order below the cap; "
      "reduce the time increment delta");
}

double taylor_remainder(double norm_h_delta, Index eta) {
  if (norm_h_delta == 0.0) return 0.0;
  const double eps = norm_h_delta / (static_cast<double>(eta) + 2.0);
  const double log_phi = (static_cast<double>(eta) + 1.0) * std::log(norm_h_delta) -
                         std::lgamma(static_cast<double>(eta) + 2.0);
  return std::exp(log_phi) / (1.0 - eps);
}

namespace {

double chord_coefficient(Index i, double delta) {
  const double di = static_cast<double>(i);
  return (std::pow(di, -di / (di - 1.0)) - std::pow(di, -1.0 / (di - 1.0))) *
         std::pow(delta, di);
}

} // namespace

IntervalMatrix correction_matrix(const Mat& h, double delta, const EtaPolicy& policy) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("correction_matrix: matrix must be square");
  if (delta < 0.0) throw std::invalid_argument("correction_matrix: negative delta");

  const Index xi = h.rows();
  const double norm_h = xi > 0 ? h.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  const Index eta = taylor_order(norm_h * delta, policy);
  const double phi = taylor_remainder(norm_h * delta, eta);

  Mat center = Mat::Zero(xi, xi);
  Mat radius = Mat::Zero(xi, xi);
  Mat power = h;  // H^i / i!, starting below at i = 2
  for (Index i = 2; i <= eta; ++i) {
    power = (power * h) / static_cast<double>(i);
    const double lo = chord_coefficient(i, delta);  // interval [lo, 0], lo <= 0
    center += (0.5 * lo) * power;
    radius += (-0.5 * lo) * power.cwiseAbs();
  }
  radius.array() += phi;
  return IntervalMatrix(std::move(center), std::move(radius));
}

std::pair<Vec, Vec> correction_column(const Mat& h, double delta,
                                      const EtaPolicy& policy) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("correction_column: matrix must be square");
  const Index xi = h.rows();
  const double norm_h = xi > 0 ? h.cwiseAbs().rowwise().sum().maxCoeff() : 0.0;
  const Index eta = taylor_order(norm_h * delta, policy);
  const double phi = taylor_remainder(norm_h * delta, eta);

  Vec center = Vec::Zero(xi);
  Vec radius = Vec::Zero(xi);
  Vec power = Vec::Zero(xi);  // H^i e_1 / i!
  if (xi > 0) power[0] = 1.0;
  power = h * power;  // i = 1
  for (Index i = 2; i <= eta; ++i) {
    power = (h * power) / static_cast<double>(i);
    const double lo = chord_coefficient(i, delta);
    center += (0.5 * lo) * power;
    radius += (-0.5 * lo) * power.cwiseAbs();
  }
  radius.array() += phi;
  return {std::move(center), std::move(radius)};
}

TimeIntervalParts time_interval_parts(const SparseMatrix& a, const Zonotope& z,
                                      const HomogeneousStepResult& step_result_at_delta,
                                      double delta, const EtaPolicy& policy,
                                      bool strict) {
  if (a.rows() != z.dim())
    throw std::invalid_argument("time_interval_set: dimension mismatch");
  if (step_result_at_delta.mapped.dim() != z.dim())
    throw std::invalid_argument("time_interval_set: step result dimension mismatch");

  const Index n = z.dim();
  const Zonotope mapped_full =
      absorb_error(step_result_at_delta, ErrorChannel::generators).set;
  Zonotope hull = convex_hull_enclosure(z, mapped_full);

  // Curvature term: per-seed lifts beta V (F e_1) collapsed into one box.
  // The center seed contributes a signed shift; a generator's segment is
  // symmetric, so its lift folds into the radius wholesale.
  Vec n_center = Vec::Zero(n);
  Vec n_radius = Vec::Zero(n);
  for (size_t idx = 0; idx < step_result_at_delta.per_seed.size(); ++idx) {
    const SeedPropagation& s = step_result_at_delta.per_seed[idx];
    if (s.zero) continue;
    const auto [f_center, f_radius] = correction_column(s.dec.h, delta, policy);
    const Vec lift_center = s.dec.beta * (s.dec.v * f_center);
    const Vec lift_radius = s.dec.beta * (s.dec.v.cwiseAbs() * f_radius);
    if (idx == 0) {
      n_center += lift_center;
      n_radius += lift_radius;
    } else {
      n_radius += lift_center.cwiseAbs() + lift_radius;
    }
  }

  TimeIntervalParts parts;
  parts.curvature = IntervalVector(n_center - n_radius, n_center + n_radius);
  parts.set = minkowski_sum(hull, interval_to_zonotope(parts.curvature));
  if (strict)
    parts.set = minkowski_sum(parts.set,
                              interval_to_zonotope(step_result_at_delta.err));
  return parts;
}

Zonotope time_interval_set(const SparseMatrix& a, const Zonotope& z,
                           const HomogeneousStepResult& step_result_at_delta,
                           double delta, const EtaPolicy& policy, bool strict) {
  return time_interval_parts(a, z, step_result_at_delta, delta, policy, strict).set;
}

} // namespace kreach
