#include "kreach/input_solution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "kreach/parallel.hpp"

namespace kreach {

AugmentedSystem augment(const SparseMatrix& a, const Vec& u) {
  if (a.rows() != a.cols() || a.rows() != u.size())
    throw std::invalid_argument("augment: dimension mismatch");
  const Index n = a.rows();
  std::vector<Triplet> entries = a.to_triplets();
  for (Index i = 0; i < n; ++i)
    if (u[i] != 0.0) entries.push_back({i, n, u[i]});
  AugmentedSystem out;
  out.a_tilde = SparseMatrix::from_triplets(n + 1, n + 1, entries);
  out.seed = Vec::Zero(n + 1);
  out.seed[n] = 1.0;
  return out;
}

namespace {

// One input column pipeline: augmented matrix, reduced decomposition, and
// the breakdown-aware certificate rate at horizon t. The pipeline runs on
// the unit-normalized input. The integral is linear in u, so results and
// error radii are rescaled by `scale` afterwards; this keeps the augmented
// field of values (and hence the certificate) independent of the input
// magnitude.
struct ColumnPipeline {
  KrylovDecomposition dec;
  double scale = 0.0;     // ||u||, applied to lifted results and radii
  double eps_rate = 0.0;  // certificate rate of the normalized column
  double h_norm_bound = 0.0;  // upper bound on ||H||_2, basis-independent
  bool zero = false;
  bool target_met = true;
};

ColumnPipeline run_column(const SparseMatrix& a, const Vec& u, double t_horizon,
                          const XiPolicy& policy) {
  ColumnPipeline out;
  out.scale = u.norm();
  if (out.scale == 0.0) {
    out.zero = true;
    return out;
  }
  const AugmentedSystem aug = augment(a, Vec(u / out.scale));
  Index xi;
  if (policy.fixed > 0) {
    xi = std::min(policy.fixed, aug.a_tilde.rows());
  } else {
    const ChosenDimension chosen = choose_dimension(aug.a_tilde, policy.target_eps,
                                                    t_horizon, policy.cap);
    xi = chosen.xi;
    out.target_met = chosen.target_met;
  }
  const ErrorCertificate cert = epsilon_norm(aug.a_tilde, xi);
  out.dec = arnoldi(aug.a_tilde, aug.seed, xi, policy.breakdown_tol);
  out.eps_rate = effective_eps_rate(out.dec, cert, t_horizon);
  // Taylor-tail bound argument. ||H||_2 <= ||A~||_2 because the Arnoldi basis
  // is orthonormal; the bound is taken on the augmented matrix rather than on
  // the computed H so that it depends only on the normalized column. (Near a
  // breakdown the trailing basis vector is dominated by cancellation noise,
  // which would make a norm of H itself irreproducible and break the exact
  // linearity of the enclosure in the input set.)
  out.h_norm_bound = aug.a_tilde.two_norm_upper();
  return out;
}

} // namespace

std::pair<Vec, IntervalVector> const_input_point(const SparseMatrix& a, const Vec& u,
                                                 double delta,
                                                 const XiPolicy& policy) {
  if (delta < 0.0) throw std::invalid_argument("const_input_point: negative delta");
  const Index n = a.rows();
  const ColumnPipeline col = run_column(a, u, delta, policy);
  if (col.zero) return {Vec::Zero(n), IntervalVector::zero(n)};
  const Vec x_full = col.scale * exp_action(col.dec, delta);
  return {x_full.head(n), IntervalVector::symmetric(
                              Vec::Constant(n, col.scale * col.eps_rate * delta))};
}

std::pair<Vec, IntervalVector> partial_input_point(const SparseMatrix& a, const Vec& u,
                                                   double t0, double te, double delta,
                                                   const XiPolicy& policy) {
  if (!(0.0 <= t0 && t0 <= te && te <= delta))
    throw std::invalid_argument("partial_input_point: need 0 <= t0 <= te <= delta");
  const Index n = a.rows();
  if (t0 == te) return {Vec::Zero(n), IntervalVector::zero(n)};
  const ColumnPipeline col = run_column(a, u, delta, policy);
  if (col.zero) return {Vec::Zero(n), IntervalVector::zero(n)};
  const Vec x_full =
      col.scale * (exp_action(col.dec, delta - t0) - exp_action(col.dec, delta - te));
  return {x_full.head(n),
          IntervalVector::symmetric(
              Vec::Constant(n, col.scale * col.eps_rate * (te - t0)))};
}

InputSetParts const_uncertain_input_parts(const SparseMatrix& a, const Zonotope& u_set,
                                          double delta, const XiPolicy& policy) {
  if (a.rows() != a.cols() || a.rows() != u_set.dim())
    throw std::invalid_argument("const_uncertain_input_parts: dimension mismatch");
  if (delta < 0.0)
    throw std::invalid_argument("const_uncertain_input_parts: negative delta");

  const Index n = a.rows();
  const Index q = u_set.num_generators();

  std::vector<ColumnPipeline> cols(static_cast<size_t>(q) + 1);
  parallel_for(q + 1, [&](Index i) {
    const Vec u = (i == 0) ? u_set.center() : Vec(u_set.generators().col(i - 1));
    cols[static_cast<size_t>(i)] = run_column(a, u, delta, policy);
  });

  Vec center = Vec::Zero(n);
  Mat gens = Mat::Zero(n, q);
  double err_radius = 0.0;
  InputSetParts out;
  for (Index i = 0; i <= q; ++i) {
    const ColumnPipeline& col = cols[static_cast<size_t>(i)];
    if (col.zero) continue;
    out.target_met = out.target_met && col.target_met;
    const Vec image = col.scale * exp_action(col.dec, delta).head(n);
    if (i == 0)
      center = image;
    else
      gens.col(i - 1) = image;
    err_radius += col.scale * col.eps_rate * delta;
  }

  out.carrier = Zonotope(std::move(center), std::move(gens));
  out.err = IntervalVector::symmetric(Vec::Constant(n, err_radius));
  return out;
}

Zonotope const_uncertain_input_set(const SparseMatrix& a, const Zonotope& u_set,
                                   double delta, const XiPolicy& policy) {
  const InputSetParts parts = const_uncertain_input_parts(a, u_set, delta, policy);
  return minkowski_sum(parts.carrier, interval_to_zonotope(parts.err));
}

InputSetParts varying_input_parts(const SparseMatrix& a, const Zonotope& u_set,
                                  double delta, const EtaPolicy& eta_policy,
                                  const XiPolicy& xi_policy) {
  if (a.rows() != a.cols() || a.rows() != u_set.dim())
    throw std::invalid_argument("varying_input_parts: dimension mismatch");
  if (delta < 0.0)
    throw std::invalid_argument("varying_input_parts: negative delta");

  const Index n = a.rows();
  const Index q = u_set.num_generators();

  std::vector<ColumnPipeline> cols(static_cast<size_t>(q) + 1);
  parallel_for(q + 1, [&](Index i) {
    const Vec u = (i == 0) ? u_set.center() : Vec(u_set.generators().col(i - 1));
    cols[static_cast<size_t>(i)] = run_column(a, u, delta, xi_policy);
  });

  // One Taylor order serves every column: selected on the largest reduced
  // norm, so the contraction condition holds columnwise; each remainder is
  // still evaluated with its own norm.
  double max_h_delta = 0.0;
  for (const ColumnPipeline& col : cols)
    if (!col.zero) max_h_delta = std::max(max_h_delta, col.h_norm_bound * delta);
  const Index eta = taylor_order(max_h_delta, eta_policy);

  Vec center = Vec::Zero(n);
  Mat gens = Mat::Zero(n, q * eta);
  double err_radius = 0.0;
  InputSetParts out;

  for (Index i = 0; i <= q; ++i) {
    const ColumnPipeline& col = cols[static_cast<size_t>(i)];
    if (col.zero) continue;
    out.target_met = out.target_met && col.target_met;

    // w_j = H^j e_1 delta^j / j!, lifted through V and projected to the
    // first n coordinates; j-th term feeds generator slot (j-1)*q + i-1.
    const Index xi = col.dec.xi;
    Vec w = Vec::Zero(xi);
    w[0] = 1.0;
    for (Index j = 1; j <= eta; ++j) {
      w = (delta / static_cast<double>(j)) * (col.dec.h * w);
      const Vec lift = col.scale * (col.dec.v * w).head(n);
      if (i == 0)
        center += lift;
      else
        gens.col((j - 1) * q + (i - 1)) = lift;
    }

    err_radius += col.scale * col.eps_rate * delta;
    err_radius += col.scale * taylor_remainder(col.h_norm_bound * delta, eta);
  }

  out.carrier = Zonotope(std::move(center), std::move(gens));
  out.err = IntervalVector::symmetric(Vec::Constant(n, err_radius));
  return out;
}

Zonotope varying_input_set(const SparseMatrix& a, const Zonotope& u_set, double delta,
                           const EtaPolicy& eta_policy, const XiPolicy& xi_policy) {
  const InputSetParts parts =
      varying_input_parts(a, u_set, delta, eta_policy, xi_policy);
  return minkowski_sum(parts.carrier, interval_to_zonotope(parts.err));
}

} // namespace kreach
