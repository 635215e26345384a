#include "kreach/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>

namespace kreach {

Zonotope::Zonotope(Vec center, Mat generators)
    : center_(std::move(center)), generators_(std::move(generators)) {
  if (generators_.size() == 0 && generators_.rows() != center_.size())
    generators_ = Mat::Zero(center_.size(), 0);
  if (generators_.rows() != center_.size())
    throw std::invalid_argument("Zonotope: generator rows must match center dimension");
  if (!center_.allFinite() || !generators_.allFinite())
    throw std::invalid_argument("Zonotope: non-finite entries");
}

Zonotope Zonotope::point(Vec center) {
  const Index n = center.size();
  return Zonotope(std::move(center), Mat::Zero(n, 0));
}

Zonotope Zonotope::box(Vec center, const Vec& radius) {
  const Index n = center.size();
  if (radius.size() != n)
    throw std::invalid_argument("Zonotope::box: radius dimension mismatch");
  if ((radius.array() < 0.0).any())
    throw std::invalid_argument("Zonotope::box: negative radius");
  Mat g = Mat::Zero(n, n);
  g.diagonal() = radius;
  return Zonotope(std::move(center), std::move(g));
}

double Zonotope::order() const {
  if (dim() == 0) return 0.0;
  return static_cast<double>(num_generators()) / static_cast<double>(dim());
}

Zonotope minkowski_sum(const Zonotope& z1, const Zonotope& z2) {
  if (z1.dim() != z2.dim())
    throw std::invalid_argument("minkowski_sum: dimension mismatch");
  Mat g(z1.dim(), z1.num_generators() + z2.num_generators());
  g.leftCols(z1.num_generators()) = z1.generators();
  g.rightCols(z2.num_generators()) = z2.generators();
  return Zonotope(z1.center() + z2.center(), std::move(g));
}

Zonotope linear_map(const Mat& m, const Zonotope& z) {
  if (m.cols() != z.dim())
    throw std::invalid_argument("linear_map: dimension mismatch");
  return Zonotope(m * z.center(), m * z.generators());
}

Zonotope linear_map(const SparseMatrix& m, const Zonotope& z) {
  if (m.cols() != z.dim())
    throw std::invalid_argument("linear_map: dimension mismatch");
  return Zonotope(m.multiply(z.center()), m.multiply(z.generators()));
}

Zonotope convex_hull_enclosure(const Zonotope& z1, const Zonotope& z2) {
  if (z1.dim() != z2.dim())
    throw std::invalid_argument("convex_hull_enclosure: dimension mismatch");
  const Index n = z1.dim();
  const Index p = std::max(z1.num_generators(), z2.num_generators());
  Mat g = Mat::Zero(n, p);
  Mat h = Mat::Zero(n, p);
  g.leftCols(z1.num_generators()) = z1.generators();
  h.leftCols(z2.num_generators()) = z2.generators();

  Mat out(n, 2 * p + 1);
  out.leftCols(p) = 0.5 * (g + h);
  out.col(p) = 0.5 * (z1.center() - z2.center());
  out.rightCols(p) = 0.5 * (g - h);
  return Zonotope(0.5 * (z1.center() + z2.center()), std::move(out));
}

Zonotope interval_matrix_map(const IntervalMatrix& m, const Zonotope& z) {
  if (m.cols() != z.dim())
    throw std::invalid_argument("interval_matrix_map: dimension mismatch");
  const Vec absvec = z.center().cwiseAbs() + z.generators().cwiseAbs().rowwise().sum();
  const Vec h = m.radius * absvec;

  Mat g(m.rows(), z.num_generators() + m.rows());
  g.leftCols(z.num_generators()) = m.center * z.generators();
  g.rightCols(m.rows()).setZero();
  g.rightCols(m.rows()).diagonal() = h;
  return Zonotope(m.center * z.center(), std::move(g));
}

Zonotope box_enclosure(const Zonotope& z) {
  const Vec radius = z.generators().cwiseAbs().rowwise().sum();
  return Zonotope::box(z.center(), radius);
}

IntervalVector interval_hull(const Zonotope& z) {
  const Vec radius = z.generators().cwiseAbs().rowwise().sum();
  return IntervalVector(z.center() - radius, z.center() + radius);
}

double support(const Zonotope& z, const Vec& direction) {
  if (direction.size() != z.dim())
    throw std::invalid_argument("support: dimension mismatch");
  return direction.dot(z.center()) +
         (z.generators().transpose() * direction).cwiseAbs().sum();
}

Zonotope interval_to_zonotope(const IntervalVector& iv) {
  const Vec mid = iv.midpoint();
  const Vec rad = iv.radius();
  Index count = 0;
  for (Index i = 0; i < rad.size(); ++i)
    if (rad[i] > 0.0) ++count;
  Mat g = Mat::Zero(iv.dim(), count);
  Index j = 0;
  for (Index i = 0; i < rad.size(); ++i) {
    if (rad[i] > 0.0) {
      g(i, j) = rad[i];
      ++j;
    }
  }
  return Zonotope(mid, std::move(g));
}

namespace {

// Bounded-variable least squares: minimize |g*beta - y|_2 over beta in
// [-1,1]^p, active-set method. Columns with zero norm are pinned at zero.
// Returns the best coefficient vector found.
class Bvls {
public:
  Bvls(const Mat& g, const Mat& gram) : g_(g), gram_(gram), p_(g.cols()) {}

  Vec solve(const Vec& y, const Vec& warm) {
    const double col_scale = std::max(1.0, gram_.diagonal().maxCoeff());
    const double kkt_tol = 1e-13 * col_scale * std::max(1.0, y.norm());

    std::vector<int> state(static_cast<size_t>(p_));  // -1 lower, 0 free, +1 upper
    Vec beta(p_);
    std::vector<bool> usable(static_cast<size_t>(p_));
    for (Index j = 0; j < p_; ++j) {
      usable[static_cast<size_t>(j)] = gram_(j, j) > 0.0;
      double b = usable[static_cast<size_t>(j)] ? std::clamp(warm[j], -1.0, 1.0) : 0.0;
      beta[j] = b;
      state[static_cast<size_t>(j)] =
          (b >= 1.0) ? 1 : (b <= -1.0 ? -1 : 0);
    }

    Vec best = beta;
    double best_obj = (g_ * beta - y).squaredNorm();

    const Index max_outer = 30 * p_ + 100;
    for (Index outer = 0; outer < max_outer; ++outer) {
      // Solve the equality-constrained problem on the current free set.
      if (!solve_free_set(y, state, beta)) break;

      const double obj = (g_ * beta - y).squaredNorm();
      if (obj < best_obj) {
        best_obj = obj;
        best = beta;
      }

      // KKT: w = g^T (y - g beta); at optimum free vars have w = 0, vars at
      // +1 need w >= 0, vars at -1 need w <= 0.
      const Vec w = g_.transpose() * (y - g_ * beta);
      Index worst = -1;
      double worst_viol = kkt_tol;
      for (Index j = 0; j < p_; ++j) {
        if (!usable[static_cast<size_t>(j)]) continue;
        const int s = state[static_cast<size_t>(j)];
        double viol = 0.0;
        if (s == 1) viol = -w[j];
        else if (s == -1) viol = w[j];
        if (viol > worst_viol) {
          worst_viol = viol;
          worst = j;
        }
      }
      if (worst < 0) break;  // KKT satisfied
      state[static_cast<size_t>(worst)] = 0;
    }
    return best;
  }

private:
  // Least squares over free variables with bound variables fixed; clips the
  // free solution back into the box by moving blocking variables to their
  // bounds and re-solving until the free set is interior-feasible.
  bool solve_free_set(const Vec& y, std::vector<int>& state, Vec& beta) {
    for (Index inner = 0; inner <= p_; ++inner) {
      std::vector<Index> free_idx;
      for (Index j = 0; j < p_; ++j)
        if (state[static_cast<size_t>(j)] == 0 && gram_(j, j) > 0.0)
          free_idx.push_back(j);
      for (Index j = 0; j < p_; ++j)
        if (state[static_cast<size_t>(j)] != 0)
          beta[j] = static_cast<double>(state[static_cast<size_t>(j)]);
        else if (gram_(j, j) <= 0.0)
          beta[j] = 0.0;

      if (free_idx.empty()) return true;
      const Index f = static_cast<Index>(free_idx.size());

      Mat a(f, f);
      Vec rhs(f);
      const Vec gty = g_.transpose() * y;
      for (Index r = 0; r < f; ++r) {
        rhs[r] = gty[free_idx[static_cast<size_t>(r)]];
        for (Index c = 0; c < f; ++c)
          a(r, c) = gram_(free_idx[static_cast<size_t>(r)], free_idx[static_cast<size_t>(c)]);
      }
      // subtract the contribution of variables held at their bounds
      for (Index j = 0; j < p_; ++j) {
        if (state[static_cast<size_t>(j)] == 0) continue;
        const double bj = static_cast<double>(state[static_cast<size_t>(j)]);
        for (Index r = 0; r < f; ++r)
          rhs[r] -= gram_(free_idx[static_cast<size_t>(r)], j) * bj;
      }
      const double ridge = 1e-13 * std::max(1.0, a.diagonal().maxCoeff());
      a.diagonal().array() += ridge;
      Vec sol = a.ldlt().solve(rhs);

      // step from current free values toward sol, stopping at the first bound
      double alpha = 1.0;
      Index blocking = -1;
      for (Index r = 0; r < f; ++r) {
        const Index j = free_idx[static_cast<size_t>(r)];
        const double from = beta[j];
        const double to = sol[r];
        if (to > 1.0 || to < -1.0) {
          const double bound = to > 1.0 ? 1.0 : -1.0;
          const double denom = to - from;
          const double step = std::abs(denom) < 1e-300 ? 0.0 : (bound - from) / denom;
          if (step < alpha) {
            alpha = step;
            blocking = j;
          }
        }
      }
      if (blocking < 0) {
        for (Index r = 0; r < f; ++r) beta[free_idx[static_cast<size_t>(r)]] = sol[r];
        return true;
      }
      for (Index r = 0; r < f; ++r) {
        const Index j = free_idx[static_cast<size_t>(r)];
        beta[j] = std::clamp(beta[j] + alpha * (sol[r] - beta[j]), -1.0, 1.0);
      }
      beta[blocking] = beta[blocking] > 0.0 ? 1.0 : -1.0;
      state[static_cast<size_t>(blocking)] = beta[blocking] > 0.0 ? 1 : -1;
    }
    return true;
  }

  const Mat& g_;
  const Mat& gram_;
  Index p_;
};

} // namespace

bool contains_point(const Zonotope& z, const Vec& x, double tol) {
  if (x.size() != z.dim())
    throw std::invalid_argument("contains_point: dimension mismatch");
  if (tol < 0.0) throw std::invalid_argument("contains_point: negative tolerance");

  const Vec y = x - z.center();
  const Index p = z.num_generators();
  if (p == 0) return y.norm() <= tol;

  // cheap interval-hull rejection
  const Vec hull_radius = z.generators().cwiseAbs().rowwise().sum();
  if ((y.cwiseAbs().array() > hull_radius.array() + tol).any()) return false;

  const Mat& g = z.generators();

  // Sets assembled from interval error channels carry many axis-aligned
  // generators. Splitting those out leaves a small dense block: a least
  // squares fit on that block whose residual fits inside the axis box (up
  // to tol in the 2-norm) certifies containment at a fraction of the cost
  // of the full solve below. The split is only a sufficient check; on
  // failure the general path still decides.
  Index axis_count = 0;
  for (Index j = 0; j < p; ++j) {
    Index nz = 0;
    for (Index i = 0; i < y.size() && nz < 2; ++i)
      if (g(i, j) != 0.0) ++nz;
    if (nz <= 1) ++axis_count;
  }
  if (axis_count > 0) {
    const Index k = p - axis_count;
    Vec axis_radius = Vec::Zero(y.size());
    Mat dense(y.size(), k);
    Index next = 0;
    for (Index j = 0; j < p; ++j) {
      Index nz = 0;
      Index row = 0;
      for (Index i = 0; i < y.size() && nz < 2; ++i)
        if (g(i, j) != 0.0) { ++nz; row = i; }
      if (nz <= 1) {
        if (nz == 1) axis_radius[row] += std::abs(g(row, j));
      } else {
        dense.col(next++) = g.col(j);
      }
    }
    Vec res = y;
    if (k > 0) {
      const Mat gram = dense.transpose() * dense;
      Bvls small(dense, gram);
      const Vec beta = small.solve(y, Vec::Zero(k));
      res -= dense * beta;
    }
    const Vec leftover = (res.cwiseAbs() - axis_radius).cwiseMax(0.0);
    if (leftover.norm() <= tol) return true;
  }

  // Minimum-norm coefficients via the (regularized) normal equations of
  // g g^T; when they already land inside the box the point is certified
  // contained without running the active-set solve.
  Mat ggt = g * g.transpose();
  const double ridge = 1e-13 * std::max(1.0, ggt.diagonal().maxCoeff());
  ggt.diagonal().array() += ridge;
  const Vec lam = ggt.ldlt().solve(y);
  const Vec beta_mn = g.transpose() * lam;
  if (beta_mn.cwiseAbs().maxCoeff() <= 1.0 && (y - g * beta_mn).norm() <= tol)
    return true;

  const Mat gram = g.transpose() * g;
  Bvls solver(g, gram);
  const Vec beta = solver.solve(y, beta_mn);
  return (y - g * beta).norm() <= tol;
}

} // namespace kreach
