#include "kreach/krylov.hpp"

#include <cmath>
#include <stdexcept>

#include "kreach/expm.hpp"

namespace kreach {

KrylovDecomposition arnoldi(const SparseMatrix& c, const Vec& seed,
                            Index xi_max, double breakdown_tol) {
  if (c.rows() != c.cols())
    throw std::invalid_argument("arnoldi: matrix must be square");
  if (seed.size() != c.rows())
    throw std::invalid_argument("arnoldi: seed dimension mismatch");
  if (xi_max < 1 || xi_max > c.rows())
    throw std::invalid_argument("arnoldi: xi_max out of range");

  KrylovDecomposition dec;
  dec.beta = seed.norm();
  if (dec.beta == 0.0)
    throw std::invalid_argument("arnoldi: zero seed");

  const Index n = c.rows();
  const double breakdown_level = breakdown_tol * c.two_norm_upper();

  Mat v(n, xi_max);
  Mat h = Mat::Zero(xi_max, xi_max);
  v.col(0) = seed / dec.beta;

  Index xi = xi_max;
  for (Index k = 0; k < xi_max; ++k) {
    Vec w = c.multiply(Vec(v.col(k)));
    const double w_before = w.norm();
    for (Index j = 0; j <= k; ++j) {
      const double hjk = w.dot(v.col(j));
      h(j, k) += hjk;
      w -= hjk * v.col(j);
    }
    // One extra Gram-Schmidt sweep when cancellation ate most of w; keeps
    // the basis orthonormal to near machine precision at large xi.
    if (w.norm() < 0.7 * w_before) {
      for (Index j = 0; j <= k; ++j) {
        const double hjk = w.dot(v.col(j));
        h(j, k) += hjk;
        w -= hjk * v.col(j);
      }
    }
    const double hk1 = w.norm();
    dec.h_residual = hk1;
    if (hk1 <= breakdown_level) {
      dec.happy_breakdown = true;
      xi = k + 1;
      break;
    }
    if (k + 1 < xi_max) {
      h(k + 1, k) = hk1;
      v.col(k + 1) = w / hk1;
    }
  }

  dec.xi = xi;
  dec.v = v.leftCols(xi);
  dec.h = h.topLeftCorner(xi, xi);
  return dec;
}

Vec exp_action(const KrylovDecomposition& dec, double t) {
  if (t < 0.0) throw std::invalid_argument("exp_action: negative time");
  const Mat eh = small_expm(dec.h, t);
  return dec.beta * (dec.v * eh.col(0));
}

} // namespace kreach
