#pragma once

// Shared generators and independent reference computations for the test
// suites. Everything here is deliberately simple and self-contained: the
// exponential oracle is a long-double Taylor series (no Pade, no library
// call), the quadrature oracle is adaptive Simpson, and set membership is
// sampled with an explicit coefficient draw.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "kreach/sparse.hpp"
#include "kreach/zonotope.hpp"

namespace testsupport {

using kreach::Index;
using kreach::Mat;
using kreach::SparseMatrix;
using kreach::Triplet;
using kreach::Vec;
using kreach::Zonotope;

using MatLd = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// e^(A t) summed as a 200-term Taylor series in long double after scaling
// |A t| below 1/4, then repeated squaring. Independent of the library's
// Pade-based routines.
inline Mat taylor_expm(const Mat& a, double t = 1.0) {
  const Index n = a.rows();
  MatLd at = a.cast<long double>() * static_cast<long double>(t);
  int squarings = 0;
  long double norm = 0.0L;
  for (Index i = 0; i < n; ++i) {
    long double row = 0.0L;
    for (Index j = 0; j < n; ++j) row += std::abs(at(i, j));
    norm = std::max(norm, row);
  }
  while (norm > 0.25L) {
    norm *= 0.5L;
    ++squarings;
  }
  at /= std::pow(2.0L, squarings);
  MatLd sum = MatLd::Identity(n, n);
  MatLd term = MatLd::Identity(n, n);
  for (int k = 1; k <= 200; ++k) {
    term = term * at / static_cast<long double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum.cast<double>();
}

// Adaptive Simpson quadrature to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int depth = 30) {
  const double c = 0.5 * (a + b);
  const double fa = f(a), fb = f(b), fc = f(c);
  std::function<double(double, double, double, double, double, double, double, int)>
      rec = [&](double x0, double x2, double f0, double f1, double f2,
                double whole, double eps, int d) -> double {
    const double x1l = 0.5 * (x0 + 0.5 * (x0 + x2));
    const double x1r = 0.5 * (0.5 * (x0 + x2) + x2);
    const double fl = f(x1l), fr = f(x1r);
    const double xm = 0.5 * (x0 + x2);
    const double left = (xm - x0) / 6.0 * (f0 + 4.0 * fl + f1);
    const double right = (x2 - xm) / 6.0 * (f1 + 4.0 * fr + f2);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(x0, xm, f0, fl, f1, left, 0.5 * eps, d - 1) +
           rec(xm, x2, f1, fr, f2, right, 0.5 * eps, d - 1);
  };
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
  return rec(a, b, fa, fc, fb, whole, tol, depth);
}

// Sparse matrix with ~density random off-diagonal entries in [-1,1] and a
// diagonal pushed left of the off-diagonal mass, so the system is stable
// and diagonally dominant by `margin`.
inline SparseMatrix random_stable_sparse(Index n, double density, double margin,
                                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<Triplet> triplets;
  std::vector<double> row_sum(static_cast<size_t>(n), 0.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      if (coin(rng) < density) {
        const double v = unit(rng);
        triplets.push_back({i, j, v});
        row_sum[static_cast<size_t>(i)] += std::abs(v);
      }
    }
  }
  for (Index i = 0; i < n; ++i) {
    triplets.push_back({i, i, -(margin + row_sum[static_cast<size_t>(i)])});
  }
  return SparseMatrix::from_triplets(n, n, std::move(triplets));
}

inline Vec random_vec(Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec v(n);
  for (Index i = 0; i < n; ++i) v[i] = scale * unit(rng);
  return v;
}

inline Zonotope random_zonotope(Index dim, Index generators, std::mt19937_64& rng,
                                double scale = 1.0) {
  Mat g(dim, generators);
  for (Index j = 0; j < generators; ++j) g.col(j) = random_vec(dim, rng, scale);
  return Zonotope(random_vec(dim, rng, scale), std::move(g));
}

// Independent sample of a zonotope member (explicit coefficient draw, no
// library call).
inline Vec sample_member(const Zonotope& z, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec x = z.center();
  for (Index j = 0; j < z.num_generators(); ++j) {
    x += unit(rng) * z.generators().col(j);
  }
  return x;
}

// Largest support-function excess of `inner` over `outer` across `count`
// random directions; a nonpositive value certifies inclusion along every
// sampled direction.
inline double support_excess(const Zonotope& inner, const Zonotope& outer,
                             Index count, std::mt19937_64& rng) {
  double worst = -1e300;
  for (Index k = 0; k < count; ++k) {
    Vec d = random_vec(inner.dim(), rng);
    if (d.norm() == 0.0) continue;
    d /= d.norm();
    worst = std::max(worst, support(inner, d) - support(outer, d));
  }
  return worst;
}

// Random upper-Hessenberg matrix with positive subdiagonal, the shape
// produced by the Arnoldi iteration.
inline Mat random_hessenberg(Index xi, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 1.0);
  Mat h = Mat::Zero(xi, xi);
  for (Index j = 0; j < xi; ++j) {
    for (Index i = 0; i <= std::min(j + 1, xi - 1); ++i) {
      h(i, j) = i == j + 1 ? scale * pos(rng) : scale * unit(rng);
    }
  }
  return h;
}

} // namespace testsupport
