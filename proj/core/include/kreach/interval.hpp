#pragma once

#include "kreach/types.hpp"

namespace kreach {

// Axis-aligned interval vector [inf, sup], componentwise inf <= sup.
struct IntervalVector {
  Vec inf;
  Vec sup;

  IntervalVector() = default;
  IntervalVector(Vec lo, Vec hi);

  static IntervalVector zero(Index dim);
  // symmetric box [-radius, radius]
  static IntervalVector symmetric(const Vec& radius);

  Index dim() const { return inf.size(); }
  Vec midpoint() const { return 0.5 * (inf + sup); }
  Vec radius() const { return 0.5 * (sup - inf); }
  bool contains(const Vec& x, double tol = 0.0) const;

  IntervalVector operator+(const IntervalVector& other) const;
  IntervalVector scaled(double factor) const;
};

// Interval matrix stored as center + elementwise radius (radius >= 0).
struct IntervalMatrix {
  Mat center;
  Mat radius;

  IntervalMatrix() = default;
  IntervalMatrix(Mat c, Mat r);

  Index rows() const { return center.rows(); }
  Index cols() const { return center.cols(); }

  // Interval product with a point vector: center*x +/- radius*|x|.
  IntervalVector multiply(const Vec& x) const;
  IntervalVector column_interval(Index j) const;
};

} // namespace kreach
