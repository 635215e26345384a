#include "kreach/interval.hpp"

#include <stdexcept>

namespace kreach {

IntervalVector::IntervalVector(Vec lo, Vec hi) : inf(std::move(lo)), sup(std::move(hi)) {
  if (inf.size() != sup.size())
    throw std::invalid_argument("IntervalVector: bound dimensions differ");
  if (((sup - inf).array() < 0.0).any())
    throw std::invalid_argument("IntervalVector: inf exceeds sup");
}

IntervalVector IntervalVector::zero(Index dim) {
  return IntervalVector(Vec::Zero(dim), Vec::Zero(dim));
}

IntervalVector IntervalVector::symmetric(const Vec& radius) {
  if ((radius.array() < 0.0).any())
    throw std::invalid_argument("IntervalVector::symmetric: negative radius");
  return IntervalVector(-radius, radius);
}

bool IntervalVector::contains(const Vec& x, double tol) const {
  if (x.size() != dim())
    throw std::invalid_argument("IntervalVector::contains: dimension mismatch");
  return ((x - inf).array() >= -tol).all() && ((sup - x).array() >= -tol).all();
}

IntervalVector IntervalVector::operator+(const IntervalVector& other) const {
  if (dim() != other.dim())
    throw std::invalid_argument("IntervalVector::operator+: dimension mismatch");
  return IntervalVector(inf + other.inf, sup + other.sup);
}

IntervalVector IntervalVector::scaled(double factor) const {
  if (factor >= 0.0) return IntervalVector(factor * inf, factor * sup);
  return IntervalVector(factor * sup, factor * inf);
}

IntervalMatrix::IntervalMatrix(Mat c, Mat r) : center(std::move(c)), radius(std::move(r)) {
  if (center.rows() != radius.rows() || center.cols() != radius.cols())
    throw std::invalid_argument("IntervalMatrix: center/radius shape mismatch");
  if ((radius.array() < 0.0).any())
    throw std::invalid_argument("IntervalMatrix: negative radius");
}

IntervalVector IntervalMatrix::multiply(const Vec& x) const {
  if (x.size() != cols())
    throw std::invalid_argument("IntervalMatrix::multiply: dimension mismatch");
  const Vec mid = center * x;
  const Vec rad = radius * x.cwiseAbs();
  return IntervalVector(mid - rad, mid + rad);
}

IntervalVector IntervalMatrix::column_interval(Index j) const {
  if (j < 0 || j >= cols())
    throw std::invalid_argument("IntervalMatrix::column_interval: index out of range");
  return IntervalVector(center.col(j) - radius.col(j), center.col(j) + radius.col(j));
}

} // namespace kreach
