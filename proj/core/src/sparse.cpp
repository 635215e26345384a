#include "kreach/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kreach {

SparseMatrix::SparseMatrix(Index rows, Index cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0)
    throw std::invalid_argument("SparseMatrix: negative dimension");
  row_offsets_.assign(static_cast<size_t>(rows) + 1, 0);
}

SparseMatrix SparseMatrix::from_triplets(Index rows, Index cols,
                                         std::vector<Triplet> triplets) {
  SparseMatrix m(rows, cols);
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols)
      throw std::invalid_argument("SparseMatrix::from_triplets: index out of range");
    if (!std::isfinite(t.value))
      throw std::invalid_argument("SparseMatrix::from_triplets: non-finite value");
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.row != b.row ? a.row < b.row : a.col < b.col;
            });

  m.col_indices_.reserve(triplets.size());
  m.values_.reserve(triplets.size());
  size_t i = 0;
  while (i < triplets.size()) {
    Index r = triplets[i].row;
    Index c = triplets[i].col;
    double v = triplets[i].value;
    size_t j = i + 1;
    while (j < triplets.size() && triplets[j].row == r && triplets[j].col == c) {
      v += triplets[j].value;
      ++j;
    }
    m.col_indices_.push_back(c);
    m.values_.push_back(v);
    m.row_offsets_[static_cast<size_t>(r) + 1]++;
    i = j;
  }
  for (size_t r = 0; r < static_cast<size_t>(rows); ++r)
    m.row_offsets_[r + 1] += m.row_offsets_[r];
  return m;
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

Vec SparseMatrix::multiply(const Vec& x) const {
  if (x.size() != cols_)
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  Vec y = Vec::Zero(rows_);
  for (Index r = 0; r < rows_; ++r) {
    double acc = 0.0;
    const Index begin = row_offsets_[static_cast<size_t>(r)];
    const Index end = row_offsets_[static_cast<size_t>(r) + 1];
    for (Index k = begin; k < end; ++k)
      acc += values_[static_cast<size_t>(k)] * x[col_indices_[static_cast<size_t>(k)]];
    y[r] = acc;
  }
  return y;
}

Vec SparseMatrix::multiply_transpose(const Vec& x) const {
  if (x.size() != rows_)
    throw std::invalid_argument("SparseMatrix::multiply_transpose: dimension mismatch");
  Vec y = Vec::Zero(cols_);
  for (Index r = 0; r < rows_; ++r) {
    const Index begin = row_offsets_[static_cast<size_t>(r)];
    const Index end = row_offsets_[static_cast<size_t>(r) + 1];
    for (Index k = begin; k < end; ++k)
      y[col_indices_[static_cast<size_t>(k)]] += values_[static_cast<size_t>(k)] * x[r];
  }
  return y;
}

Mat SparseMatrix::multiply(const Mat& x) const {
  if (x.rows() != cols_)
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  Mat y = Mat::Zero(rows_, x.cols());
  for (Index c = 0; c < x.cols(); ++c) y.col(c) = multiply(Vec(x.col(c)));
  return y;
}

SparseMatrix SparseMatrix::elementwise_abs() const {
  SparseMatrix m = *this;
  for (double& v : m.values_) v = std::abs(v);
  return m;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Triplet> t = to_triplets();
  for (Triplet& e : t) std::swap(e.row, e.col);
  return from_triplets(cols_, rows_, std::move(t));
}

SparseMatrix SparseMatrix::scaled(double factor) const {
  SparseMatrix m = *this;
  for (double& v : m.values_) v *= factor;
  return m;
}

double SparseMatrix::one_norm() const {
  std::vector<double> colsum(static_cast<size_t>(cols_), 0.0);
  for (size_t k = 0; k < values_.size(); ++k)
    colsum[static_cast<size_t>(col_indices_[k])] += std::abs(values_[k]);
  double best = 0.0;
  for (double s : colsum) best = std::max(best, s);
  return best;
}

double SparseMatrix::inf_norm() const {
  double best = 0.0;
  for (Index r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (Index k = row_offsets_[static_cast<size_t>(r)];
         k < row_offsets_[static_cast<size_t>(r) + 1]; ++k)
      s += std::abs(values_[static_cast<size_t>(k)]);
    best = std::max(best, s);
  }
  return best;
}

double SparseMatrix::two_norm_upper() const {
  return std::sqrt(one_norm() * inf_norm());
}

std::vector<Triplet> SparseMatrix::to_triplets() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (Index r = 0; r < rows_; ++r)
    for (Index k = row_offsets_[static_cast<size_t>(r)];
         k < row_offsets_[static_cast<size_t>(r) + 1]; ++k)
      t.push_back({r, col_indices_[static_cast<size_t>(k)], values_[static_cast<size_t>(k)]});
  return t;
}

Mat SparseMatrix::to_dense() const {
  Mat d = Mat::Zero(rows_, cols_);
  for (Index r = 0; r < rows_; ++r)
    for (Index k = row_offsets_[static_cast<size_t>(r)];
         k < row_offsets_[static_cast<size_t>(r) + 1]; ++k)
      d(r, col_indices_[static_cast<size_t>(k)]) = values_[static_cast<size_t>(k)];
  return d;
}

} // namespace kreach
