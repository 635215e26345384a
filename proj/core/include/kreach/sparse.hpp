#pragma once

#include <vector>

#include "kreach/types.hpp"

namespace kreach {

struct Triplet {
  Index row;
  Index col;
  double value;
};

// Compressed sparse row matrix with a fixed, deterministic evaluation order.
// Row entries are stored sorted by column; matvec accumulates in storage
// order so results are reproducible bit-for-bit across runs.
class SparseMatrix {
public:
  SparseMatrix() = default;
  SparseMatrix(Index rows, Index cols);

  // Duplicate (row, col) entries are summed, matching the usual coordinate
  // format convention. Entries are sorted row-major before storage.
  static SparseMatrix from_triplets(Index rows, Index cols,
                                    std::vector<Triplet> triplets);

  static SparseMatrix identity(Index n);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  Index nonzeros() const { return static_cast<Index>(values_.size()); }

  Vec multiply(const Vec& x) const;
  Vec multiply_transpose(const Vec& x) const;

  // y = this * X, column by column (keeps the deterministic row order).
  Mat multiply(const Mat& x) const;

  SparseMatrix elementwise_abs() const;
  SparseMatrix transpose() const;
  SparseMatrix scaled(double factor) const;

  double one_norm() const;  // max absolute column sum
  double inf_norm() const;  // max absolute row sum
  // sqrt(one_norm * inf_norm) >= spectral norm; cheap and rigorous.
  double two_norm_upper() const;

  std::vector<Triplet> to_triplets() const;
  Mat to_dense() const;

  const std::vector<Index>& row_offsets() const { return row_offsets_; }
  const std::vector<Index>& col_indices() const { return col_indices_; }
  const std::vector<double>& values() const { return values_; }

private:
  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<Index> row_offsets_;  // size rows_ + 1
  std::vector<Index> col_indices_;
  std::vector<double> values_;
};

} // namespace kreach
