#include "kreach/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace kreach {

namespace {

// (C + C^T)/2 and (C - C^T)/2 assembled through triplet concatenation; the
// builder sums duplicates, so no explicit pattern merge is needed.
SparseMatrix symmetric_part(const SparseMatrix& c) {
  std::vector<Triplet> t = c.to_triplets();
  std::vector<Triplet> s;
  s.reserve(2 * t.size());
  for (const Triplet& e : t) {
    s.push_back({e.row, e.col, 0.5 * e.value});
    s.push_back({e.col, e.row, 0.5 * e.value});
  }
  return SparseMatrix::from_triplets(c.rows(), c.cols(), std::move(s));
}

SparseMatrix skew_part(const SparseMatrix& c) {
  std::vector<Triplet> t = c.to_triplets();
  std::vector<Triplet> s;
  s.reserve(2 * t.size());
  for (const Triplet& e : t) {
    s.push_back({e.row, e.col, 0.5 * e.value});
    s.push_back({e.col, e.row, -0.5 * e.value});
  }
  return SparseMatrix::from_triplets(c.rows(), c.cols(), std::move(s));
}

} // namespace

SpectralBounds spectral_bounds(const SparseMatrix& c_matrix) {
  if (c_matrix.rows() != c_matrix.cols())
    throw std::invalid_argument("spectral_bounds: matrix must be square");
  const Index n = c_matrix.rows();
  SpectralBounds out;
  if (n == 0) return out;

  const SparseMatrix s = symmetric_part(c_matrix);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const auto& offsets = s.row_offsets();
  const auto& cols = s.col_indices();
  const auto& vals = s.values();
  for (Index r = 0; r < n; ++r) {
    double diag = 0.0, radius = 0.0;
    for (Index k = offsets[static_cast<size_t>(r)];
         k < offsets[static_cast<size_t>(r) + 1]; ++k) {
      if (cols[static_cast<size_t>(k)] == r)
        diag = vals[static_cast<size_t>(k)];
      else
        radius += std::abs(vals[static_cast<size_t>(k)]);
    }
    lo = std::min(lo, diag - radius);
    hi = std::max(hi, diag + radius);
  }
  out.a = lo;
  out.b = hi;
  // Skew-symmetric spectra are purely imaginary; the spectral radius is
  // bounded by any induced norm.
  out.c = skew_part(c_matrix).inf_norm();
  return out;
}

SpectralDiagnostics spectral_bounds_refined(const SparseMatrix& c_matrix,
                                            Index lanczos_steps) {
  SpectralDiagnostics out;
  out.gershgorin = spectral_bounds(c_matrix);
  const Index n = c_matrix.rows();
  if (n == 0) return out;

  const SparseMatrix s = symmetric_part(c_matrix);
  const Index steps = std::min<Index>(std::max<Index>(lanczos_steps, 1), n);

  // Lanczos with full reorthogonalization; the deterministic seed keeps
  // repeated runs bit-identical.
  Mat v(n, steps);
  Vec alpha = Vec::Zero(steps);
  Vec beta = Vec::Zero(steps);  // beta[k] couples step k to k+1
  Vec q = Vec::Ones(n);
  q.normalize();
  v.col(0) = q;
  Index k_eff = 0;
  double beta_next = 0.0;
  for (Index k = 0; k < steps; ++k) {
    Vec w = s.multiply(Vec(v.col(k)));
    for (Index j = 0; j <= k; ++j) {
      const double h = w.dot(v.col(j));
      if (j == k) alpha[k] = h;
      w -= h * v.col(j);
    }
    // second pass for robustness
    for (Index j = 0; j <= k; ++j) {
      const double h = w.dot(v.col(j));
      if (j == k) alpha[k] += h;
      w -= h * v.col(j);
    }
    k_eff = k + 1;
    beta_next = w.norm();
    if (k + 1 == steps || beta_next <= 1e-14 * out.gershgorin.c +
                              1e-14 * std::abs(out.gershgorin.b)) {
      break;
    }
    beta[k] = beta_next;
    v.col(k + 1) = w / beta_next;
  }

  Mat t = Mat::Zero(k_eff, k_eff);
  for (Index k = 0; k < k_eff; ++k) {
    t(k, k) = alpha[k];
    if (k + 1 < k_eff) {
      t(k, k + 1) = beta[k];
      t(k + 1, k) = beta[k];
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(t);
  const Vec& theta = es.eigenvalues();
  const Mat& u = es.eigenvectors();
  out.ritz_min = theta[0];
  out.ritz_max = theta[k_eff - 1];
  out.residual_min = std::abs(beta_next * u(k_eff - 1, 0));
  out.residual_max = std::abs(beta_next * u(k_eff - 1, k_eff - 1));
  return out;
}

} // namespace kreach
