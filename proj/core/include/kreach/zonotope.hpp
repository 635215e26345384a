#pragma once

#include "kreach/interval.hpp"
#include "kreach/sparse.hpp"

namespace kreach {

// Zonotope Z = { c + sum_i beta_i g_i : beta in [-1,1]^p }.
// Generators are the columns of an n x p matrix; zero columns are legal and
// are kept so generator counts stay predictable across propagation steps.
class Zonotope {
public:
  Zonotope() = default;
  Zonotope(Vec center, Mat generators);

  static Zonotope point(Vec center);
  static Zonotope box(Vec center, const Vec& radius);

  Index dim() const { return center_.size(); }
  Index num_generators() const { return generators_.cols(); }
  double order() const;

  const Vec& center() const { return center_; }
  const Mat& generators() const { return generators_; }

private:
  Vec center_;
  Mat generators_;
};

Zonotope minkowski_sum(const Zonotope& z1, const Zonotope& z2);

Zonotope linear_map(const Mat& m, const Zonotope& z);
Zonotope linear_map(const SparseMatrix& m, const Zonotope& z);

// Enclosure of conv(z1 u z2) built from paired generators; operands with
// unequal generator counts are zero-padded on the right.
Zonotope convex_hull_enclosure(const Zonotope& z1, const Zonotope& z2);

// Enclosure of { M x : M in [center - radius, center + radius], x in Z }.
// The uncertain part is absorbed into one axis-aligned generator per row.
Zonotope interval_matrix_map(const IntervalMatrix& m, const Zonotope& z);

// Tight axis-aligned box enclosure (interval hull) as a zonotope with
// diagonal generators.
Zonotope box_enclosure(const Zonotope& z);
IntervalVector interval_hull(const Zonotope& z);

double support(const Zonotope& z, const Vec& direction);

// Decides x in Z up to the feasibility tolerance `tol` (absolute, applied to
// the residual norm of the best coefficient vector); ties count as contained.
bool contains_point(const Zonotope& z, const Vec& x, double tol = 1e-9);

Zonotope interval_to_zonotope(const IntervalVector& iv);

} // namespace kreach
