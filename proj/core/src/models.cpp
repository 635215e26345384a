#include "kreach/models.hpp"

#include <cmath>
#include <stdexcept>

namespace kreach {

StructuralModel structural_chain(Index dof, double mass, double stiffness,
                                 double alpha, double beta) {
  if (dof < 1) throw std::invalid_argument("structural_chain: need at least one mass");
  if (!(mass > 0.0) || !(stiffness > 0.0))
    throw std::invalid_argument("structural_chain: mass and stiffness must be positive");

  std::vector<Triplet> mt, kt;
  mt.reserve(static_cast<size_t>(dof));
  kt.reserve(static_cast<size_t>(3 * dof));
  for (Index i = 0; i < dof; ++i) {
    mt.push_back({i, i, mass});
    kt.push_back({i, i, 2.0 * stiffness});
    if (i + 1 < dof) {
      kt.push_back({i, i + 1, -stiffness});
      kt.push_back({i + 1, i, -stiffness});
    }
  }

  StructuralModel model;
  model.m = SparseMatrix::from_triplets(dof, dof, mt);
  model.k = SparseMatrix::from_triplets(dof, dof, kt);

  std::vector<Triplet> dt;
  for (const Triplet& t : model.m.to_triplets())
    if (alpha * t.value != 0.0) dt.push_back({t.row, t.col, alpha * t.value});
  for (const Triplet& t : model.k.to_triplets())
    if (beta * t.value != 0.0) dt.push_back({t.row, t.col, beta * t.value});
  model.d = SparseMatrix::from_triplets(dof, dof, dt);
  return model;
}

Vec lateral_pattern(Index dof) {
  if (dof < 1) throw std::invalid_argument("lateral_pattern: need at least one mass");
  return Vec::Constant(dof, 1.0 / std::sqrt(static_cast<double>(dof)));
}

Vec vertical_pattern(Index dof) {
  if (dof < 1) throw std::invalid_argument("vertical_pattern: need at least one mass");
  Vec p(dof);
  for (Index i = 0; i < dof; ++i)
    p[i] = std::sin(M_PI * static_cast<double>(i + 1) /
                    static_cast<double>(dof + 1));
  return p / p.norm();
}

} // namespace kreach
