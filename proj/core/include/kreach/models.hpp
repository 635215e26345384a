#pragma once

#include "kreach/sparse.hpp"

namespace kreach {

// Second-order structural system M q'' + D q' + K q = f.
struct StructuralModel {
  SparseMatrix m;
  SparseMatrix d;
  SparseMatrix k;
};

// Uniform chain of `dof` point masses coupled by springs and anchored at
// both ends: K is the standard tridiagonal stiffness matrix, M = mass * I,
// and D = alpha M + beta K (Rayleigh damping). A 2520-DOF chain assembles
// to a 5040-dimensional first-order system.
StructuralModel structural_chain(Index dof, double mass, double stiffness,
                                 double alpha, double beta);

// Canonical force-distribution patterns for the chain, unit-normalized:
// a broadside load spread uniformly over all masses, and a load shaped like
// the first bending mode (half sine).
Vec lateral_pattern(Index dof);
Vec vertical_pattern(Index dof);

} // namespace kreach
