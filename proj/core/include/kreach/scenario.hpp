#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kreach/reach.hpp"

namespace kreach {

// First-order realization of M q'' + D q' + K q = f:
//   A = [[0, I], [-M^-1 K, -M^-1 D]],  B = [[0], [M^-1]].
// For diagonal M the inverse is applied exactly and the residual is zero;
// otherwise a sparse LU solve runs columnwise and `residual` reports
// max(|M (M^-1 K) - K|_inf, |M (M^-1 D) - D|_inf). Throws on singular M.
struct SecondOrderSystem {
  SparseMatrix a;
  SparseMatrix b;
  double residual = 0.0;
};

SecondOrderSystem assemble_second_order(const SparseMatrix& m, const SparseMatrix& d,
                                        const SparseMatrix& k);

// One monitored coordinate with its unsafe interval.
struct Monitor {
  Index coord = 0;
  double lo = 0.0;
  double hi = 0.0;
};

// A fully assembled analysis problem loaded from a scenario file.
struct Scenario {
  SparseMatrix a;
  SparseMatrix b;  // empty (0 x 0) when the input maps directly
  bool has_b = false;
  Zonotope x0;
  Zonotope u;  // in B's input space when has_b, else in state space
  ReachConfig cfg;
  std::vector<std::pair<Index, Index>> projections;
  std::vector<Monitor> monitors;
  double assembly_residual = 0.0;  // second-order source only
};

// Parses the sectioned key-value scenario format (see README for the full
// grammar) and assembles the system. Matrix paths are resolved relative to
// the scenario file. Every dimension mismatch is rejected here, before any
// computation starts.
Scenario load_scenario(const std::string& path);

} // namespace kreach
