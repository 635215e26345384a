#pragma once

#include <random>
#include <vector>

#include "kreach/reach.hpp"

namespace kreach {

// Reference implementations used to cross-check the reduced-space pipeline.
// Numerics here are independent of the code they validate: the exponential
// is a dense scaling-and-squaring routine, series terms and remainders are
// computed from the full matrix, and trajectories come from an adaptive
// Runge-Kutta integrator. Only the set-algebra containers are shared.

// Dense matrix exponential e^(A t), backward-stable Pade scaling and
// squaring. Size cap 1000 keeps the O(n^3) work tractable.
Mat dense_expm(const Mat& a, double t = 1.0);

// Dense mirror of reach(): the same propagation recursion driven by exact
// dense exponential maps with no reduced-space error terms. Series
// remainders that exist in exact arithmetic (input truncation, chord
// curvature) are kept, computed from the full matrix. Size cap 1000.
ReachResult dense_reach(const SparseMatrix& a, const Zonotope& x0,
                        const Zonotope& u_set, const ReachConfig& cfg);

// Right-continuous step signal: values[i] holds on
// [breakpoints[i], breakpoints[i+1]), the last value onward.
struct PiecewiseConstantSignal {
  std::vector<double> breakpoints;  // strictly ascending
  std::vector<Vec> values;          // same length as breakpoints

  Vec at(double t) const;
};

struct Trajectory {
  std::vector<double> times;  // strictly increasing
  std::vector<Vec> states;
  PiecewiseConstantSignal input_signal;

  // State recorded at exactly time t; throws when t is not among the
  // recorded samples (matching tolerance 1e-9 * max(1, |t|)).
  const Vec& state_at(double t) const;
};

// Integrates dx = A x + B u(t) with an embedded Runge-Kutta 4(5) pair
// (Dormand-Prince) under mixed absolute/relative tolerance tol. Integration
// restarts exactly at every input breakpoint, so no step straddles a
// discontinuity and each breakpoint in [0, t_f] appears among the recorded
// times. Throws on step-size underflow.
Trajectory simulate(const SparseMatrix& a, const SparseMatrix& b, const Vec& x0,
                    const PiecewiseConstantSignal& u, double t_f, double tol);
// B = identity
Trajectory simulate(const SparseMatrix& a, const Vec& x0,
                    const PiecewiseConstantSignal& u, double t_f, double tol);

// Independent trajectories integrated in parallel.
std::vector<Trajectory> simulate_batch(
    const SparseMatrix& a, const SparseMatrix& b, const std::vector<Vec>& starts,
    const std::vector<PiecewiseConstantSignal>& inputs, double t_f, double tol);

// Uniform sample c + G beta with beta ~ U[-1,1]^p.
Vec sample_point(const Zonotope& z, std::mt19937_64& rng);

// Step signal over [0, t_f] with independent samples from U on a grid of
// the given resolution.
PiecewiseConstantSignal sample_signal(const Zonotope& u_set, double t_f,
                                      double resolution, std::mt19937_64& rng);

} // namespace kreach
