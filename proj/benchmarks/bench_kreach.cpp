// Microbenchmarks for the hot paths: sparse products, the Arnoldi sweep,
// the certificate pipeline, and one full propagation step.

#include <benchmark/benchmark.h>

#include <random>

#include "kreach/certificate.hpp"
#include "kreach/krylov.hpp"
#include "kreach/models.hpp"
#include "kreach/reach.hpp"
#include "kreach/scenario.hpp"

namespace {

using namespace kreach;

SparseMatrix chain_system(Index dof) {
  StructuralModel m = structural_chain(dof, 1.0, 1e4, 0.02, 1e-4);
  return assemble_second_order(m.m, m.d, m.k).a;
}

Vec unit_seed(Index n) {
  Vec v = Vec::Zero(n);
  v[0] = 1.0;
  return v;
}

void bm_matvec(benchmark::State& state) {
  const Index dof = state.range(0);
  SparseMatrix a = chain_system(dof);
  Vec x = Vec::Ones(a.rows());
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.multiply(x));
  }
  state.SetItemsProcessed(state.iterations() * a.nonzeros());
}
BENCHMARK(bm_matvec)->Arg(500)->Arg(2520);

void bm_arnoldi(benchmark::State& state) {
  const Index xi = state.range(0);
  SparseMatrix a = chain_system(500);
  Vec v = unit_seed(a.rows());
  for (auto _ : state) {
    benchmark::DoNotOptimize(arnoldi(a, v, xi));
  }
}
BENCHMARK(bm_arnoldi)->Arg(20)->Arg(60)->Arg(120);

void bm_certificate(benchmark::State& state) {
  const Index xi = state.range(0);
  SparseMatrix a = chain_system(500);
  for (auto _ : state) {
    benchmark::DoNotOptimize(epsilon_norm(a, xi));
  }
}
BENCHMARK(bm_certificate)->Arg(40)->Arg(120);

void bm_reach_step(benchmark::State& state) {
  const Index dof = state.range(0);
  SparseMatrix a = chain_system(dof);
  const Index n = a.rows();
  Vec c = Vec::Zero(n);
  c[0] = 1.0;
  Mat g = Mat::Zero(n, 1);
  g(1, 0) = 0.1;
  Zonotope x0(c, g);
  Zonotope u = Zonotope::point(Vec::Zero(n));
  ReachConfig cfg;
  cfg.delta = 1e-3;
  cfg.t_f = 1e-3;
  cfg.xi.target_eps = 1e-10;
  cfg.xi.cap = 120;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reach(a, x0, u, cfg));
  }
}
BENCHMARK(bm_reach_step)->Arg(100)->Arg(500);

} // namespace

BENCHMARK_MAIN();
