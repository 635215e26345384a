// End-to-end acceptance harness. Each criterion prints exactly one
// PASS/FAIL line; the process exits nonzero when any requested criterion
// fails. Run a single criterion with --criterion N.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "kreach/certificate.hpp"
#include "kreach/homogeneous.hpp"
#include "kreach/input_solution.hpp"
#include "kreach/krylov.hpp"
#include "kreach/models.hpp"
#include "kreach/oracle.hpp"
#include "kreach/reach.hpp"
#include "kreach/scenario.hpp"
#include "support.hpp"

using namespace kreach;
using testsupport::random_stable_sparse;
using testsupport::random_vec;
using testsupport::random_zonotope;
using testsupport::taylor_expm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* spec, ...) {
  char buf[512];
  va_list args;
  va_start(args, spec);
  vsnprintf(buf, sizeof buf, spec, args);
  va_end(args);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

Vec random_unit(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec d(n);
  for (Index i = 0; i < n; ++i) d[i] = gauss(rng);
  double nrm = d.norm();
  return nrm > 0 ? Vec(d / nrm) : Vec(Vec::Unit(n, 0));
}

bool contains_rel(const Zonotope& z, const Vec& x, double rel) {
  return contains_point(z, x, rel * std::max(1.0, x.norm()));
}

// long-double phi(A, h) = integral_0^h e^(A s) ds by direct series; callers
// keep |A| h well below 1 so no scaling step is needed.
Mat taylor_phi(const Mat& a, double h) {
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const Index n = a.rows();
  LMat al = a.cast<long double>() * static_cast<long double>(h);
  LMat term = LMat::Identity(n, n) * static_cast<long double>(h);
  LMat sum = term;
  for (int k = 1; k <= 120; ++k) {
    term = (al * term) / static_cast<long double>(k + 1);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-28L * sum.cwiseAbs().maxCoeff()) break;
  }
  return sum.cast<double>();
}

// --- 1: certificate soundness against the dense exponential ---------------

Outcome criterion1() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  const Index sizes[3] = {100, 200, 400};
  const double delta = 0.1;
  int checked = 0;
  int failures = 0;
  double worst_ratio = 0.0;

  for (int s = 0; s < 50; ++s) {
    const Index n = sizes[s % 3];
    const SparseMatrix a = random_stable_sparse(n, 0.04, 0.6, rng);
    const Vec v = random_vec(n, rng);
    const SpectralBounds bounds = spectral_bounds(a);
    const double norm2 = a.two_norm_upper();
    const Mat ad = a.to_dense();
    const Mat e1 = dense_expm(ad, delta);
    const Mat e10 = dense_expm(ad, 10.0 * delta);

    const Index xis[4] = {10, 20, 40, n};
    for (Index xi : xis) {
      const KrylovDecomposition dec = arnoldi(a, v, xi);
      const ErrorCertificate cert = epsilon_norm(bounds, norm2, dec.xi);
      for (int ti = 0; ti < 2; ++ti) {
        const double t = ti == 0 ? delta : 10.0 * delta;
        const Vec exact = (ti == 0 ? e1 : e10) * v;
        const double err = (exp_action(dec, t) - exact).norm();
        const double bound = v.norm() * certified_rate(cert, t) * t +
                             1e-12 * v.norm() * std::max(1.0, t);
        ++checked;
        if (err > bound) ++failures;
        if (bound > 0.0) worst_ratio = std::max(worst_ratio, err / bound);
      }
    }
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = fmt("%d/%d error bounds hold, worst error/bound %.2e, %.1f s",
                   checked - failures, checked, worst_ratio, seconds_since(start));
  return out;
}

// --- 2: simulated trajectories stay inside the reachable sets -------------

Outcome criterion2() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2002);
  const Index sizes[10] = {10, 14, 20, 28, 40, 56, 80, 96, 112, 128};
  const double delta = 0.05;
  const Index num_steps = 20;
  const double t_f = delta * static_cast<double>(num_steps);
  long long checked = 0;
  long long failures = 0;

  for (Index n : sizes) {
    const double density = n <= 40 ? 0.2 : 0.05;
    const SparseMatrix a = random_stable_sparse(n, density, 0.6, rng);
    const Zonotope x0 = random_zonotope(n, 3, rng, 0.5);
    const Zonotope u = random_zonotope(n, 2, rng, 0.1);

    ReachConfig cfg;
    cfg.delta = delta;
    cfg.t_f = t_f;
    cfg.input_mode = InputMode::varying;
    cfg.error_channel = ErrorChannel::interval;
    const ReachResult res = reach(a, x0, u, cfg);

    for (int traj = 0; traj < 100; ++traj) {
      const Vec start_state = sample_point(x0, rng);
      const PiecewiseConstantSignal sig = sample_signal(u, t_f, delta / 16.0, rng);
      const Trajectory path = simulate(a, start_state, sig, t_f, 1e-8);
      for (size_t i = 0; i < path.times.size(); ++i) {
        const double t = path.times[i];
        const Vec& x = path.states[i];
        Index k = static_cast<Index>(std::ceil(t / delta - 1e-9));
        k = std::max<Index>(1, std::min(num_steps, k));
        ++checked;
        if (!contains_rel(res.time_interval_sets[static_cast<size_t>(k - 1)], x, 1e-9))
          ++failures;
        if (std::abs(t - static_cast<double>(k) * delta) <=
            1e-12 * std::max(1.0, t)) {
          ++checked;
          if (!contains_rel(res.time_point_sets[static_cast<size_t>(k - 1)], x, 1e-9))
            ++failures;
        }
      }
    }
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = fmt("%lld/%lld states contained across 10 systems x 100 signals, %.1f s",
                   checked - failures, checked, seconds_since(start));
  return out;
}

// --- 3: full-dimension agreement with the dense engine --------------------

Outcome criterion3() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(3003);
  const Index sizes[4] = {8, 20, 35, 50};
  int checked = 0;
  int failures = 0;
  double worst_gap = 0.0;

  for (int s = 0; s < 4; ++s) {
    const Index n = sizes[s];
    const SparseMatrix a = random_stable_sparse(n, 0.25, 0.5, rng);
    const Zonotope x0 = random_zonotope(n, 3, rng, 0.5);
    const Zonotope u = random_zonotope(n, 2, rng, 0.05);

    ReachConfig cfg;
    cfg.delta = 0.05;
    cfg.t_f = 1.0;  // 20 steps
    cfg.input_mode = s % 2 == 0 ? InputMode::constant : InputMode::varying;
    cfg.error_channel = ErrorChannel::interval;
    cfg.xi.fixed = n;
    const ReachResult kry = reach(a, x0, u, cfg);
    const ReachResult den = dense_reach(a, x0, u, cfg);

    for (size_t k = 0; k < kry.steps.size(); ++k) {
      const Vec cert_sum =
          kry.steps[k].cert_radius + den.steps[k].cert_radius;
      const Vec curv_sum =
          kry.steps[k].curvature_radius + den.steps[k].curvature_radius;
      for (int dir = 0; dir < 50; ++dir) {
        const Vec d = random_unit(n, rng);
        const Vec dabs = d.cwiseAbs();
        const double slack_point = 1e-9 + 2.0 * dabs.dot(cert_sum);
        const double gap_point = std::abs(support(kry.time_point_sets[k], d) -
                                          support(den.time_point_sets[k], d));
        ++checked;
        if (gap_point > slack_point) ++failures;
        worst_gap = std::max(worst_gap, gap_point - slack_point);

        const double slack_tube = slack_point + 2.0 * dabs.dot(curv_sum);
        const double gap_tube = std::abs(support(kry.time_interval_sets[k], d) -
                                         support(den.time_interval_sets[k], d));
        ++checked;
        if (gap_tube > slack_tube) ++failures;
        worst_gap = std::max(worst_gap, gap_tube - slack_tube);
      }
    }
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = fmt("%d/%d support gaps within slack (worst excess %.2e), %.1f s",
                   checked - failures, checked, worst_gap, seconds_since(start));
  return out;
}

// --- 4: in-step chord deviation lands in the correction column ------------

Outcome criterion4() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4004);
  std::uniform_int_distribution<Index> pick_xi(1, 40);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double delta = 0.1;
  int checked = 0;
  int failures = 0;

  for (int rep = 0; rep < 100; ++rep) {
    const Index xi = pick_xi(rng);
    const Mat h = testsupport::random_hessenberg(xi, rng, 0.8);
    const auto col = correction_column(h, delta);
    const Mat ed = taylor_expm(h, delta);
    const Vec chord = ed.col(0) - Mat::Identity(xi, xi).col(0);
    const double floor =
        1e-13 * std::max(1.0, ed.cwiseAbs().maxCoeff());

    for (int ti = 0; ti < 50; ++ti) {
      const double t = unit(rng) * delta;
      const Vec r =
          taylor_expm(h, t).col(0) - Mat::Identity(xi, xi).col(0) - (t / delta) * chord;
      ++checked;
      bool inside = true;
      for (Index i = 0; i < xi; ++i) {
        if (r[i] < col.first[i] - col.second[i] - floor ||
            r[i] > col.first[i] + col.second[i] + floor) {
          inside = false;
          break;
        }
      }
      if (!inside) ++failures;
    }
  }
  Outcome out;
  out.pass = failures == 0;
  out.detail = fmt("%d/%d sampled chord deviations inside the interval column, %.1f s",
                   checked - failures, checked, seconds_since(start));
  return out;
}

// --- 5: brute-force particular solutions inside the input enclosure -------

Outcome criterion5() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(5005);
  const double delta = 0.08;
  long long checked = 0;
  long long failures = 0;
  int support_failures = 0;

  for (int s = 0; s < 10; ++s) {
    const Index n = 5 + 4 * s;  // 5 .. 41
    const SparseMatrix a = random_stable_sparse(n, 0.3, 0.5, rng);
    const Mat ad = a.to_dense();
    const Zonotope u = random_zonotope(n, 2, rng, 0.4);
    const Zonotope varying = varying_input_set(a, u, delta);
    const Zonotope constant = const_uncertain_input_set(a, u, delta);

    for (Index l : {1, 2, 4, 8}) {
      const double h = delta / static_cast<double>(l);
      const Mat eh = taylor_expm(ad, h);
      const Mat phi = taylor_phi(ad, h);
      for (int seq = 0; seq < 200; ++seq) {
        Vec x = Vec::Zero(n);
        for (Index i = 0; i < l; ++i) x = eh * x + phi * sample_point(u, rng);
        ++checked;
        if (!contains_rel(varying, x, 1e-9)) ++failures;
      }
    }

    for (int dir = 0; dir < 50; ++dir) {
      const Vec d = random_unit(n, rng);
      if (support(constant, d) >
          support(varying, d) + 1e-12 * std::max(1.0, support(varying, d)))
        ++support_failures;
    }
  }
  Outcome out;
  out.pass = failures == 0 && support_failures == 0;
  out.detail = fmt(
      "%lld/%lld exact particular solutions contained, %d/500 support "
      "violations, %.1f s",
      checked - failures, checked, support_failures, seconds_since(start));
  return out;
}

// --- 6: scale (n = 5040) and speed against the dense engine (n = 1000) ----

Outcome criterion6() {
  // one certified step on the 5040-dimensional structural chain
  StructuralModel big = structural_chain(2520, 1.0, 10.0, 0.05, 1e-3);
  SecondOrderSystem sys = assemble_second_order(big.m, big.d, big.k);
  const Index n = sys.a.rows();

  Vec c0 = Vec::Zero(n);
  c0.head(2520) = lateral_pattern(2520);
  Mat g0 = Mat::Zero(n, 1);
  g0.col(0).head(2520) = 0.1 * vertical_pattern(2520);
  const Zonotope x0(c0, g0);
  const Zonotope u_in = Zonotope::point(Vec(0.01 * lateral_pattern(2520)));

  ReachConfig cfg;
  cfg.delta = 0.005;
  cfg.t_f = cfg.delta;
  cfg.input_mode = InputMode::constant;
  cfg.error_channel = ErrorChannel::generators;
  cfg.xi.target_eps = 1e-12;
  cfg.xi.cap = 200;
  cfg.strict_soundness = true;

  auto t0 = std::chrono::steady_clock::now();
  Index xi_used = 0;
  double step_seconds = 0.0;
  try {
    const ReachResult res = reach(sys.a, sys.b, x0, u_in, cfg);
    xi_used = res.steps[0].xi_carrier;
    step_seconds = seconds_since(t0);
  } catch (const std::exception& e) {
    return {false, fmt("n=%lld step failed: %s", static_cast<long long>(n), e.what())};
  }
  if (xi_used > 200 || step_seconds > 120.0)
    return {false, fmt("n=%lld step: xi=%lld, %.1f s (limits 200 / 120 s)",
                       static_cast<long long>(n), static_cast<long long>(xi_used),
                       step_seconds)};

  // per-step comparison at n = 1000 under one shared configuration
  StructuralModel mid = structural_chain(500, 1.0, 10.0, 0.05, 1e-3);
  SecondOrderSystem msys = assemble_second_order(mid.m, mid.d, mid.k);
  const Index m = msys.a.rows();

  Vec mc = Vec::Zero(m);
  mc.head(500) = lateral_pattern(500);
  Mat mg = Mat::Zero(m, 1);
  mg.col(0).head(500) = 0.1 * vertical_pattern(500);
  const Zonotope mx0(mc, mg);
  const Zonotope mu = linear_map(msys.b.to_dense(), Zonotope::point(
                                     Vec(0.01 * lateral_pattern(500))));

  ReachConfig mcfg;
  mcfg.delta = 0.005;
  mcfg.t_f = 5 * mcfg.delta;
  mcfg.input_mode = InputMode::constant;
  mcfg.error_channel = ErrorChannel::interval;
  mcfg.xi.target_eps = 1e-12;
  mcfg.xi.cap = 200;

  t0 = std::chrono::steady_clock::now();
  const ReachResult kry = reach(msys.a, mx0, mu, mcfg);
  const double krylov_step = seconds_since(t0) / 5.0;

  t0 = std::chrono::steady_clock::now();
  const ReachResult den = dense_reach(msys.a, mx0, mu, mcfg);
  const double dense_step = seconds_since(t0) / 5.0;
  (void)den;

  Outcome out;
  out.pass = 2.0 * krylov_step <= dense_step;
  out.detail = fmt(
      "n=%lld certified step: xi=%lld, %.1f s; n=%lld per step: reduced %.3f s "
      "vs dense %.3f s (%.1fx)",
      static_cast<long long>(n), static_cast<long long>(xi_used), step_seconds,
      static_cast<long long>(m), krylov_step, dense_step,
      krylov_step > 0 ? dense_step / krylov_step : 0.0);
  return out;
}

// --- 7: generator counts stay flat over a long interval-channel run -------

Outcome criterion7() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(7007);
  const Index n = 30;
  const SparseMatrix a = random_stable_sparse(n, 0.2, 0.6, rng);
  const Zonotope x0 = random_zonotope(n, 3, rng, 0.3);
  const Zonotope u = Zonotope::box(Vec(0.01 * Vec::Ones(n)), Vec(0.05 * Vec::Ones(n)));

  ReachConfig cfg;
  cfg.delta = 0.05;
  cfg.t_f = 5.0;  // 100 steps
  cfg.input_mode = InputMode::varying;
  cfg.error_channel = ErrorChannel::interval;
  const ReachResult res = reach(a, x0, u, cfg);

  Outcome out;
  if (res.steps.size() != 100) {
    out.detail = fmt("expected 100 steps, got %zu", res.steps.size());
    return out;
  }
  const Index point_count = res.steps[0].point_generators;
  const Index tube_count = res.steps[0].interval_generators;
  for (const StepDiagnostics& d : res.steps) {
    if (d.point_generators != point_count || d.interval_generators != tube_count) {
      out.detail = fmt("generator count drifts at step %lld (%lld/%lld vs %lld/%lld)",
                       static_cast<long long>(d.step),
                       static_cast<long long>(d.point_generators),
                       static_cast<long long>(d.interval_generators),
                       static_cast<long long>(point_count),
                       static_cast<long long>(tube_count));
      return out;
    }
  }
  out.pass = true;
  out.detail = fmt("100 steps at constant %lld point / %lld tube generators, %.1f s",
                   static_cast<long long>(point_count),
                   static_cast<long long>(tube_count), seconds_since(start));
  return out;
}

// --- 8: nilpotent systems end in exact early termination ------------------

Outcome criterion8() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(8008);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double t = 1.3;
  int failures = 0;
  Index worst_xi = 0;

  for (Index k = 2; k <= 5; ++k) {
    for (int padded = 0; padded < 2; ++padded) {
      const Index n = padded ? 40 : k;
      std::vector<Triplet> trip;
      for (Index i = 0; i + 1 < k; ++i) {
        trip.push_back({i, i + 1, 1.0});
        for (Index j = i + 2; j < k; ++j) trip.push_back({i, j, unit(rng)});
      }
      const SparseMatrix a = SparseMatrix::from_triplets(n, n, trip);
      const Vec v = random_vec(n, rng);

      const KrylovDecomposition dec = arnoldi(a, v, n);
      if (!dec.happy_breakdown || dec.xi > k) {
        ++failures;
        continue;
      }
      worst_xi = std::max(worst_xi, dec.xi);

      // exact finite series in long double
      using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
      const Mat ad = a.to_dense();
      LVec term = v.cast<long double>();
      LVec sum = term;
      for (Index i = 1; i < k; ++i) {
        term = (ad.cast<long double>() * term) * (static_cast<long double>(t) /
                                                  static_cast<long double>(i));
        sum += term;
      }
      const Vec exact = sum.cast<double>();
      const double err = (exp_action(dec, t) - exact).norm();
      if (err > 1e-12 * std::max(1.0, exact.norm())) ++failures;
    }
  }
  const double wall = seconds_since(start);
  Outcome out;
  out.pass = failures == 0 && wall < 1.0;
  out.detail = fmt("8 nilpotent cases, max xi %lld, exact actions, %.3f s",
                   static_cast<long long>(worst_xi), wall);
  return out;
}

} // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (only < 0 || only > 8) {
    std::fprintf(stderr, "criterion must be in 1..8\n");
    return 2;
  }

  Outcome (*criteria[8])() = {criterion1, criterion2, criterion3, criterion4,
                              criterion5, criterion6, criterion7, criterion8};
  int failed = 0;
  for (int i = 1; i <= 8; ++i) {
    if (only != 0 && i != only) continue;
    Outcome out;
    try {
      out = criteria[i - 1]();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = fmt("unexpected exception: %s", e.what());
    }
    std::printf("criterion %d: %s — %s\n", i, out.pass ? "PASS" : "FAIL",
                out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
