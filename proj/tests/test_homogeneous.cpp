#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kreach/errors.hpp"
#include "kreach/homogeneous.hpp"
#include "kreach/oracle.hpp"
#include "support.hpp"

using namespace kreach;
using testsupport::random_stable_sparse;
using testsupport::random_vec;
using testsupport::random_zonotope;
using testsupport::sample_member;
using testsupport::taylor_expm;

TEST_CASE("single-state propagation trivial cases") {
  std::mt19937_64 rng(71);
  SparseMatrix a = random_stable_sparse(30, 0.1, 0.3, rng);

  auto [zero_state, zero_err] = hom_point_single(a, Vec(Vec::Zero(30)), 0.7);
  CHECK(zero_state.norm() == 0.0);
  CHECK(zero_err.radius().norm() == 0.0);

  Vec x0 = random_vec(30, rng);
  auto [state, err] = hom_point_single(a, x0, 0.0);
  CHECK((state - x0).norm() <= 1e-13 * x0.norm());
  CHECK(err.radius().norm() == 0.0);
}

TEST_CASE("single-state enclosure contains the dense solution") {
  std::mt19937_64 rng(72);
  for (int rep = 0; rep < 10; ++rep) {
    SparseMatrix a = random_stable_sparse(100, 0.05, 0.3, rng);
    Vec x0 = random_vec(100, rng, 2.0);
    const double t = 0.4;
    XiPolicy policy;
    policy.fixed = 20;
    auto [state, err] = hom_point_single(a, x0, t, policy);
    Vec exact = taylor_expm(a.to_dense(), t) * x0;
    Vec gap = (exact - state).cwiseAbs();
    for (Index i = 0; i < 100; ++i) {
      CHECK(gap[i] <= err.radius()[i] + 1e-13 * x0.norm());
    }
  }
}

TEST_CASE("set propagation reduces to the single-state case for points") {
  std::mt19937_64 rng(73);
  SparseMatrix a = random_stable_sparse(50, 0.08, 0.3, rng);
  Vec x0 = random_vec(50, rng);
  const double t = 0.25;
  HomogeneousStepResult step = hom_point_set(a, Zonotope::point(x0), t);
  auto [state, err] = hom_point_single(a, x0, t);
  CHECK((step.mapped.center() - state).norm() == 0.0);
  CHECK(step.mapped.num_generators() == 0);
  CHECK((step.err.radius() - err.radius()).norm() == 0.0);
}

TEST_CASE("zero system matrix maps sets identically") {
  std::mt19937_64 rng(74);
  Zonotope z = random_zonotope(20, 4, rng);
  SparseMatrix a(20, 20);
  HomogeneousStepResult step = hom_point_set(a, z, 0.9);
  CHECK((step.mapped.center() - z.center()).norm() <= 1e-14);
  CHECK((step.mapped.generators() - z.generators()).norm() <= 1e-14);
  // A = 0 breaks down immediately with zero residual: no certificate error
  CHECK(step.err.radius().maxCoeff() == 0.0);
}

TEST_CASE("set enclosure contains sampled dense images") {
  std::mt19937_64 rng(75);
  SparseMatrix a = random_stable_sparse(60, 0.06, 0.3, rng);
  Zonotope z = random_zonotope(60, 5, rng);
  const double t = 0.3;
  XiPolicy policy;
  policy.fixed = 18;
  HomogeneousStepResult step = hom_point_set(a, z, t, policy);
  AbsorbedError combined = absorb_error(step, ErrorChannel::generators);
  Mat e = taylor_expm(a.to_dense(), t);
  for (int k = 0; k < 500; ++k) {
    Vec img = e * sample_member(z, rng);
    CHECK(contains_point(combined.set, img, 1e-9));
  }
}

TEST_CASE("error channels absorb identically shaped clouds") {
  std::mt19937_64 rng(76);
  SparseMatrix a = random_stable_sparse(40, 0.08, 0.2, rng);
  Zonotope z = random_zonotope(40, 3, rng);
  XiPolicy policy;
  policy.fixed = 10;
  HomogeneousStepResult step = hom_point_set(a, z, 0.5, policy);

  AbsorbedError gen = absorb_error(step, ErrorChannel::generators);
  AbsorbedError box = absorb_error(step, ErrorChannel::interval);
  CHECK(box.err.radius() == step.err.radius());
  CHECK(box.set.num_generators() == step.mapped.num_generators());
  CHECK(gen.err.radius().maxCoeff() == 0.0);

  // generator mode appends one axis generator per nonzero radius entry
  Index nonzero = 0;
  for (Index i = 0; i < 40; ++i) {
    if (step.err.radius()[i] > 0.0) ++nonzero;
  }
  CHECK(gen.set.num_generators() == step.mapped.num_generators() + nonzero);

  // both channels cover the same samples once the box is added back
  Zonotope box_as_set = minkowski_sum(box.set, interval_to_zonotope(box.err));
  Mat e = taylor_expm(a.to_dense(), 0.5);
  for (int k = 0; k < 200; ++k) {
    Vec img = e * sample_member(z, rng);
    CHECK(contains_point(gen.set, img, 1e-9));
    CHECK(contains_point(box_as_set, img, 1e-9));
  }
}

TEST_CASE("interval propagation encloses dense images of the box") {
  std::mt19937_64 rng(77);
  SparseMatrix a = random_stable_sparse(50, 0.06, 0.3, rng);
  Vec mid = random_vec(50, rng);
  Vec rad = random_vec(50, rng).cwiseAbs() * 0.2;
  IntervalVector iv(mid - rad, mid + rad);
  const double t = 0.35;
  IntervalVector out = interval_propagate(a, iv, t);
  Mat e = taylor_expm(a.to_dense(), t);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    Vec x = mid;
    for (Index i = 0; i < 50; ++i) x[i] += unit(rng) * rad[i];
    CHECK(out.contains(Vec(e * x), 1e-11));
  }

  // a point interval reduces to the single-state propagation
  IntervalVector point(mid, mid);
  IntervalVector pout = interval_propagate(a, point, t);
  auto [state, err] = hom_point_single(a, mid, t);
  CHECK((pout.midpoint() - state).norm() <= 1e-13 * state.norm());
  CHECK((pout.radius() - err.radius()).norm() <= 1e-13);
}

TEST_CASE("correction column matches the closed-form leading term") {
  // For the 1x1 matrix H = [1] the i-th series term is
  // (i^(-i/(i-1)) - i^(-1/(i-1))) delta^i / i!; with small delta the i = 2
  // term [-delta^2/4, 0]/2 dominates, so center -> -delta^2/16 and
  // radius -> delta^2/16 + Phi.
  Mat h(1, 1);
  h << 1.0;
  const double delta = 1e-3;
  auto [center, radius] = correction_column(h, delta);
  CHECK(center[0] == doctest::Approx(-delta * delta / 16.0).epsilon(1e-2));
  CHECK(radius[0] == doctest::Approx(delta * delta / 16.0).epsilon(1e-2));

  // zero H: no curvature at all
  auto [c0, r0] = correction_column(Mat(Mat::Zero(3, 3)), 0.5);
  CHECK(c0.norm() == 0.0);
  CHECK(r0.norm() == 0.0);
}

TEST_CASE("correction matrix encloses the chord gap") {
  std::mt19937_64 rng(78);
  const double delta = 0.2;
  for (int rep = 0; rep < 20; ++rep) {
    Mat h = testsupport::random_hessenberg(8, rng, 1.5);
    IntervalMatrix f = correction_matrix(h, delta);
    Mat ed = taylor_expm(h, delta);
    Vec e1 = Vec::Zero(8);
    e1[0] = 1.0;
    IntervalVector col = f.multiply(e1);
    for (int s = 0; s <= 20; ++s) {
      const double t = delta * s / 20.0;
      Vec gap = taylor_expm(h, t) * e1 - e1 - (t / delta) * (ed * e1 - e1);
      CHECK(col.contains(gap, 1e-12));
    }
  }
}

TEST_CASE("correction term demands a feasible Taylor order") {
  Mat h(1, 1);
  h << 1.0;
  EtaPolicy tiny;
  tiny.cap = 2;
  // |H| delta / (eta + 2) < 0.5 fails for all eta <= 2 when delta = 10
  CHECK_THROWS_AS(correction_matrix(h, 10.0, tiny), CertificateFailure);
  CHECK(taylor_order(1.0, EtaPolicy{}) == 2);
  CHECK(taylor_remainder(0.5, 3) > 0.0);
}

TEST_CASE("time-interval enclosure contains in-step trajectories") {
  std::mt19937_64 rng(79);
  SparseMatrix a = random_stable_sparse(30, 0.1, 0.4, rng);
  Mat ad = a.to_dense();
  Zonotope z = Zonotope::point(random_vec(30, rng, 2.0));
  const double delta = 0.15;
  HomogeneousStepResult step = hom_point_set(a, z, delta);
  Zonotope tube = time_interval_set(a, z, step, delta);
  for (int k = 0; k < 40; ++k) {
    const double t = delta * k / 39.0;
    Vec x = taylor_expm(ad, t) * z.center();
    CHECK(contains_point(tube, x, 1e-9));
  }
}

TEST_CASE("time-interval enclosure covers a set of starting states") {
  std::mt19937_64 rng(80);
  SparseMatrix a = random_stable_sparse(25, 0.12, 0.3, rng);
  Mat ad = a.to_dense();
  Zonotope z = random_zonotope(25, 4, rng);
  const double delta = 0.2;
  HomogeneousStepResult step = hom_point_set(a, z, delta);
  Zonotope tube = time_interval_set(a, z, step, delta);
  for (int k = 0; k < 300; ++k) {
    Vec x0 = sample_member(z, rng);
    const double t = delta * (k % 25) / 24.0;
    CHECK(contains_point(tube, Vec(taylor_expm(ad, t) * x0), 1e-9));
  }

  // A = 0: trajectories stand still, the tube must hold the initial set
  SparseMatrix zero(25, 25);
  HomogeneousStepResult still = hom_point_set(zero, z, delta);
  Zonotope tube0 = time_interval_set(zero, z, still, delta);
  for (int k = 0; k < 100; ++k) {
    CHECK(contains_point(tube0, sample_member(z, rng), 1e-9));
  }
}

TEST_CASE("curvature box is centered for symmetric generator seeds") {
  // A pure generator contributes +/- g symmetrically, so the collapsed
  // curvature box of a zero-centered set must have zero center.
  std::mt19937_64 rng(81);
  SparseMatrix a = random_stable_sparse(12, 0.3, 0.2, rng);
  Zonotope z(Vec::Zero(12), random_zonotope(12, 3, rng).generators());
  const double delta = 0.25;
  HomogeneousStepResult step = hom_point_set(a, z, delta);
  TimeIntervalParts parts = time_interval_parts(a, z, step, delta);
  CHECK(parts.curvature.midpoint().norm() == 0.0);
  CHECK(parts.curvature.radius().minCoeff() >= 0.0);
}

TEST_CASE("curvature shrinks quadratically with the step width") {
  std::mt19937_64 rng(82);
  SparseMatrix a = random_stable_sparse(20, 0.15, 0.3, rng);
  Zonotope z = random_zonotope(20, 2, rng);
  auto curvature_radius = [&](double delta) {
    HomogeneousStepResult step = hom_point_set(a, z, delta);
    return time_interval_parts(a, z, step, delta).curvature.radius().maxCoeff();
  };
  const double wide = curvature_radius(0.2);
  const double narrow = curvature_radius(0.02);
  CHECK(wide >= 100.0 * narrow * (1.0 - 1e-6));
}

TEST_CASE("certificate error grows with time and seed magnitude") {
  std::mt19937_64 rng(83);
  SparseMatrix a = random_stable_sparse(40, 0.08, 0.3, rng);
  Vec x0 = random_vec(40, rng);
  XiPolicy policy;
  policy.fixed = 8;
  double prev = -1.0;
  for (double t : {0.1, 0.2, 0.4, 0.8}) {
    auto [state, err] = hom_point_single(a, x0, t, policy);
    const double radius = err.radius().maxCoeff();
    CHECK(radius >= prev);
    prev = radius;
  }
  auto [s1, e1] = hom_point_single(a, x0, 0.5, policy);
  auto [s2, e2] = hom_point_single(a, Vec(3.0 * x0), 0.5, policy);
  CHECK(e2.radius().maxCoeff() ==
        doctest::Approx(3.0 * e1.radius().maxCoeff()).epsilon(1e-12));
}

TEST_CASE("strict mode widens the tube by the step error") {
  std::mt19937_64 rng(84);
  SparseMatrix a = random_stable_sparse(15, 0.2, 0.3, rng);
  Zonotope z = random_zonotope(15, 2, rng);
  const double delta = 0.2;
  XiPolicy policy;
  policy.fixed = 6;
  HomogeneousStepResult step = hom_point_set(a, z, delta, policy);
  Zonotope plain = time_interval_set(a, z, step, delta, EtaPolicy{}, false);
  Zonotope strict = time_interval_set(a, z, step, delta, EtaPolicy{}, true);
  std::mt19937_64 dir_rng(1);
  CHECK(testsupport::support_excess(plain, strict, 60, dir_rng) <= 1e-12);
  CHECK(strict.num_generators() >= plain.num_generators());
}
