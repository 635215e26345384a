#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "kreach/elliptic.hpp"
#include "kreach/expm.hpp"
#include "kreach/oracle.hpp"
#include "support.hpp"

using namespace kreach;
using testsupport::adaptive_simpson;
using testsupport::taylor_expm;

TEST_CASE("small_expm trivial cases") {
  CHECK((small_expm(Mat(Mat::Zero(3, 3))) - Mat::Identity(3, 3)).norm() <= 1e-15);

  Mat d(2, 2);
  d << 1, 0, 0, -1;
  Mat e = small_expm(d, 1.0);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));
  CHECK(e(1, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("small_expm matches the extended-precision Taylor oracle") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    Mat h(50, 50);
    for (Index i = 0; i < 50; ++i) {
      for (Index j = 0; j < 50; ++j) h(i, j) = unit(rng);
    }
    h /= 10.0;
    Mat got = small_expm(h, 1.7);
    Mat want = taylor_expm(h, 1.7);
    CHECK((got - want).norm() <= 1e-12 * want.norm());
  }
}

TEST_CASE("small_expm rejects oversized input") {
  CHECK_THROWS_AS(small_expm(Mat(Mat::Zero(10, 10)), 1.0, 5), std::invalid_argument);
}

TEST_CASE("dense_expm trivial cases and Taylor agreement") {
  CHECK((dense_expm(Mat(Mat::Zero(4, 4))) - Mat::Identity(4, 4)).norm() == 0.0);

  Mat nil(2, 2);
  nil << 0, 1, 0, 0;
  const double t = 2.5;
  Mat e = dense_expm(nil, t);
  CHECK(e(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e(0, 1) == doctest::Approx(t).epsilon(1e-15));
  CHECK(std::abs(e(1, 0)) <= 1e-16);
  CHECK(e(1, 1) == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Mat a(30, 30);
  for (Index i = 0; i < 30; ++i) {
    for (Index j = 0; j < 30; ++j) a(i, j) = unit(rng) / 6.0;
  }
  Mat got = dense_expm(a, 3.0);
  Mat want = taylor_expm(a, 3.0);
  CHECK((got - want).norm() <= 1e-12 * want.norm());
}

TEST_CASE("elliptic integrals at analytic points") {
  auto [k0, e0] = elliptic_KE(0.0);
  CHECK(k0 == doctest::Approx(M_PI / 2).epsilon(1e-15));
  CHECK(e0 == doctest::Approx(M_PI / 2).epsilon(1e-15));

  auto [k1, e1] = elliptic_KE(1.0);
  CHECK(std::isinf(k1));
  CHECK(e1 == doctest::Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_AS(elliptic_KE(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(elliptic_KE(1.1), std::invalid_argument);
}

TEST_CASE("elliptic integrals match adaptive quadrature") {
  for (double m : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    auto [k, e] = elliptic_KE(m);
    const double k_ref = adaptive_simpson(
        [m](double t) {
          const double s = std::sin(t);
          return 1.0 / std::sqrt(1.0 - m * s * s);
        },
        0.0, M_PI / 2, 1e-14);
    const double e_ref = adaptive_simpson(
        [m](double t) {
          const double s = std::sin(t);
          return std::sqrt(1.0 - m * s * s);
        },
        0.0, M_PI / 2, 1e-14);
    CHECK(std::abs(k - k_ref) <= 2e-13 * std::max(1.0, k_ref));
    CHECK(std::abs(e - e_ref) <= 2e-13);
  }
}

TEST_CASE("Legendre relation ties K and E together") {
  // E(m)K(1-m) + E(1-m)K(m) - K(m)K(1-m) = pi/2, a strong independent
  // identity over the whole parameter range.
  for (double m : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
    auto [km, em] = elliptic_KE(m);
    auto [kc, ec] = elliptic_KE(1.0 - m);
    CHECK(em * kc + ec * km - km * kc == doctest::Approx(M_PI / 2).epsilon(1e-13));
  }
}
