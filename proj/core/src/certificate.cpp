#include "kreach/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "kreach/elliptic.hpp"

namespace kreach {

namespace {

// E(m) - (1-m)K(m); strictly increasing from 0 to 1 on [0,1]. The direct
// difference cancels catastrophically for small m, so a series kicks in.
double elliptic_mu(double m) {
  if (m < 1e-5) {
    const double pi_half = std::numbers::pi / 2.0;
    return pi_half * (0.5 * m + m * m / 16.0 + 3.0 * m * m * m / 128.0);
  }
  const auto [k, e] = elliptic_KE(m);
  return e - (1.0 - m) * k;
}

// Factorial bound as a rate covering horizon t_max: the underlying error
// bound 2 (|C| s)^xi e^(|C| s) / xi! is superlinear, so dividing its value
// at T = t_max by T gives a rate valid for every s <= T. Evaluating at the
// actual horizon (rather than a unit floor) keeps the exponential factor
// e^(|C| T) finite for stiff systems stepped with small delta.
double saad_rate(double norm_c, Index xi, double t_max) {
  if (norm_c == 0.0 || t_max <= 0.0) return 0.0;
  const double t_cover = t_max;
  const double log_eps = std::log(2.0) + static_cast<double>(xi) * std::log(norm_c) +
                         norm_c * t_cover - std::lgamma(static_cast<double>(xi) + 1.0) +
                         (static_cast<double>(xi) - 1.0) * std::log(t_cover);
  return std::exp(log_eps);
}

ErrorCertificate saad_certificate(const SpectralBounds& bounds, double norm_c,
                                  Index xi) {
  ErrorCertificate cert;
  cert.method = ErrorCertificate::Method::saad_fallback;
  cert.bounds = bounds;
  cert.eps_norm = saad_rate(norm_c, xi, 1.0);
  cert.xi = xi;
  cert.norm_two = norm_c;
  return cert;
}

} // namespace

double certified_rate(const ErrorCertificate& cert, double t) {
  const double fallback = saad_rate(cert.norm_two, cert.xi, t);
  if (cert.method == ErrorCertificate::Method::appendix_b)
    return std::min(cert.eps_norm, fallback);
  return fallback;
}

std::pair<double, double> solve_nu_m(const SpectralBounds& bounds) {
  if (!(bounds.b > bounds.a))
    throw std::domain_error("solve_nu_m: requires b > a");
  const double width = bounds.b - bounds.a;
  const double c = std::max(bounds.c, 1e-14 * width);

  const auto residual = [&](double m) {
    return elliptic_mu(m) / c - elliptic_mu(1.0 - m) / (0.5 * width);
  };

  double lo = 1e-14, hi = 1.0 - 1e-14;
  double f_lo = residual(lo), f_hi = residual(hi);
  if (!(f_lo < 0.0) || !(f_hi > 0.0))
    throw std::domain_error("solve_nu_m: no bracket on (0,1)");

  const double stop = 1e-13 * std::max({1.0, 1.0 / c, 2.0 / width});
  double best_m = 0.5, best_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = residual(mid);
    if (std::abs(f) < best_res) {
      best_res = std::abs(f);
      best_m = mid;
    }
    if (std::abs(f) <= stop) break;
    if (f < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return {best_m, elliptic_mu(best_m) / c};
}

double optimize_q(Index xi, double nu, double m) {
  if (xi < 2) throw std::invalid_argument("optimize_q: xi must be >= 2");
  if (!(nu > 0.0)) throw std::invalid_argument("optimize_q: nu must be positive");
  if (!(m > 0.0 && m < 1.0))
    throw std::invalid_argument("optimize_q: m must lie in (0,1)");

  const double c_tilde = 1.0 / (2.0 * nu);
  const auto res_fn = [&](double q) {
    const double one_q2 = 1.0 - q * q;
    return (static_cast<double>(xi) - 1.0) * q +
           (2.0 - static_cast<double>(xi)) * q * q -
           c_tilde * (1.0 - q) * std::sqrt(one_q2 * one_q2 + 4.0 * m * q * q);
  };

  const double stop = 4.0 * std::numeric_limits<double>::epsilon() *
                      std::max({1.0, static_cast<double>(xi), c_tilde});
  double q = 0.0, q_lo = 0.0, q_hi = 1.0;
  double best_q = 0.5, best_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double res = res_fn(q);
    if (std::abs(res) < best_res && q > 0.0 && q < 1.0) {
      best_res = std::abs(res);
      best_q = q;
    }
    if (std::abs(res) <= stop && q > 0.0 && q < 1.0) break;
    if (res < 0.0) {
      q_lo = q;
      q = 0.5 * (q + q_hi);
    } else {
      q_hi = q;
      q = 0.5 * (q + q_lo);
    }
  }
  return best_q;
}

ErrorCertificate epsilon_norm(const SpectralBounds& bounds, double norm_two_upper,
                              Index xi) {
  if (xi < 1) throw std::invalid_argument("epsilon_norm: xi must be >= 1");

  const double width = bounds.b - bounds.a;
  if (xi < 2 || !(width > 0.0) || norm_two_upper == 0.0)
    return saad_certificate(bounds, norm_two_upper, xi);

  SpectralBounds eff = bounds;
  eff.c = std::max(bounds.c, 1e-14 * width);

  double m = 0.0, nu = 0.0, q = 0.0;
  try {
    std::tie(m, nu) = solve_nu_m(eff);
    q = optimize_q(xi, nu, m);
  } catch (const std::exception&) {
    return saad_certificate(bounds, norm_two_upper, xi);
  }
  if (!(q > 0.0 && q < 1.0) || !(nu > 0.0))
    return saad_certificate(bounds, norm_two_upper, xi);

  const double exponent = -(bounds.a - (1.0 / q - q) / (2.0 * nu));
  const double log_eps = std::log(22.16) + std::log(norm_two_upper) +
                         (static_cast<double>(xi) - 1.0) * std::log(q) -
                         std::log1p(-q) + exponent;
  const double eps = std::exp(log_eps);
  if (!std::isfinite(eps))
    return saad_certificate(bounds, norm_two_upper, xi);

  ErrorCertificate cert;
  cert.method = ErrorCertificate::Method::appendix_b;
  cert.bounds = bounds;
  cert.m = m;
  cert.nu = nu;
  cert.q = q;
  cert.eps_norm = eps;
  cert.xi = xi;
  cert.norm_two = norm_two_upper;
  return cert;
}

ErrorCertificate epsilon_norm(const SparseMatrix& c, Index xi) {
  if (c.rows() != c.cols())
    throw std::invalid_argument("epsilon_norm: matrix must be square");
  return epsilon_norm(spectral_bounds(c), c.two_norm_upper(), xi);
}

ChosenDimension choose_dimension(const SparseMatrix& c, double target_eps,
                                 double t_horizon, Index xi_cap) {
  if (!(target_eps > 0.0))
    throw std::invalid_argument("choose_dimension: target must be positive");
  if (c.rows() != c.cols())
    throw std::invalid_argument("choose_dimension: matrix must be square");
  if (t_horizon < 0.0)
    throw std::invalid_argument("choose_dimension: negative horizon");

  const Index n = c.rows();
  const Index cap = std::min(std::max<Index>(xi_cap, 1), n);
  const SpectralBounds bounds = spectral_bounds(c);
  const double norm_c = c.two_norm_upper();

  const auto meets = [&](Index xi) {
    if (xi >= n) return true;  // full space: breakdown residual takes over
    const ErrorCertificate cert = epsilon_norm(bounds, norm_c, xi);
    return certified_rate(cert, t_horizon) * t_horizon <= target_eps;
  };

  Index hi = 2;
  bool found = false;
  while (true) {
    if (hi >= cap) {
      hi = cap;
      found = meets(cap);
      break;
    }
    if (meets(hi)) {
      found = true;
      break;
    }
    hi = std::min(cap, 2 * hi);
  }

  ChosenDimension out;
  if (!found) {
    out.xi = cap;
    out.cert = epsilon_norm(bounds, norm_c, cap);
    out.target_met = false;
    return out;
  }

  Index lo = std::max<Index>(1, hi / 2);
  while (lo + 1 < hi) {
    const Index mid = lo + (hi - lo) / 2;
    if (meets(mid))
      hi = mid;
    else
      lo = mid;
  }
  // fix any local non-monotonicity left by the bisection
  while (hi > 1 && meets(hi - 1)) --hi;

  out.xi = hi;
  out.cert = epsilon_norm(bounds, norm_c, hi);
  out.target_met = true;
  return out;
}

} // namespace kreach
