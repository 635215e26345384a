#include "kreach/elliptic.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kreach {

std::pair<double, double> elliptic_KE(double m) {
  if (!(m >= 0.0 && m <= 1.0))
    throw std::invalid_argument("elliptic_KE: parameter must lie in [0, 1]");
  if (m == 1.0)
    return {std::numeric_limits<double>::infinity(), 1.0};

  double a = 1.0;
  double b = std::sqrt(1.0 - m);
  double c = std::sqrt(m);
  double sum = 0.5 * c * c;  // 2^(n-1) c_n^2 accumulated from n = 0
  double pow2 = 0.5;
  for (int n = 0; n < 64 && c > 1e-17 * a; ++n) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    c = 0.5 * (a - b);
    a = an;
    b = bn;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  const double k = std::numbers::pi / (2.0 * a);
  const double e = k * (1.0 - sum);
  return {k, e};
}

} // namespace kreach
