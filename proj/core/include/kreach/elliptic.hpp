#pragma once

#include <utility>

namespace kreach {

// Complete elliptic integrals K(m), E(m) in the parameter convention
//   K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt,
//   E(m) = int_0^{pi/2} (1 - m sin^2 t)^{ 1/2} dt,
// evaluated with the arithmetic-geometric mean, absolute error below 1e-13.
// Domain: 0 <= m < 1 for K, 0 <= m <= 1 for E (K(1) would diverge; m = 1
// returns {inf, 1}).
std::pair<double, double> elliptic_KE(double m);

} // namespace kreach
