#pragma once

#include "kreach/types.hpp"

namespace kreach {

// Controls the reduced dimension used for exponential actions.
struct XiPolicy {
  double target_eps = 1e-12;   // required eps_norm * horizon per step
  Index cap = 200;             // never exceed this reduced dimension
  Index fixed = 0;             // > 0: use min(fixed, n), skip the search
  double breakdown_tol = 1e-14;
};

// Controls the Taylor order of correction/remainder terms. The remainder
// contraction factor eps = |H|_inf * delta / (eta + 2) must stay below
// eps_max; eta is the smallest admissible value up to cap.
struct EtaPolicy {
  Index cap = 64;
  double eps_max = 0.5;
};

enum class ErrorChannel { generators, interval };
enum class InputMode { constant, varying };

} // namespace kreach
