#pragma once

#include "kreach/types.hpp"

namespace kreach {

// Dense matrix exponential via degree-13 Pade approximation with scaling and
// squaring. Intended for the small projected matrices produced by the
// Krylov reduction; refuses inputs larger than `max_dim`.
Mat small_expm(const Mat& h, Index max_dim = 500);

// e^(h*t)
Mat small_expm(const Mat& h, double t, Index max_dim = 500);

} // namespace kreach
