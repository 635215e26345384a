#include "kreach/expm.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/LU>

namespace kreach {

Mat small_expm(const Mat& h, Index max_dim) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("small_expm: matrix must be square");
  if (h.rows() > max_dim)
    throw std::invalid_argument("small_expm: dimension exceeds configured cap");
  if (!h.allFinite())
    throw std::invalid_argument("small_expm: non-finite entries");

  const Index n = h.rows();
  if (n == 0) return Mat(0, 0);

  // Higham's degree-13 coefficients; theta_13 keeps the backward error of
  // the Pade approximant near the double rounding level.
  static const double b[] = {64764752532480000.0, 32382376266240000.0,
                             7771770303897600.0,  1187353796428800.0,
                             129060195264000.0,   10559470521600.0,
                             670442572800.0,      33522128640.0,
                             1323241920.0,        40840800.0,
                             960960.0,            16380.0,
                             182.0,               1.0};
  const double theta13 = 5.371920351148152;

  const double norm = h.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  Mat a = h;
  if (norm > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / theta13)));
    a /= std::exp2(squarings);
  }

  const Mat eye = Mat::Identity(n, n);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a2 * a4;
  const Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                     b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye);
  const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;

  Mat f = (v - u).partialPivLu().solve(v + u);
  for (int s = 0; s < squarings; ++s) f = f * f;
  return f;
}

Mat small_expm(const Mat& h, double t, Index max_dim) {
  return small_expm(Mat(t * h), max_dim);
}

} // namespace kreach
