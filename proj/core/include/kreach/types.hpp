#pragma once

#include <Eigen/Dense>

namespace kreach {

using Index = Eigen::Index;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

} // namespace kreach
