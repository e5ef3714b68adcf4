#pragma once

#include <Eigen/Dense>

namespace syre {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

}  // namespace syre
