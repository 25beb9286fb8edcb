#pragma once

#include <Eigen/Dense>

namespace mgsgrf {

// Row-major throughout: samplers and distance kernels work on contiguous rows.
using MatrixRd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixRi = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

}  // namespace mgsgrf
