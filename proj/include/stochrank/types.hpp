#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace stochrank {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using VectorRef = Eigen::Ref<Vector>;
using ConstVectorRef = Eigen::Ref<const Vector>;

// Feature rows are accessed document-at-a-time, so rows are contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixRef = Eigen::Ref<const Matrix>;

using Permutation = std::vector<Index>;

}  // namespace stochrank
