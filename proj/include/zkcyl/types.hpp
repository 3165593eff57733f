#pragma once

#include <complex>

#include <Eigen/Dense>

namespace zkcyl {

using Complex = std::complex<double>;

/// Row-major so that one x-node (or one wavenumber) is a contiguous
/// transverse vector.
using RealMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using DenseMatrix = Eigen::MatrixXd;
using DenseComplexMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double pi = 3.14159265358979323846;

}  // namespace zkcyl
