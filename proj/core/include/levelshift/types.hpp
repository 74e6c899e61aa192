#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace levelshift {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Kets are plain complex column vectors; normalization is explicit.
using StateVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

}  // namespace levelshift
