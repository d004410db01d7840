#pragma once

#include <complex>

#include <Eigen/Dense>

namespace secbeam {

template <typename Real>
using CxVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using CxMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using CxVector = CxVectorT<double>;
using CxMatrix = CxMatrixT<double>;
using RealVector = RealVectorT<double>;

}  // namespace secbeam
