#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "secbeam/types.hpp"

namespace secbeam {

// Dense Hermitian matrix with construction-time validation.  Asymmetry above
// asym_tol relative to the largest entry magnitude is an error; below it the
// stored matrix is the Hermitian part (m + m^H)/2.
template <typename Real = double>
class HermitianMatrix {
 public:
  using Matrix = CxMatrixT<Real>;

  HermitianMatrix() = default;

  template <typename Derived>
  explicit HermitianMatrix(const Eigen::MatrixBase<Derived>& m,
                           Real asym_tol = Real(1e-12)) {
    if (m.rows() != m.cols()) {
      throw std::invalid_argument("HermitianMatrix: matrix must be square");
    }
    if (m.rows() == 0) {
      throw std::invalid_argument("HermitianMatrix: dimension must be >= 1");
    }
    Matrix dense = m;
    const Real scale = dense.cwiseAbs().maxCoeff();
    const Real asym = (dense - dense.adjoint()).cwiseAbs().maxCoeff();
    if (scale > Real(0) && asym > asym_tol * scale) {
      throw std::invalid_argument("HermitianMatrix: input is not Hermitian");
    }
    m_ = Real(0.5) * (dense + dense.adjoint());
  }

  const Matrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  Matrix m_;
};

using HermitianXcd = HermitianMatrix<double>;

template <typename Real = double>
struct EigenDecomposition {
  RealVectorT<Real> eigenvalues;  // sorted descending
  CxMatrixT<Real> eigenvectors;   // unitary, column i pairs with eigenvalue i
};

// Full eigendecomposition m = U diag(w) U^H with w sorted descending.
template <typename Real>
EigenDecomposition<Real> evd(const HermitianMatrix<Real>& m) {
  Eigen::SelfAdjointEigenSolver<CxMatrixT<Real>> es(m.matrix());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("evd: eigensolver did not converge");
  }
  EigenDecomposition<Real> out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

// Moore-Penrose inverse through the eigendecomposition.  Eigenvalues with
// |w| <= rank_tol * max|w| are treated as zero.
template <typename Real>
CxMatrixT<Real> pseudo_inverse(const HermitianMatrix<Real>& m,
                               Real rank_tol = Real(1e-9)) {
  const EigenDecomposition<Real> d = evd(m);
  const Real wmax = d.eigenvalues.cwiseAbs().maxCoeff();
  const Real thresh = rank_tol * wmax;
  RealVectorT<Real> inv = RealVectorT<Real>::Zero(d.eigenvalues.size());
  for (Eigen::Index i = 0; i < d.eigenvalues.size(); ++i) {
    if (std::abs(d.eigenvalues[i]) > thresh) {
      inv[i] = Real(1) / d.eigenvalues[i];
    }
  }
  return d.eigenvectors * inv.asDiagonal() * d.eigenvectors.adjoint();
}

template <typename Real = double>
struct PsdCheck {
  Real min_eigenvalue;
  bool psd;
};

// Positive semidefiniteness check.  psd is true when the smallest eigenvalue
// is >= -tol * max(1, max|w|).
template <typename Real>
PsdCheck<Real> is_psd(const HermitianMatrix<Real>& m, Real tol = Real(1e-9)) {
  Eigen::SelfAdjointEigenSolver<CxMatrixT<Real>> es(m.matrix(),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("is_psd: eigensolver did not converge");
  }
  const Real wmin = es.eigenvalues().minCoeff();
  const Real wmax = es.eigenvalues().cwiseAbs().maxCoeff();
  return {wmin, wmin >= -tol * std::max(Real(1), wmax)};
}

// Feasibility of the bordered block [[a, b], [b^H, c]] >= 0 through the
// generalized Schur complement: requires a >= 0, c - b^H a^+ b >= -tol and
// the range condition ||(I - a a^+) b|| <= tol * ||b||.
template <typename Real>
bool generalized_schur_feasible(const HermitianMatrix<Real>& a,
                                const CxVectorT<Real>& b, Real c,
                                Real rank_tol = Real(1e-9),
                                Real tol = Real(1e-9)) {
  if (b.size() != a.dim()) {
    throw std::invalid_argument("generalized_schur_feasible: size mismatch");
  }
  const EigenDecomposition<Real> d = evd(a);
  const Real wmax = d.eigenvalues.cwiseAbs().maxCoeff();
  if (d.eigenvalues.minCoeff() < -tol * std::max(Real(1), wmax)) {
    return false;  // top-left block itself indefinite
  }
  const Real thresh = rank_tol * wmax;
  const CxVectorT<Real> beta = d.eigenvectors.adjoint() * b;
  Real schur = c;
  Real outside2 = Real(0);  // squared norm of b outside range(a)
  for (Eigen::Index i = 0; i < beta.size(); ++i) {
    const Real mag2 = std::norm(beta[i]);
    if (std::abs(d.eigenvalues[i]) > thresh) {
      schur -= mag2 / d.eigenvalues[i];
    } else {
      outside2 += mag2;
    }
  }
  const Real bnorm = b.norm();
  return std::sqrt(outside2) <= tol * bnorm && schur >= -tol;
}

}  // namespace secbeam
