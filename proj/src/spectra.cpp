#include "gridconc/spectra.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace gridconc {

namespace {

template <class Matrix>
void require_finite(const Matrix& m) {
  if (!m.allFinite()) throw std::invalid_argument("matrix has NaN or Inf entries");
}

template <class Matrix>
double defect(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

template <class Matrix>
Eigen::VectorXd sym_eigenvalues(const Matrix& m, double tol) {
  require_finite(m);
  if (defect(m) > tol) throw std::invalid_argument("matrix is not Hermitian within tolerance");
  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return solver.eigenvalues();
}

template <class Matrix>
double svd_norm(const Matrix& m) {
  require_finite(m);
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

template <class Matrix>
double norm_impl(const Matrix& m) {
  require_finite(m);
  if (m.size() == 0) return 0.0;
  if (defect(m) <= kHermitianTol) {
    const Eigen::VectorXd ev = sym_eigenvalues(m, kHermitianTol);
    return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  }
  return svd_norm(m);
}

template <class Matrix>
double intdim_impl(const Matrix& m, bool psd) {
  require_finite(m);
  if (m.rows() != m.cols()) throw std::invalid_argument("intrinsic dimension needs a square matrix");
  if (psd) {
    const Eigen::VectorXd ev = sym_eigenvalues(m, kHermitianTol);
    if (ev(0) < -1e-10) throw std::invalid_argument("matrix is not positive semidefinite");
  }
  const double norm = norm_impl(m);
  if (norm == 0.0) throw std::invalid_argument("intrinsic dimension of the zero matrix");
  return std::real(Complex(m.trace())) / norm;
}

template <class Matrix>
bool dominates_impl(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("psd_dominates shape mismatch");
  }
  if (defect(a) > kHermitianTol || defect(b) > kHermitianTol) {
    throw std::invalid_argument("psd_dominates needs Hermitian arguments");
  }
  if (a.size() == 0) return true;
  return sym_eigenvalues(Matrix(b - a), kHermitianTol)(0) >= -tol;
}

template <class Matrix>
Matrix kron_impl(const Matrix& a, const Matrix& b) {
  require_finite(a);
  require_finite(b);
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

double hermitian_defect(const DenseMatrix& m) { return defect(m); }
double hermitian_defect(const RealMatrix& m) { return defect(m); }

double operator_norm(const DenseMatrix& m) { return norm_impl(m); }
double operator_norm(const RealMatrix& m) { return norm_impl(m); }
double operator_norm_svd(const DenseMatrix& m) { return svd_norm(m); }

Eigen::VectorXd hermitian_eigenvalues(const DenseMatrix& m, double tol) {
  return sym_eigenvalues(m, tol);
}
Eigen::VectorXd hermitian_eigenvalues(const RealMatrix& m, double tol) {
  return sym_eigenvalues(m, tol);
}

double intrinsic_dimension(const DenseMatrix& m, bool psd) { return intdim_impl(m, psd); }
double intrinsic_dimension(const RealMatrix& m, bool psd) { return intdim_impl(m, psd); }

bool psd_dominates(const DenseMatrix& a, const DenseMatrix& b, double tol) {
  return dominates_impl(a, b, tol);
}
bool psd_dominates(const RealMatrix& a, const RealMatrix& b, double tol) {
  return dominates_impl(a, b, tol);
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) { return kron_impl(a, b); }
RealMatrix kron(const RealMatrix& a, const RealMatrix& b) { return kron_impl(a, b); }

RealMatrix block_diag(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out = RealMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

}  // namespace gridconc
