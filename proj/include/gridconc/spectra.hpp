#pragma once

#include <complex>

#include <Eigen/Dense>

namespace gridconc {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

/// Max-abs asymmetry accepted as Hermitian.
inline constexpr double kHermitianTol = 1e-10;

/// Largest |m_ij - conj(m_ji)|; infinity for non-square input.
double hermitian_defect(const DenseMatrix& m);
double hermitian_defect(const RealMatrix& m);

/// Largest singular value. Hermitian input (within kHermitianTol) goes through
/// the symmetric eigensolver, everything else through an SVD.
/// Throws std::invalid_argument on NaN/Inf entries.
double operator_norm(const DenseMatrix& m);
double operator_norm(const RealMatrix& m);

/// Always the SVD path; used to cross-check the eigensolver route.
double operator_norm_svd(const DenseMatrix& m);

/// Ascending eigenvalues of (M + M*)/2. Throws if M is not Hermitian within tol.
Eigen::VectorXd hermitian_eigenvalues(const DenseMatrix& m, double tol = kHermitianTol);
Eigen::VectorXd hermitian_eigenvalues(const RealMatrix& m, double tol = kHermitianTol);

/// tr(M) / ||M||. With psd set, rejects matrices with an eigenvalue below -1e-10.
double intrinsic_dimension(const DenseMatrix& m, bool psd);
double intrinsic_dimension(const RealMatrix& m, bool psd);

/// True iff lambda_min(b - a) >= -tol, i.e. a is dominated by b in the PSD order.
bool psd_dominates(const DenseMatrix& a, const DenseMatrix& b, double tol);
bool psd_dominates(const RealMatrix& a, const RealMatrix& b, double tol);

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);
RealMatrix kron(const RealMatrix& a, const RealMatrix& b);

RealMatrix block_diag(const RealMatrix& a, const RealMatrix& b);

}  // namespace gridconc
