#pragma once

#include <span>

#include "gridconc/admittance.hpp"
#include "gridconc/spectra.hpp"
#include "gridconc/topology.hpp"

namespace gridconc {

/// Flat-start Jacobian of the power flow equations,
///   F = [[G, -B], [-B, -G]],  G = A^T diag(g) A,  B = A^T diag(b) A,
/// the operator of the linear coupled power flow [p; q] = F [eps; theta].
struct FlatStartJacobian {
  RealMatrix g_matrix;
  RealMatrix b_matrix;
  RealMatrix f;
  bool reduced = false;

  std::size_t size() const { return static_cast<std::size_t>(g_matrix.rows()); }
};

/// Throws on a length mismatch, or if reduced is requested without a reference node.
FlatStartJacobian flat_start_jacobian(const Topology& t, std::span<const LineAdmittance> lines,
                                      bool reduced);

/// Resistance and reactance blocks of the closed-form inverse
///   F^{-1} = [[R, X], [X, -R]].
struct ImpedanceBlocks {
  RealMatrix r_matrix;
  RealMatrix x_matrix;

  RealMatrix inverse() const;
};

/// S = G + B G^{-1} B, R = S^{-1}, X = -S^{-1} B G^{-1}. Needs G nonsingular.
ImpedanceBlocks schur_inverse(const FlatStartJacobian& jac);

/// R = A^{-1} diag(r) A^{-T}, X = A^{-1} diag(x) A^{-T} with
/// r_l = g_l / (g_l^2 + b_l^2), x_l = -b_l / (g_l^2 + b_l^2) and A the
/// square reduced incidence of a tree.
ImpedanceBlocks line_space_inverse(const Topology& t, std::span<const LineAdmittance> lines);

/// Closed-form tree inversion. Computes both routes and throws
/// std::runtime_error if they disagree by more than `agreement_tol`.
/// Throws std::invalid_argument if t is not a tree, jac is unreduced, or
/// some g_l <= 0.
ImpedanceBlocks invert_tree_lcpf(const FlatStartJacobian& jac, const Topology& t,
                                 std::span<const LineAdmittance> lines,
                                 double agreement_tol = 1e-9);

struct LcpfSolution {
  Eigen::VectorXd epsilon;
  Eigen::VectorXd theta;
};

/// eps = R p + X q, theta = X p - R q.
LcpfSolution lcpf_solve(const ImpedanceBlocks& inv, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& q);

/// Dense LU solve of F [eps; theta] = [p; q]. Throws std::runtime_error if F
/// is singular (condition number above 1e12).
LcpfSolution lcpf_solve(const FlatStartJacobian& jac, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& q);

/// Tree path when t is a tree with all g_l > 0 and jac is reduced,
/// dense fallback otherwise.
LcpfSolution lcpf_solve(const FlatStartJacobian& jac, const Topology& t,
                        std::span<const LineAdmittance> lines, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& q);

/// ||F [eps; theta] - [p; q]|| / ||[p; q]|| (absolute when the rhs is zero).
double lcpf_residual(const FlatStartJacobian& jac, const LcpfSolution& sol,
                     const Eigen::VectorXd& p, const Eigen::VectorXd& q);

}  // namespace gridconc
