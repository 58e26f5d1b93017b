#include "gridconc/lcpf.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include <Eigen/LU>
#include <Eigen/SVD>

namespace gridconc {

namespace {

constexpr double kConditionLimit = 1e12;

void split_lines(std::span<const LineAdmittance> lines, Eigen::VectorXd& g, Eigen::VectorXd& b) {
  g.resize(static_cast<Eigen::Index>(lines.size()));
  b.resize(static_cast<Eigen::Index>(lines.size()));
  for (std::size_t l = 0; l < lines.size(); ++l) {
    g(static_cast<Eigen::Index>(l)) = lines[l].g;
    b(static_cast<Eigen::Index>(l)) = lines[l].b;
  }
}

RealMatrix stack(const Eigen::VectorXd& top, const Eigen::VectorXd& bottom) {
  Eigen::VectorXd v(top.size() + bottom.size());
  v << top, bottom;
  return v;
}

}  // namespace

FlatStartJacobian flat_start_jacobian(const Topology& t, std::span<const LineAdmittance> lines,
                                      bool reduced) {
  if (lines.size() != t.num_edges()) {
    throw std::invalid_argument("expected " + std::to_string(t.num_edges()) + " lines, got " +
                                std::to_string(lines.size()));
  }
  Eigen::VectorXd g, b;
  split_lines(lines, g, b);
  FlatStartJacobian jac;
  jac.reduced = reduced;
  jac.g_matrix = weighted_laplacian(t, g, reduced);
  jac.b_matrix = weighted_laplacian(t, b, reduced);
  const auto n = jac.g_matrix.rows();
  jac.f.resize(2 * n, 2 * n);
  jac.f << jac.g_matrix, -jac.b_matrix, -jac.b_matrix, -jac.g_matrix;
  return jac;
}

RealMatrix ImpedanceBlocks::inverse() const {
  const auto n = r_matrix.rows();
  RealMatrix out(2 * n, 2 * n);
  out << r_matrix, x_matrix, x_matrix, -r_matrix;
  return out;
}

ImpedanceBlocks schur_inverse(const FlatStartJacobian& jac) {
  const Eigen::FullPivLU<RealMatrix> g_lu(jac.g_matrix);
  if (!g_lu.isInvertible()) throw std::invalid_argument("conductance Laplacian G is singular");
  const RealMatrix g_inv_b = g_lu.solve(jac.b_matrix);   // G^{-1} B
  const RealMatrix s = jac.g_matrix + jac.b_matrix * g_inv_b;
  const Eigen::FullPivLU<RealMatrix> s_lu(s);
  if (!s_lu.isInvertible()) throw std::invalid_argument("Schur complement is singular");
  ImpedanceBlocks out;
  out.r_matrix = s_lu.inverse();
  // B G^{-1} = (G^{-1} B)^T since G and B are symmetric.
  out.x_matrix = -out.r_matrix * g_inv_b.transpose();
  return out;
}

ImpedanceBlocks line_space_inverse(const Topology& t, std::span<const LineAdmittance> lines) {
  if (!is_tree(t)) throw std::invalid_argument("closed-form inverse needs a tree");
  if (!t.reference()) throw std::invalid_argument("closed-form inverse needs a reference node");
  if (lines.size() != t.num_edges()) throw std::invalid_argument("line count mismatch");
  const RealMatrix a = incidence_matrix(t, true).matrix;
  const Eigen::FullPivLU<RealMatrix> a_lu(a);
  if (!a_lu.isInvertible()) throw std::invalid_argument("reduced incidence is singular");
  const RealMatrix a_inv = a_lu.inverse();
  Eigen::VectorXd r(a.rows()), x(a.rows());
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const double g = lines[l].g;
    const double b = lines[l].b;
    const double mag2 = g * g + b * b;
    if (mag2 == 0.0) throw std::invalid_argument("line with zero admittance");
    r(static_cast<Eigen::Index>(l)) = g / mag2;
    x(static_cast<Eigen::Index>(l)) = -b / mag2;
  }
  ImpedanceBlocks out;
  out.r_matrix = a_inv * r.asDiagonal() * a_inv.transpose();
  out.x_matrix = a_inv * x.asDiagonal() * a_inv.transpose();
  return out;
}

ImpedanceBlocks invert_tree_lcpf(const FlatStartJacobian& jac, const Topology& t,
                                 std::span<const LineAdmittance> lines, double agreement_tol) {
  if (!jac.reduced) throw std::invalid_argument("tree inversion needs the reduced Jacobian");
  if (!is_tree(t)) throw std::invalid_argument("tree inversion needs a tree topology");
  for (const auto& line : lines) {
    if (!(line.g > 0.0)) throw std::invalid_argument("tree inversion needs every g_l > 0");
  }
  const ImpedanceBlocks schur = schur_inverse(jac);
  const ImpedanceBlocks closed = line_space_inverse(t, lines);
  const double diff = std::max((schur.r_matrix - closed.r_matrix).cwiseAbs().maxCoeff(),
                               (schur.x_matrix - closed.x_matrix).cwiseAbs().maxCoeff());
  if (diff > agreement_tol) {
    throw std::runtime_error("Schur and line-space inverses disagree by " + std::to_string(diff));
  }
  return closed;
}

LcpfSolution lcpf_solve(const ImpedanceBlocks& inv, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& q) {
  if (p.size() != inv.r_matrix.rows() || q.size() != inv.r_matrix.rows()) {
    throw std::invalid_argument("injection vector size mismatch");
  }
  return {inv.r_matrix * p + inv.x_matrix * q, inv.x_matrix * p - inv.r_matrix * q};
}

LcpfSolution lcpf_solve(const FlatStartJacobian& jac, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& q) {
  const auto n = static_cast<Eigen::Index>(jac.size());
  if (p.size() != n || q.size() != n) throw std::invalid_argument("injection vector size mismatch");
  const Eigen::VectorXd sv = Eigen::BDCSVD<RealMatrix>(jac.f).singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) == 0.0 ||
      sv(0) / sv(sv.size() - 1) > kConditionLimit) {
    throw std::runtime_error("linear power flow matrix is singular");
  }
  const Eigen::VectorXd x = jac.f.partialPivLu().solve(Eigen::VectorXd(stack(p, q)));
  return {x.head(n), x.tail(n)};
}

LcpfSolution lcpf_solve(const FlatStartJacobian& jac, const Topology& t,
                        std::span<const LineAdmittance> lines, const Eigen::VectorXd& p,
                        const Eigen::VectorXd& q) {
  const bool all_positive =
      std::all_of(lines.begin(), lines.end(), [](const LineAdmittance& l) { return l.g > 0.0; });
  if (jac.reduced && is_tree(t) && all_positive) {
    return lcpf_solve(invert_tree_lcpf(jac, t, lines), p, q);
  }
  return lcpf_solve(jac, p, q);
}

double lcpf_residual(const FlatStartJacobian& jac, const LcpfSolution& sol,
                     const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  const Eigen::VectorXd rhs = stack(p, q);
  const Eigen::VectorXd lhs = jac.f * Eigen::VectorXd(stack(sol.epsilon, sol.theta));
  const double scale = rhs.norm();
  const double res = (lhs - rhs).norm();
  return scale > 0.0 ? res / scale : res;
}

}  // namespace gridconc
