#pragma once

#include "gridconc/admittance.hpp"
#include "gridconc/bounds.hpp"

namespace gridconc {

using ComplexVector = Eigen::VectorXcd;

/// s = diag(u) conj(Y u).
ComplexVector power_flow_map(const AdmittanceMatrix& y, const ComplexVector& u);

/// Frechet derivative of the power flow map at u applied to h:
///   diag(h) conj(Y u) + diag(u) conj(Y h).
ComplexVector power_flow_derivative(const AdmittanceMatrix& y, const ComplexVector& u,
                                    const ComplexVector& h);

/// A point (u, s) on the power flow manifold, s = Psi_Y(u).
class ManifoldPoint {
 public:
  /// s is computed from u.
  ManifoldPoint(const AdmittanceMatrix& y, ComplexVector u);
  /// Throws std::invalid_argument if ||s - Psi_Y(u)|| > 1e-12.
  ManifoldPoint(const AdmittanceMatrix& y, ComplexVector u, ComplexVector s);

  const ComplexVector& u() const { return u_; }
  const ComplexVector& s() const { return s_; }

 private:
  ComplexVector u_;
  ComplexVector s_;
};

/// Step h along the tangent space at `base`; the tangent point is
/// (u + h, s + D Psi(u)[h]).
struct TangentStep {
  ManifoldPoint base;
  ComplexVector h;
};

/// Exact second-order remainder diag(h) conj(Y h) of the linearized step.
ComplexVector tangent_residual(const AdmittanceMatrix& y, const TangentStep& step);

/// Psi(u + h) - (Psi(u) + D Psi(u)[h]) by direct subtraction; equals
/// tangent_residual up to rounding since the map is quadratic.
ComplexVector tangent_residual_direct(const AdmittanceMatrix& y, const TangentStep& step);

/// Distance from the tangent point to the manifold point sharing its voltage,
/// ||s_bar - Psi(u + h)||. An upper proxy for dist(z_bar, M_PF).
double same_voltage_distance(const AdmittanceMatrix& y, const TangentStep& step);

enum class DistanceMode { holder, crude };

/// holder: 3 ||h||_inf ||h||_2 ||Y||;  crude: 3 ||h||_2^2 ||Y||.
double distance_bound(const ComplexVector& h, double y_norm, DistanceMode mode = DistanceMode::holder);

/// 3 ||h||_inf ||h||_2 * source.value, where source bounds E||Y|| (the
/// fixed-topology expectation bound) or, for lossless contingency networks
/// where ||Y|| = ||B||, the contingency expectation bound. Throws on any
/// other bound kind.
BoundReport expected_distance_bound(const ComplexVector& h, const BoundReport& source);

}  // namespace gridconc
