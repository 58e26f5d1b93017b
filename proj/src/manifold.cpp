#include "gridconc/manifold.hpp"

#include <stdexcept>

namespace gridconc {

namespace {

void check_size(const AdmittanceMatrix& y, const ComplexVector& v) {
  if (static_cast<std::size_t>(v.size()) != y.size()) {
    throw std::invalid_argument("vector dimension does not match admittance matrix");
  }
}

}  // namespace

ComplexVector power_flow_map(const AdmittanceMatrix& y, const ComplexVector& u) {
  check_size(y, u);
  return u.cwiseProduct((y.matrix() * u).conjugate());
}

ComplexVector power_flow_derivative(const AdmittanceMatrix& y, const ComplexVector& u,
                                    const ComplexVector& h) {
  check_size(y, u);
  check_size(y, h);
  return h.cwiseProduct((y.matrix() * u).conjugate()) + u.cwiseProduct((y.matrix() * h).conjugate());
}

ManifoldPoint::ManifoldPoint(const AdmittanceMatrix& y, ComplexVector u)
    : u_(std::move(u)), s_(power_flow_map(y, u_)) {}

ManifoldPoint::ManifoldPoint(const AdmittanceMatrix& y, ComplexVector u, ComplexVector s)
    : u_(std::move(u)), s_(std::move(s)) {
  check_size(y, s_);
  if ((s_ - power_flow_map(y, u_)).norm() > 1e-12) {
    throw std::invalid_argument("(u, s) is not on the power flow manifold");
  }
}

ComplexVector tangent_residual(const AdmittanceMatrix& y, const TangentStep& step) {
  check_size(y, step.h);
  return step.h.cwiseProduct((y.matrix() * step.h).conjugate());
}

ComplexVector tangent_residual_direct(const AdmittanceMatrix& y, const TangentStep& step) {
  const ComplexVector& u = step.base.u();
  const ComplexVector moved = power_flow_map(y, u + step.h);
  return moved - (step.base.s() + power_flow_derivative(y, u, step.h));
}

double same_voltage_distance(const AdmittanceMatrix& y, const TangentStep& step) {
  const ComplexVector s_bar = step.base.s() + power_flow_derivative(y, step.base.u(), step.h);
  return (s_bar - power_flow_map(y, step.base.u() + step.h)).norm();
}

double distance_bound(const ComplexVector& h, double y_norm, DistanceMode mode) {
  if (!(y_norm >= 0.0)) throw std::invalid_argument("operator norm must be >= 0");
  if (h.size() == 0) return 0.0;
  const double h2 = h.norm();
  if (mode == DistanceMode::crude) return 3.0 * h2 * h2 * y_norm;
  return 3.0 * h.cwiseAbs().maxCoeff() * h2 * y_norm;
}

BoundReport expected_distance_bound(const ComplexVector& h, const BoundReport& source) {
  if (source.kind != BoundKind::thm1_expectation && source.kind != BoundKind::thm2_expectation) {
    throw std::invalid_argument("expected distance needs a thm1 or thm2 expectation bound, got " +
                                to_string(source.kind));
  }
  BoundReport r;
  r.kind = BoundKind::manifold_distance;
  r.inputs = source.inputs;
  const double hinf = h.size() ? h.cwiseAbs().maxCoeff() : 0.0;
  const double h2 = h.norm();
  r.inputs["h_inf"] = hinf;
  r.inputs["h_2"] = h2;
  r.inputs["norm_bound"] = source.value;
  r.value = 3.0 * hinf * h2 * source.value;
  r.valid = source.valid;
  r.degenerate = source.degenerate;
  if (source.kind == BoundKind::thm1_expectation) {
    r.notes = "bounded admittances, source " + to_string(source.kind) +
              "; crude form 3||h||_2^2 * bound = " + std::to_string(3.0 * h2 * h2 * source.value);
  } else {
    r.notes = "lossless contingency network (||Y|| = ||B||), source " + to_string(source.kind) +
              " [" + source.notes + "]";
  }
  return r;
}

}  // namespace gridconc
