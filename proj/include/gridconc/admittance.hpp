#pragma once

#include <span>
#include <variant>
#include <vector>

#include "json.hpp"
#include "gridconc/rng.hpp"
#include "gridconc/spectra.hpp"
#include "gridconc/topology.hpp"

namespace gridconc {

/// Line admittance w = g + j b in per-unit.
struct LineAdmittance {
  double g = 0.0;
  double b = 0.0;

  Complex w() const { return {g, b}; }
  double magnitude() const { return std::hypot(g, b); }
};

/// Which 2x2 admittance block to pair with the elementary Laplacian:
/// lifted -> [[g, b], [b, -g]] (reconstructs the lifted admittance matrix),
/// jacobian -> [[g, -b], [-b, -g]] (reconstructs the flat-start Jacobian).
enum class BlockConvention { lifted, jacobian };

/// Line switched in with probability p, carrying admittance y when closed.
struct FixedBernoulli {
  Complex y{1.0, 0.0};
  double p = 1.0;
};

/// g = center_g + dg, b = center_b + db with dg, db iid uniform on [-delta, delta].
struct BoundedPerturbation {
  double center_g = 0.0;
  double center_b = 0.0;
  double delta = 0.0;
};

/// Conductances and susceptances drawn independently, each as a vector
/// uniform on the sphere {y : y^T y = radius_sq} in R^ambient_dim; the lines
/// take the first m coordinates. ambient_dim == 0 means ambient_dim = m, in
/// which case g^T g = b^T b = radius_sq exactly. Joint across all lines.
struct SphereUniform {
  double radius_sq = 0.5;
  std::size_t ambient_dim = 0;
};

struct FixedDeterministic {
  Complex y{1.0, 0.0};
};

/// Uniform on the complex disk of the given radius, reflected into the
/// quadrant g >= 0, b <= 0.
struct UnitDisk {
  double radius = 1.0;
};

using LineDistribution =
    std::variant<FixedBernoulli, BoundedPerturbation, SphereUniform, FixedDeterministic, UnitDisk>;

/// Throws std::invalid_argument on out-of-range parameters.
void validate(const LineDistribution& dist);

/// Largest |w| any draw can take.
double support_radius(const LineDistribution& dist);

/// Complex symmetric admittance (weighted Laplacian) of a topology.
class AdmittanceMatrix {
 public:
  AdmittanceMatrix(Topology topology, DenseMatrix y);

  const Topology& topology() const { return topology_; }
  const DenseMatrix& matrix() const { return y_; }
  RealMatrix conductance() const { return y_.real(); }
  RealMatrix susceptance() const { return y_.imag(); }
  std::size_t size() const { return static_cast<std::size_t>(y_.rows()); }

 private:
  Topology topology_;
  DenseMatrix y_;
};

/// (e_i - e_j)(e_i - e_j)^T in R^{n x n}.
RealMatrix elementary_laplacian(std::size_t i, std::size_t j, std::size_t n);

/// Y = sum_l w_l E_{i_l j_l}. Throws on length mismatch.
AdmittanceMatrix assemble_admittance(const Topology& t, std::span<const LineAdmittance> weights);

/// [[G, B], [B, -G]] with G = Re Y, B = Im Y.
RealMatrix lift_real(const AdmittanceMatrix& y);

RealMatrix admittance_block(double g, double b, BlockConvention convention);

/// admittance_block(g, b) (x) E_ij, of size 2n x 2n.
RealMatrix elementary_jacobian(double g, double b, std::size_t i, std::size_t j, std::size_t n,
                               BlockConvention convention);

/// One draw per line. Sphere entries must all share the same parameters.
std::vector<LineAdmittance> sample_weights(std::span<const LineDistribution> dists, Rng& rng);

/// Per-line mean admittance E w_l.
std::vector<LineAdmittance> mean_weights(std::span<const LineDistribution> dists);

AdmittanceMatrix expected_admittance(const Topology& t, std::span<const LineDistribution> dists);

/// Y - E Y.
DenseMatrix center(const AdmittanceMatrix& sample, const AdmittanceMatrix& expected);

/// Parses the line-distribution JSON object and broadcasts it to m lines.
/// Scalar parameters apply to every line; arrays give per-line values.
///   {"kind": "bernoulli", "p": 0.5, "y": [g, b]}
///   {"kind": "bounded", "g": 1.0, "b": -1.0, "delta": 0.1}
///   {"kind": "sphere", "radius_sq": 0.5, "ambient_dim": 3}
///   {"kind": "fixed", "y": [g, b]}
///   {"kind": "disk", "radius": 1.0}
std::vector<LineDistribution> line_distributions_from_json(const nlohmann::json& j, std::size_t m);

nlohmann::json to_json(const LineDistribution& dist);

}  // namespace gridconc
