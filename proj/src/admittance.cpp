#include "gridconc/admittance.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gridconc {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void validate(const LineDistribution& dist) {
  std::visit(overloaded{
                 [](const FixedBernoulli& d) {
                   if (!(d.p >= 0.0 && d.p <= 1.0))
                     throw std::invalid_argument("bernoulli probability must lie in [0, 1]");
                   if (!finite(d.y)) throw std::invalid_argument("bernoulli admittance not finite");
                 },
                 [](const BoundedPerturbation& d) {
                   if (!(d.delta >= 0.0) || !std::isfinite(d.delta))
                     throw std::invalid_argument("perturbation bound must be finite and >= 0");
                   if (!std::isfinite(d.center_g) || !std::isfinite(d.center_b))
                     throw std::invalid_argument("perturbation center not finite");
                 },
                 [](const SphereUniform& d) {
                   if (!(d.radius_sq >= 0.0) || !std::isfinite(d.radius_sq))
                     throw std::invalid_argument("sphere radius^2 must be finite and >= 0");
                 },
                 [](const FixedDeterministic& d) {
                   if (!finite(d.y)) throw std::invalid_argument("fixed admittance not finite");
                 },
                 [](const UnitDisk& d) {
                   if (!(d.radius >= 0.0) || !std::isfinite(d.radius))
                     throw std::invalid_argument("disk radius must be finite and >= 0");
                 },
             },
             dist);
}

double support_radius(const LineDistribution& dist) {
  return std::visit(
      overloaded{
          [](const FixedBernoulli& d) { return std::abs(d.y); },
          [](const BoundedPerturbation& d) {
            return std::hypot(std::abs(d.center_g) + d.delta, std::abs(d.center_b) + d.delta);
          },
          // |g_l|, |b_l| <= radius each.
          [](const SphereUniform& d) { return std::sqrt(2.0 * d.radius_sq); },
          [](const FixedDeterministic& d) { return std::abs(d.y); },
          [](const UnitDisk& d) { return d.radius; },
      },
      dist);
}

AdmittanceMatrix::AdmittanceMatrix(Topology topology, DenseMatrix y)
    : topology_(std::move(topology)), y_(std::move(y)) {
  const auto n = static_cast<Eigen::Index>(topology_.num_nodes());
  if (y_.rows() != n || y_.cols() != n) {
    throw std::invalid_argument("admittance matrix size does not match topology");
  }
}

RealMatrix elementary_laplacian(std::size_t i, std::size_t j, std::size_t n) {
  if (i == j) throw std::invalid_argument("elementary Laplacian needs i != j");
  if (i >= n || j >= n) throw std::invalid_argument("elementary Laplacian index out of range");
  RealMatrix e = RealMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const auto a = static_cast<Eigen::Index>(i);
  const auto b = static_cast<Eigen::Index>(j);
  e(a, a) = 1.0;
  e(b, b) = 1.0;
  e(a, b) = -1.0;
  e(b, a) = -1.0;
  return e;
}

AdmittanceMatrix assemble_admittance(const Topology& t, std::span<const LineAdmittance> weights) {
  if (weights.size() != t.num_edges()) {
    throw std::invalid_argument("expected " + std::to_string(t.num_edges()) + " line weights, got " +
                                std::to_string(weights.size()));
  }
  const auto n = static_cast<Eigen::Index>(t.num_nodes());
  DenseMatrix y = DenseMatrix::Zero(n, n);
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Complex w = weights[l].w();
    const auto i = static_cast<Eigen::Index>(t.edge(l).from);
    const auto j = static_cast<Eigen::Index>(t.edge(l).to);
    y(i, i) += w;
    y(j, j) += w;
    y(i, j) -= w;
    y(j, i) -= w;
  }
  return AdmittanceMatrix(t, std::move(y));
}

RealMatrix lift_real(const AdmittanceMatrix& y) {
  const RealMatrix g = y.conductance();
  const RealMatrix b = y.susceptance();
  const auto n = g.rows();
  RealMatrix out(2 * n, 2 * n);
  out << g, b, b, -g;
  return out;
}

RealMatrix admittance_block(double g, double b, BlockConvention convention) {
  RealMatrix u(2, 2);
  if (convention == BlockConvention::lifted) {
    u << g, b, b, -g;
  } else {
    u << g, -b, -b, -g;
  }
  return u;
}

RealMatrix elementary_jacobian(double g, double b, std::size_t i, std::size_t j, std::size_t n,
                               BlockConvention convention) {
  return kron(admittance_block(g, b, convention), elementary_laplacian(i, j, n));
}

namespace {

Eigen::VectorXd sphere_vector(std::size_t dim, double radius_sq, Rng& rng) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(dim));
  double norm = 0.0;
  // A zero Gaussian vector has probability zero; redraw defensively anyway.
  while (norm == 0.0) {
    for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = standard_normal(rng);
    norm = z.norm();
  }
  return z * (std::sqrt(radius_sq) / norm);
}

std::vector<LineAdmittance> sample_sphere(std::span<const LineDistribution> dists, Rng& rng) {
  const auto& first = std::get<SphereUniform>(dists.front());
  for (const auto& d : dists) {
    const auto* s = std::get_if<SphereUniform>(&d);
    if (s == nullptr || s->radius_sq != first.radius_sq || s->ambient_dim != first.ambient_dim) {
      throw std::invalid_argument("sphere law is joint: every line must share the same sphere");
    }
  }
  const std::size_t m = dists.size();
  const std::size_t dim = first.ambient_dim == 0 ? m : first.ambient_dim;
  if (dim < m) throw std::invalid_argument("sphere ambient dimension smaller than line count");
  const Eigen::VectorXd g = sphere_vector(dim, first.radius_sq, rng);
  const Eigen::VectorXd b = sphere_vector(dim, first.radius_sq, rng);
  std::vector<LineAdmittance> out(m);
  for (std::size_t l = 0; l < m; ++l) {
    out[l] = {g(static_cast<Eigen::Index>(l)), b(static_cast<Eigen::Index>(l))};
  }
  return out;
}

}  // namespace

std::vector<LineAdmittance> sample_weights(std::span<const LineDistribution> dists, Rng& rng) {
  for (const auto& d : dists) validate(d);
  if (!dists.empty() && std::holds_alternative<SphereUniform>(dists.front())) {
    return sample_sphere(dists, rng);
  }
  std::vector<LineAdmittance> out;
  out.reserve(dists.size());
  for (const auto& dist : dists) {
    out.push_back(std::visit(
        overloaded{
            [&](const FixedBernoulli& d) {
              const bool closed = uniform01(rng) < d.p;
              return closed ? LineAdmittance{d.y.real(), d.y.imag()} : LineAdmittance{};
            },
            [&](const BoundedPerturbation& d) {
              const double dg = d.delta * (2.0 * uniform01(rng) - 1.0);
              const double db = d.delta * (2.0 * uniform01(rng) - 1.0);
              return LineAdmittance{d.center_g + dg, d.center_b + db};
            },
            [&](const SphereUniform&) -> LineAdmittance {
              throw std::invalid_argument("sphere law is joint: every line must share the same sphere");
            },
            [&](const FixedDeterministic& d) { return LineAdmittance{d.y.real(), d.y.imag()}; },
            [&](const UnitDisk& d) {
              const double r = d.radius * std::sqrt(uniform01(rng));
              const double angle = 2.0 * std::numbers::pi * uniform01(rng);
              return LineAdmittance{std::abs(r * std::cos(angle)), -std::abs(r * std::sin(angle))};
            },
        },
        dist));
  }
  return out;
}

std::vector<LineAdmittance> mean_weights(std::span<const LineDistribution> dists) {
  std::vector<LineAdmittance> out;
  out.reserve(dists.size());
  for (const auto& dist : dists) {
    validate(dist);
    out.push_back(std::visit(
        overloaded{
            [](const FixedBernoulli& d) { return LineAdmittance{d.p * d.y.real(), d.p * d.y.imag()}; },
            [](const BoundedPerturbation& d) { return LineAdmittance{d.center_g, d.center_b}; },
            // Sign symmetry of the sphere.
            [](const SphereUniform&) { return LineAdmittance{}; },
            [](const FixedDeterministic& d) { return LineAdmittance{d.y.real(), d.y.imag()}; },
            [](const UnitDisk& d) {
              const double c = 4.0 * d.radius / (3.0 * std::numbers::pi);
              return LineAdmittance{c, -c};
            },
        },
        dist));
  }
  return out;
}

AdmittanceMatrix expected_admittance(const Topology& t, std::span<const LineDistribution> dists) {
  const auto means = mean_weights(dists);
  return assemble_admittance(t, means);
}

DenseMatrix center(const AdmittanceMatrix& sample, const AdmittanceMatrix& expected) {
  if (sample.size() != expected.size()) throw std::invalid_argument("center: size mismatch");
  return sample.matrix() - expected.matrix();
}

namespace {

Complex complex_from_json(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw std::invalid_argument("complex value must be a number or [re, im]");
}

bool is_complex_literal(const nlohmann::json& j) {
  return j.is_number() || (j.is_array() && j.size() == 2 && j[0].is_number());
}

double scalar_at(const nlohmann::json& obj, const char* key, std::size_t l, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (it->is_array()) return it->at(l).get<double>();
  return it->get<double>();
}

Complex complex_at(const nlohmann::json& obj, const char* key, std::size_t l, Complex fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (is_complex_literal(*it)) return complex_from_json(*it);
  return complex_from_json(it->at(l));
}

void check_lengths(const nlohmann::json& obj, std::size_t m) {
  for (const char* key : {"p", "g", "b", "delta"}) {
    if (auto it = obj.find(key); it != obj.end() && it->is_array() && it->size() != m) {
      throw std::invalid_argument(std::string("per-line array '") + key + "' has wrong length");
    }
  }
  if (auto it = obj.find("y"); it != obj.end() && !is_complex_literal(*it) && it->size() != m) {
    throw std::invalid_argument("per-line array 'y' has wrong length");
  }
}

}  // namespace

std::vector<LineDistribution> line_distributions_from_json(const nlohmann::json& j, std::size_t m) {
  const std::string kind = j.at("kind").get<std::string>();
  check_lengths(j, m);
  std::vector<LineDistribution> out;
  out.reserve(m);
  for (std::size_t l = 0; l < m; ++l) {
    LineDistribution d;
    if (kind == "bernoulli") {
      d = FixedBernoulli{complex_at(j, "y", l, {1.0, 0.0}), scalar_at(j, "p", l, 1.0)};
    } else if (kind == "bounded") {
      d = BoundedPerturbation{scalar_at(j, "g", l, 0.0), scalar_at(j, "b", l, 0.0),
                              scalar_at(j, "delta", l, 0.0)};
    } else if (kind == "sphere") {
      d = SphereUniform{j.value("radius_sq", 0.5), j.value("ambient_dim", std::size_t{0})};
    } else if (kind == "fixed") {
      d = FixedDeterministic{complex_at(j, "y", l, {1.0, 0.0})};
    } else if (kind == "disk") {
      d = UnitDisk{j.value("radius", 1.0)};
    } else {
      throw std::invalid_argument("unknown line distribution kind '" + kind + "'");
    }
    validate(d);
    out.push_back(d);
  }
  return out;
}

nlohmann::json to_json(const LineDistribution& dist) {
  return std::visit(
      overloaded{
          [](const FixedBernoulli& d) {
            return nlohmann::json{{"kind", "bernoulli"}, {"p", d.p}, {"y", {d.y.real(), d.y.imag()}}};
          },
          [](const BoundedPerturbation& d) {
            return nlohmann::json{
                {"kind", "bounded"}, {"g", d.center_g}, {"b", d.center_b}, {"delta", d.delta}};
          },
          [](const SphereUniform& d) {
            return nlohmann::json{
                {"kind", "sphere"}, {"radius_sq", d.radius_sq}, {"ambient_dim", d.ambient_dim}};
          },
          [](const FixedDeterministic& d) {
            return nlohmann::json{{"kind", "fixed"}, {"y", {d.y.real(), d.y.imag()}}};
          },
          [](const UnitDisk& d) { return nlohmann::json{{"kind", "disk"}, {"radius", d.radius}}; },
      },
      dist);
}

}  // namespace gridconc
