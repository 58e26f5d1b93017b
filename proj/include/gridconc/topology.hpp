#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "gridconc/rng.hpp"

namespace gridconc {

/// A line l = (from, to). The incidence row is e_from - e_to.
struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Node/line structure of a network. Immutable after construction; edge l
/// keeps index l for the lifetime of the object. Parallel lines are allowed.
class Topology {
 public:
  /// Throws std::invalid_argument on n_nodes == 0, out-of-range endpoints,
  /// self-loops or an out-of-range reference node.
  Topology(std::size_t n_nodes, std::vector<Edge> edges,
           std::optional<std::size_t> reference = std::nullopt);

  static Topology path(std::size_t n);
  static Topology complete(std::size_t n);
  static Topology star(std::size_t leaves);

  std::size_t num_nodes() const { return n_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t l) const { return edges_.at(l); }
  std::optional<std::size_t> reference() const { return reference_; }

  Topology with_reference(std::size_t reference) const;

  friend bool operator==(const Topology&, const Topology&) = default;

 private:
  std::size_t n_nodes_;
  std::vector<Edge> edges_;
  std::optional<std::size_t> reference_;
};

Topology build_topology(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges);

/// Branch-to-bus incidence matrix, m rows. When reduced, the reference
/// column is dropped and the remaining columns keep node order.
struct IncidenceMatrix {
  Eigen::MatrixXd matrix;
  bool reduced = false;
};

/// Throws std::invalid_argument if reduced is requested without a reference node.
IncidenceMatrix incidence_matrix(const Topology& t, bool reduced = false);

/// Column index of `node` in the reduced incidence, or nullopt for the reference.
std::optional<std::size_t> reduced_index(const Topology& t, std::size_t node);

/// A^T diag(weights) A, with the reduced incidence if requested.
Eigen::MatrixXd weighted_laplacian(const Topology& t, const Eigen::VectorXd& weights,
                                   bool reduced = false);

/// A^T A.
Eigen::MatrixXd laplacian(const Topology& t);

std::vector<std::size_t> degrees(const Topology& t);
std::size_t max_degree(const Topology& t);

bool is_connected(const Topology& t);
bool is_tree(const Topology& t);

/// Homogeneous Erdos-Renyi graph: every candidate pair (i < j), visited in
/// lexicographic order, consumes one uniform variate and is kept if u < p.
Topology sample_er_topology(std::size_t n, double p, Rng& rng);

/// Uniform random recursive tree: node k >= 1 attaches to a uniformly chosen
/// earlier node. Reference node is 0.
Topology sample_random_tree(std::size_t n, Rng& rng);

void to_json(nlohmann::json& j, const Topology& t);
Topology topology_from_json(const nlohmann::json& j);

}  // namespace gridconc
