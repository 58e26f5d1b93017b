#include "gridconc/topology.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gridconc {

Topology::Topology(std::size_t n_nodes, std::vector<Edge> edges,
                   std::optional<std::size_t> reference)
    : n_nodes_(n_nodes), edges_(std::move(edges)), reference_(reference) {
  if (n_nodes_ == 0) {
    throw std::invalid_argument("topology needs at least one node");
  }
  for (std::size_t l = 0; l < edges_.size(); ++l) {
    const Edge& e = edges_[l];
    if (e.from >= n_nodes_ || e.to >= n_nodes_) {
      throw std::invalid_argument("edge " + std::to_string(l) + " endpoint out of range");
    }
    if (e.from == e.to) {
      throw std::invalid_argument("edge " + std::to_string(l) + " is a self-loop");
    }
  }
  if (reference_ && *reference_ >= n_nodes_) {
    throw std::invalid_argument("reference node out of range");
  }
}

Topology Topology::path(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Topology(n, std::move(edges));
}

Topology Topology::complete(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Topology(n, std::move(edges));
}

Topology Topology::star(std::size_t leaves) {
  std::vector<Edge> edges;
  for (std::size_t k = 1; k <= leaves; ++k) edges.push_back({0, k});
  return Topology(leaves + 1, std::move(edges));
}

Topology Topology::with_reference(std::size_t reference) const {
  return Topology(n_nodes_, edges_, reference);
}

Topology build_topology(std::size_t n,
                        const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [i, j] : edges) list.push_back({i, j});
  return Topology(n, std::move(list));
}

std::optional<std::size_t> reduced_index(const Topology& t, std::size_t node) {
  const auto ref = t.reference();
  if (!ref) return node;
  if (node == *ref) return std::nullopt;
  return node < *ref ? node : node - 1;
}

IncidenceMatrix incidence_matrix(const Topology& t, bool reduced) {
  if (reduced && !t.reference()) {
    throw std::invalid_argument("reduced incidence requires a reference node");
  }
  const std::size_t n = t.num_nodes();
  const std::size_t cols = reduced ? n - 1 : n;
  IncidenceMatrix out{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(t.num_edges()),
                                            static_cast<Eigen::Index>(cols)),
                      reduced};
  for (std::size_t l = 0; l < t.num_edges(); ++l) {
    const Edge& e = t.edge(l);
    const auto row = static_cast<Eigen::Index>(l);
    if (!reduced) {
      out.matrix(row, static_cast<Eigen::Index>(e.from)) = 1.0;
      out.matrix(row, static_cast<Eigen::Index>(e.to)) = -1.0;
      continue;
    }
    if (auto c = reduced_index(t, e.from)) out.matrix(row, static_cast<Eigen::Index>(*c)) = 1.0;
    if (auto c = reduced_index(t, e.to)) out.matrix(row, static_cast<Eigen::Index>(*c)) = -1.0;
  }
  return out;
}

Eigen::MatrixXd weighted_laplacian(const Topology& t, const Eigen::VectorXd& weights,
                                   bool reduced) {
  if (static_cast<std::size_t>(weights.size()) != t.num_edges()) {
    throw std::invalid_argument("weight vector length must equal the number of lines");
  }
  const Eigen::MatrixXd a = incidence_matrix(t, reduced).matrix;
  return a.transpose() * weights.asDiagonal() * a;
}

Eigen::MatrixXd laplacian(const Topology& t) {
  const Eigen::MatrixXd a = incidence_matrix(t).matrix;
  return a.transpose() * a;
}

std::vector<std::size_t> degrees(const Topology& t) {
  std::vector<std::size_t> deg(t.num_nodes(), 0);
  for (const Edge& e : t.edges()) {
    ++deg[e.from];
    ++deg[e.to];
  }
  return deg;
}

std::size_t max_degree(const Topology& t) {
  const auto deg = degrees(t);
  return *std::max_element(deg.begin(), deg.end());
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

bool is_connected(const Topology& t) {
  std::vector<std::size_t> parent(t.num_nodes());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::size_t components = t.num_nodes();
  for (const Edge& e : t.edges()) {
    const auto a = find_root(parent, e.from);
    const auto b = find_root(parent, e.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

bool is_tree(const Topology& t) {
  return t.num_edges() + 1 == t.num_nodes() && is_connected(t);
}

Topology sample_er_topology(std::size_t n, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (uniform01(rng) < p) edges.push_back({i, j});
    }
  }
  return Topology(n, std::move(edges));
}

Topology sample_random_tree(std::size_t n, Rng& rng) {
  std::vector<Edge> edges;
  for (std::size_t k = 1; k < n; ++k) {
    const auto parent = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(k));
    edges.push_back({parent, k});
  }
  return Topology(n, std::move(edges), std::size_t{0});
}

void to_json(nlohmann::json& j, const Topology& t) {
  nlohmann::json edges = nlohmann::json::array();
  for (const Edge& e : t.edges()) edges.push_back({e.from, e.to});
  j = nlohmann::json{{"n", t.num_nodes()}, {"edges", std::move(edges)}};
  if (t.reference()) {
    j["reference"] = *t.reference();
  } else {
    j["reference"] = nullptr;
  }
}

Topology topology_from_json(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::int64_t>();
  if (n <= 0) throw std::invalid_argument("topology needs at least one node");
  std::vector<Edge> edges;
  for (const auto& pair : j.at("edges")) {
    if (!pair.is_array() || pair.size() != 2) {
      throw std::invalid_argument("each edge must be a pair [i, j]");
    }
    const auto i = pair[0].get<std::int64_t>();
    const auto k = pair[1].get<std::int64_t>();
    if (i < 0 || k < 0) throw std::invalid_argument("edge endpoint out of range");
    edges.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(k)});
  }
  std::optional<std::size_t> reference;
  if (auto it = j.find("reference"); it != j.end() && !it->is_null()) {
    reference = it->get<std::size_t>();
  }
  return Topology(static_cast<std::size_t>(n), std::move(edges), reference);
}

}  // namespace gridconc
