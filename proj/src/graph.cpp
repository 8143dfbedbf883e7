#include "treeg/graph.hpp"

#include <cmath>
#include <stdexcept>

namespace treeg {

void Graph::validate() const {
  if (adj.rows() != n || adj.cols() != n) {
    throw std::invalid_argument("adjacency must be n x n");
  }
  if (features.rows() != n) {
    throw std::invalid_argument("features must have one row per vertex");
  }
  if (!adj.allFinite() || !features.allFinite()) {
    throw std::invalid_argument("graph contains non-finite entries");
  }
  if (!directed && !adj.isApprox(adj.transpose(), 0.0)) {
    throw std::invalid_argument("undirected graph has asymmetric adjacency");
  }
}

const char* walk_type_name(WalkType r) {
  switch (r) {
    case WalkType::Source: return "source";
    case WalkType::Cycle: return "cycle";
    case WalkType::Target: return "target";
    case WalkType::TargetSource: return "target_source";
  }
  throw std::invalid_argument("unknown walk type");
}

WalkType walk_type_from_name(const std::string& name) {
  if (name == "source") return WalkType::Source;
  if (name == "cycle") return WalkType::Cycle;
  if (name == "target") return WalkType::Target;
  if (name == "target_source") return WalkType::TargetSource;
  throw std::invalid_argument("unknown walk type: " + name);
}

Eigen::VectorXd VertexSubset::indicator(int n) const {
  Eigen::VectorXd ind = Eigen::VectorXd::Zero(n);
  for (int j : members) {
    if (j < 0 || j >= n) throw std::invalid_argument("subset index out of range");
    ind(j) = 1.0;
  }
  return ind;
}

WalkMatrixCache walk_powers(const Graph& g, int max_depth) {
  if (max_depth < 0) throw std::invalid_argument("max_depth must be >= 0");
  WalkMatrixCache cache;
  cache.powers.reserve(static_cast<std::size_t>(max_depth) + 1);
  cache.powers.push_back(Eigen::MatrixXd::Identity(g.n, g.n));
  for (int d = 1; d <= max_depth; ++d) {
    cache.powers.push_back(g.adj * cache.powers.back());
  }
  return cache;
}

Eigen::MatrixXd masked_walks(const Eigen::MatrixXd& power, const VertexSubset& subset, WalkType r) {
  const int n = static_cast<int>(power.rows());
  for (int j : subset.members) {
    if (j < 0 || j >= n) throw std::invalid_argument("subset index out of range");
  }
  switch (r) {
    case WalkType::Source: {
      Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
      for (int j : subset.members) out.col(j) = power.col(j);
      return out;
    }
    case WalkType::Cycle: {
      Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
      for (int j : subset.members) out(j, j) = power(j, j);
      return out;
    }
    case WalkType::Target: {
      Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
      for (int j : subset.members) out.row(j) = power.row(j);
      return out;
    }
    case WalkType::TargetSource: {
      Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
      for (int i : subset.members) {
        for (int j : subset.members) out(i, j) = power(i, j);
      }
      return out;
    }
  }
  throw std::invalid_argument("unknown walk type");
}

PropagationCache build_propagation_cache(const Graph& g, int max_depth) {
  PropagationCache cache;
  cache.walks = walk_powers(g, max_depth);
  cache.propagated.reserve(cache.walks.powers.size());
  cache.diagonals.reserve(cache.walks.powers.size());
  for (const Eigen::MatrixXd& p : cache.walks.powers) {
    cache.propagated.push_back(p * g.features);
    cache.diagonals.push_back(p.diagonal());
  }
  return cache;
}

Graph permute_graph(const Graph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.n) {
    throw std::invalid_argument("permutation size mismatch");
  }
  Graph out;
  out.n = g.n;
  out.directed = g.directed;
  out.adj = Eigen::MatrixXd::Zero(g.n, g.n);
  out.features = Eigen::MatrixXd::Zero(g.n, g.features.cols());
  for (int i = 0; i < g.n; ++i) {
    out.features.row(perm[static_cast<std::size_t>(i)]) = g.features.row(i);
    for (int j = 0; j < g.n; ++j) {
      out.adj(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]) = g.adj(i, j);
    }
  }
  return out;
}

}  // namespace treeg
