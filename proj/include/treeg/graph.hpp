#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace treeg {

// A graph with a real-weighted adjacency matrix and stacked vertex features.
// Convention: adj(i, j) is the weight of the edge FROM j TO i, so walks
// propagate by left-multiplication and (A^d)(i, j) is the (weighted) number
// of walks of length d from j to i.
struct Graph {
  int n = 0;
  Eigen::MatrixXd adj;       // n x n
  Eigen::MatrixXd features;  // n x l, column k is the vertex feature f_k
  bool directed = false;

  int num_features() const { return static_cast<int>(features.cols()); }

  // Throws std::invalid_argument on shape mismatch, non-finite entries, or an
  // asymmetric adjacency flagged as undirected.
  void validate() const;
};

// Restriction applied to the walk matrix A^d before combining with features.
// Values are fixed by the serialization format; do not reorder.
enum class WalkType : int {
  Source = 1,        // keep walks starting in S: zero columns j not in S
  Cycle = 2,         // keep closed walks at S: zero all but diagonal (j, j), j in S
  Target = 3,        // keep walks ending in S: zero rows j not in S
  TargetSource = 4,  // keep walks starting and ending in S: zero rows and columns outside S
};

// Vertex-labeling tasks only split on walks anchored at the labeled vertex.
inline bool vertex_task_allows(WalkType r) {
  return r == WalkType::Source || r == WalkType::Cycle;
}

const char* walk_type_name(WalkType r);
WalkType walk_type_from_name(const std::string& name);

// A set of vertices, remembered together with the tree node and sign that
// produced it (origin_node < 0 denotes the full vertex set V).
struct VertexSubset {
  std::vector<int> members;  // sorted, distinct, in [0, n)
  int origin_node = -1;
  int sign = +1;  // +1 / -1; meaningful only when origin_node >= 0

  static VertexSubset all(int n) {
    VertexSubset s;
    s.members.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s.members[static_cast<std::size_t>(i)] = i;
    return s;
  }

  bool is_all() const { return origin_node < 0; }
  bool empty() const { return members.empty(); }
  int size() const { return static_cast<int>(members.size()); }

  // 0/1 indicator vector of length n.
  Eigen::VectorXd indicator(int n) const;
};

// Powers [A^0, A^1, ..., A^max_depth] of one graph's adjacency matrix.
struct WalkMatrixCache {
  std::vector<Eigen::MatrixXd> powers;
  int max_depth() const { return static_cast<int>(powers.size()) - 1; }
};

WalkMatrixCache walk_powers(const Graph& g, int max_depth);

// Element-wise product A^d ∘ M_r(S). The input matrix is not modified.
// Throws std::invalid_argument if a subset index is out of range.
Eigen::MatrixXd masked_walks(const Eigen::MatrixXd& power, const VertexSubset& subset, WalkType r);

// Per-graph quantities reused across every split evaluation: walk powers,
// propagated features A^d * X, absolute-value powers (for edge reachability),
// and the diagonals of each power. Immutable after construction.
struct PropagationCache {
  WalkMatrixCache walks;
  std::vector<Eigen::MatrixXd> propagated;  // propagated[d] = A^d * X (n x l)
  std::vector<Eigen::VectorXd> diagonals;   // diagonals[d] = diag(A^d)

  int max_depth() const { return walks.max_depth(); }
};

PropagationCache build_propagation_cache(const Graph& g, int max_depth);

// Applies a vertex permutation: perm[i] is the new index of old vertex i.
// Returns the graph with adjacency P A P^T and correspondingly permuted
// feature rows.
Graph permute_graph(const Graph& g, const std::vector<int>& perm);

}  // namespace treeg
