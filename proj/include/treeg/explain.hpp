#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "treeg/graph.hpp"

namespace treeg {

struct EnsembleModel;  // ensemble.hpp; kept forward-declared to avoid a header cycle

// Entrywise-absolute powers |A|^0 .. |A|^max_depth. Reachability products on
// these cannot cancel, so "some walk passes here" is decided by positivity
// even for negatively weighted graphs.
struct AbsPowers {
  std::vector<Eigen::MatrixXd> powers;
  int max_depth() const { return static_cast<int>(powers.size()) - 1; }
};

AbsPowers abs_walk_powers(const Graph& g, int max_depth);

// Arcs (u -> w) lying on at least one walk that the masked walk matrix
// A^d ∘ M_r(S) counts with nonzero weight. Sorted ascending, no duplicates;
// d = 0 uses no arcs at all.
std::vector<std::pair<int, int>> used_arcs_for_split(const Graph& g, const AbsPowers& abs,
                                                     const VertexSubset& subset, WalkType r,
                                                     int d);

// Shared rank-and-combine core. counts_per_tree[t][i] is how often item i was
// counted by tree t; contributions weight |y_t| by 2^-rank where tied counts
// share the smallest rank (competition ranking). Returns importances
// normalized to sum 1; if every tree predicts 0 the result is uniform.
std::vector<double> combine_rank_importance(const std::vector<std::vector<int>>& counts_per_tree,
                                            const std::vector<double>& y_per_tree);

// Per-tree traversal record kept for report output.
struct TreeDiagnostics {
  double y = 0.0;               // value the tree predicted for this example
  std::vector<int> counts;      // per item (vertex or edge), membership/usage count
  std::vector<int> ranks;       // competition ranks of counts, descending order
};

struct ExplanationReport {
  std::vector<double> vertex_importance;                 // per vertex, sums to 1
  std::vector<std::pair<int, int>> edges;                // canonical edge keys
  std::vector<double> edge_importance;                   // aligned with edges
  std::vector<TreeDiagnostics> vertex_diagnostics;
  std::vector<TreeDiagnostics> edge_diagnostics;
};

// Vertex importance: per tree, count for every vertex the prediction-path
// nodes whose selected subset contains it, rank the counts, and combine the
// per-tree ranks weighted by the tree's predicted value.
std::vector<double> vertex_importance(const EnsembleModel& model, const Graph& g,
                                      const PropagationCache& cache, int vertex = -1);

// Edge importance: counts instead how many path nodes give the edge a nonzero
// masked-walk contribution. Undirected graphs merge the two arc directions.
// An edgeless graph yields an empty map.
std::vector<std::pair<std::pair<int, int>, double>> edge_importance(const EnsembleModel& model,
                                                                    const Graph& g,
                                                                    const PropagationCache& cache,
                                                                    int vertex = -1);

// Both importances plus per-tree diagnostics in one traversal.
ExplanationReport explain(const EnsembleModel& model, const Graph& g,
                          const PropagationCache& cache, int vertex = -1);

// Graphviz rendering with vertices sized and edges weighted by importance.
std::string explanation_dot(const Graph& g, const ExplanationReport& report);

}  // namespace treeg
