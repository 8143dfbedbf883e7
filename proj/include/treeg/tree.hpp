#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "treeg/feature.hpp"
#include "treeg/graph.hpp"

namespace treeg {

// Reference to a subset available at a split node: offset 0 is the full
// vertex set V ("self"); offset q >= 1 selects a subset generated by the
// ancestor q levels up, sign +1 for its satisfied side, -1 otherwise.
// Stored as an offset so serialized trees are position-independent.
struct SubsetRef {
  int offset = 0;
  int sign = +1;

  bool is_all() const { return offset == 0; }
  // Canonical enumeration order: V < (1,+) < (1,-) < (2,+) < (2,-) < ...
  int order_index() const { return offset == 0 ? 0 : 2 * offset - (sign > 0 ? 1 : 0); }
};

// Everything one split node needs: which feature to propagate, how far, over
// which subset and mask, how to aggregate (graph tasks), and the threshold.
struct SplitParams {
  int k = 0;
  int d = 0;
  SubsetRef subset_ref;
  WalkType r = WalkType::Source;
  std::optional<Aggregator> agg;  // nullopt for vertex tasks
  double theta = 0.0;
};

struct TreeNode {
  bool is_leaf = true;
  double value = 0.0;  // leaf: prediction; internal: mean target (used for empty children)
  SplitParams split;
  int left = -1;
  int right = -1;
  // Set when the split was chosen only to generate subsets for descendants
  // because no candidate threshold separated the node's examples.
  bool structural = false;
};

// Binary regression tree; nodes are stored in creation order (pre-order,
// left subtree first) and node ids are vector indices, root = 0.
struct Tree {
  std::vector<TreeNode> nodes;
  Task task = Task::Graph;
  int n_features = 0;
};

struct TrainConfig {
  int max_depth_d = 2;       // walk-depth bound (d <= this)
  int max_ancestor_a = 2;    // how far up the tree subsets may be taken from
  int tree_max_depth = 5;    // structural depth bound
  int min_samples_split = 2;
  // Per-node inclusion probability for each permitted walk type; defaults to
  // 0.25 for graph tasks and 0.5 for vertex tasks when unset.
  std::optional<double> walk_type_prob;
  std::uint64_t rng_seed = 0;
  // Indexed by WalkType value - 1; lets experiments restrict the pool of
  // walk types before per-node sampling.
  std::array<bool, 4> allowed_walk_types{true, true, true, true};

  double resolved_walk_prob(Task task) const {
    if (walk_type_prob.has_value()) return *walk_type_prob;
    return task == Task::Graph ? 0.25 : 0.5;
  }
  bool allows(WalkType r) const {
    return allowed_walk_types[static_cast<std::size_t>(static_cast<int>(r) - 1)];
  }
  void validate() const;
};

// One example: a graph plus, for vertex tasks, the labeled vertex.
struct ExampleRef {
  const Graph* g = nullptr;
  const PropagationCache* cache = nullptr;
  int vertex = -1;
};

// An example as seen by one node during training: the subsets every ancestor
// split generated for it, in root-to-parent order.
struct NodeExample {
  ExampleRef ref;
  std::vector<std::pair<VertexSubset, VertexSubset>> generated;
};

struct SplitSearchStats {
  std::uint64_t candidates_evaluated = 0;  // one per scored (k, d, subset, type, agg)
  std::uint64_t split_nodes = 0;
  std::uint64_t structural_splits = 0;
};

struct SplitChoice {
  SplitParams params;
  double gain = 0.0;
};

// Scores every candidate spec over the node's examples. Thresholds are the
// midpoints between consecutive distinct phi values; gain is the reduction in
// sum of squared deviations. Ties resolve to the earlier spec in canonical
// order, then to the smaller threshold. Returns nullopt when no split has
// positive gain.
std::optional<SplitChoice> find_best_split(const std::vector<NodeExample>& examples,
                                           const std::vector<double>& targets,
                                           const std::vector<WalkType>& sampled_types,
                                           const TrainConfig& config, Task task,
                                           SplitSearchStats* stats = nullptr);

// Partitions the subset a split used: S+ holds the members whose vertex-level
// phi exceeds the threshold (scaled by 1/|S| when the aggregator is Sum), S-
// the rest. The returned subsets carry (node_id, sign) as their origin.
std::pair<VertexSubset, VertexSubset> generate_subsets(const SplitParams& split,
                                                       const VertexSubset& used_subset,
                                                       const Graph& g,
                                                       const PropagationCache& cache, int node_id);

// Greedy induction; examples and targets must be non-empty and equal-sized.
// tree_index feeds the per-node walk-type sampling seed so ensembles can
// reproduce any single tree in isolation. When train_predictions is given it
// receives the fitted leaf value for every training example.
Tree fit_tree(const std::vector<ExampleRef>& examples, const std::vector<double>& targets,
              const TrainConfig& config, Task task, std::uint64_t tree_index = 0,
              SplitSearchStats* stats = nullptr, std::vector<double>* train_predictions = nullptr);

struct PathStep {
  int node_id = -1;
  VertexSubset selected;                       // subset the split used, materialized for this graph
  std::vector<std::pair<int, int>> used_arcs;  // arcs (u -> w) on nonzero masked walks; on request
};

struct TreePrediction {
  double value = 0.0;
  std::vector<PathStep> path;
};

// Routes one example, materializing subsets along the path exactly as during
// training. record_edges additionally computes, per split, the arcs lying on
// at least one nonzero-weight walk of the masked walk matrix.
TreePrediction predict_tree(const Tree& tree, const Graph& g, const PropagationCache& cache,
                            int vertex = -1, bool record_edges = false);

double predict_tree_value(const Tree& tree, const Graph& g, const PropagationCache& cache,
                          int vertex = -1);

}  // namespace treeg
