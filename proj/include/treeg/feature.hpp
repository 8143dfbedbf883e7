#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeg/graph.hpp"

namespace treeg {

enum class Task { Graph, Vertex };

const char* task_name(Task t);
Task task_from_name(const std::string& name);

// Permutation-invariant reduction used by graph-labeling splits.
// Values are fixed by the serialization format; do not reorder.
enum class Aggregator : int { Sum = 0, Mean = 1, Min = 2, Max = 3 };

const char* aggregator_name(Aggregator a);
Aggregator aggregator_from_name(const std::string& name);

// Raised when an aggregation would run over an empty restricted index set.
struct EmptyAggregationError : std::invalid_argument {
  EmptyAggregationError() : std::invalid_argument("aggregation over empty vertex subset") {}
};

// One candidate split feature: propagate feature column k through d walk
// steps restricted by mask r over `subset`, then either read one vertex
// entry (vertex tasks, agg = nullopt) or aggregate (graph tasks).
struct FeatureSpec {
  int k = 0;
  int d = 0;
  VertexSubset subset;
  WalkType r = WalkType::Source;
  std::optional<Aggregator> agg;
};

// (A^d ∘ M_r(S)) f_k as an n-vector. Reference implementation built directly
// on masked_walks; prefer the PropagationCache overload in hot paths.
Eigen::VectorXd phi_vector(const Graph& g, const WalkMatrixCache& cache, int k, int d,
                           const VertexSubset& subset, WalkType r);

// Same value computed through cached propagations without materializing the
// masked matrix: Source uses A^d (f ∘ 1_S), Target masks A^d f, TargetSource
// combines both, Cycle reads diag(A^d) directly.
Eigen::VectorXd phi_vector(const Graph& g, const PropagationCache& cache, int k, int d,
                           const VertexSubset& subset, WalkType r);

// Aggregate v for a graph-labeling split: over all n entries for Source
// masking, over only the entries indexed by the subset otherwise (zeroed-out
// rows must not leak into min/max, and a restricted mean divides by |S|).
// Throws EmptyAggregationError if the restricted index set is empty.
double aggregate_phi(const Eigen::VectorXd& v, const VertexSubset& subset, WalkType r,
                     Aggregator agg);

// ((A^d ∘ M_r(S)) f_k)_i for vertex-labeling tasks. Requires agg = nullopt
// and r in {Source, Cycle}.
double phi_vertex(const Graph& g, const WalkMatrixCache& cache, const FeatureSpec& spec, int i);

// AGG((A^d ∘ M_r(S)) f_k) for graph-labeling tasks. Requires agg set.
double phi_graph(const Graph& g, const WalkMatrixCache& cache, const FeatureSpec& spec);

// All candidate specs for one split search, in the canonical deterministic
// order: k ascending, then d, then subsets in the order given, then walk type,
// then aggregator. Specs whose restricted aggregation would run over an empty
// subset are dropped. `available_subsets` must start with the full set V.
std::vector<FeatureSpec> enumerate_candidate_specs(int num_features, int max_depth,
                                                   const std::vector<VertexSubset>& available_subsets,
                                                   const std::vector<WalkType>& sampled_types,
                                                   Task task);

}  // namespace treeg
