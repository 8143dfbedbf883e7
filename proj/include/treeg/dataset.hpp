#pragma once

#include <string>
#include <utility>
#include <vector>

#include "treeg/graph.hpp"

namespace treeg {

// A labeled collection of graphs sharing one feature schema. Features are
// laid out as [one-hot node labels | node attributes | constant column], in
// that order; the schema fields record the widths actually present.
struct GraphDataset {
  std::string name;
  std::vector<Graph> graphs;
  std::vector<int> labels;                 // graph-level class ids 0..n_classes-1
  std::vector<double> targets;             // graph-level regression targets (may be empty)
  std::vector<std::vector<int>> vertex_labels;  // per graph, for vertex tasks (may be empty)
  int n_classes = 0;
  std::vector<int> label_values;           // original label values, sorted; index = class id
  int one_hot_dims = 0;
  int attribute_dims = 0;
  bool has_constant = false;

  std::size_t size() const { return graphs.size(); }
  int num_features() const { return graphs.empty() ? 0 : graphs.front().num_features(); }
};

// Reads the plain-text benchmark layout: NAME_A.txt (comma-separated
// 1-indexed global edge pairs), NAME_graph_indicator.txt, NAME_graph_labels.txt,
// and optionally NAME_node_labels.txt (one-hot encoded into features),
// NAME_node_attributes.txt (comma-separated reals) and
// NAME_graph_attributes.txt (regression targets). Vertices are re-indexed
// 0-based per graph, duplicate arcs collapse into a symmetric adjacency, and
// class labels are remapped to 0..C-1 by sorted original value. Self-loops
// are kept as given. Throws std::runtime_error with file and line context on
// malformed input.
GraphDataset load_tudataset(const std::string& dir, const std::string& name);

// Writes the same layout back; loading the result reproduces the dataset
// index-for-index.
void save_tudataset(const GraphDataset& ds, const std::string& dir, const std::string& name);

// Appends an all-ones feature column. The caller applies it once.
GraphDataset add_constant_feature(GraphDataset ds);

// Line graph: one vertex per undirected edge of g, connected when the
// original edges share an endpoint. Returns the new graph (constant-1
// feature) and the original-edge endpoints for each line-graph vertex.
std::pair<Graph, std::vector<std::pair<int, int>>> line_graph(const Graph& g);

}  // namespace treeg
