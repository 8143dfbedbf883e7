#pragma once

// Independent reference implementations used only by tests. Walks are
// enumerated one vertex sequence at a time, so none of the matrix-power or
// masking shortcuts of the library are shared with these oracles.

#include <algorithm>
#include <set>
#include <vector>

#include "treeg/feature.hpp"
#include "treeg/graph.hpp"
#include "treeg/rng.hpp"

namespace oracle {

inline bool in_set(const std::vector<int>& s, int v) {
  return std::find(s.begin(), s.end(), v) != s.end();
}

// Sum over all length-d vertex sequences v0..vd with v0 = from, vd = to of
// the product of arc weights adj(v_{t+1}, v_t).
inline double walk_weight_between(const treeg::Graph& g, int from, int to, int d) {
  if (d == 0) return from == to ? 1.0 : 0.0;
  double total = 0.0;
  // Depth-first enumeration with an explicit product.
  struct Frame {
    int vertex;
    double product;
    int depth;
  };
  std::vector<Frame> stack{{from, 1.0, 0}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    if (f.depth == d) {
      if (f.vertex == to) total += f.product;
      continue;
    }
    for (int next = 0; next < g.n; ++next) {
      const double w = g.adj(next, f.vertex);
      if (w != 0.0) stack.push_back({next, f.product * w, f.depth + 1});
    }
  }
  return total;
}

// Masked walk matrix entry (i, j): walks from j to i filtered by the walk
// type's start/end membership conditions rather than by zeroing the matrix.
inline Eigen::MatrixXd masked_walks(const treeg::Graph& g, const std::vector<int>& subset,
                                    treeg::WalkType r, int d) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.n, g.n);
  for (int j = 0; j < g.n; ++j) {    // walk start
    for (int i = 0; i < g.n; ++i) {  // walk end
      bool keep = true;
      switch (r) {
        case treeg::WalkType::Source: keep = in_set(subset, j); break;
        case treeg::WalkType::Cycle: keep = i == j && in_set(subset, j); break;
        case treeg::WalkType::Target: keep = in_set(subset, i); break;
        case treeg::WalkType::TargetSource: keep = in_set(subset, i) && in_set(subset, j); break;
      }
      if (keep) out(i, j) = walk_weight_between(g, j, i, d);
    }
  }
  return out;
}

inline double phi_vertex(const treeg::Graph& g, int k, int d, const std::vector<int>& subset,
                         treeg::WalkType r, int i) {
  const Eigen::MatrixXd w = masked_walks(g, subset, r, d);
  double acc = 0.0;
  for (int j = 0; j < g.n; ++j) acc += w(i, j) * g.features(j, k);
  return acc;
}

// Graph-level value: Source aggregates the vector over every vertex, the
// restricted types over the subset members only.
inline double phi_graph(const treeg::Graph& g, int k, int d, const std::vector<int>& subset,
                        treeg::WalkType r, treeg::Aggregator agg) {
  std::vector<int> range;
  if (r == treeg::WalkType::Source) {
    for (int i = 0; i < g.n; ++i) range.push_back(i);
  } else {
    range = subset;
  }
  if (range.empty()) throw treeg::EmptyAggregationError();
  std::vector<double> values;
  for (int i : range) values.push_back(phi_vertex(g, k, d, subset, r, i));
  switch (agg) {
    case treeg::Aggregator::Sum: {
      double s = 0.0;
      for (double v : values) s += v;
      return s;
    }
    case treeg::Aggregator::Mean: {
      double s = 0.0;
      for (double v : values) s += v;
      return s / static_cast<double>(values.size());
    }
    case treeg::Aggregator::Min: return *std::min_element(values.begin(), values.end());
    case treeg::Aggregator::Max: return *std::max_element(values.begin(), values.end());
  }
  throw std::logic_error("unreachable");
}

// Arcs lying on at least one start/end-admissible walk all of whose arcs have
// nonzero weight. Mirrors the definition of a "used" edge without matrices.
inline std::vector<std::pair<int, int>> used_arcs(const treeg::Graph& g,
                                                  const std::vector<int>& subset,
                                                  treeg::WalkType r, int d) {
  std::set<std::pair<int, int>> arcs;
  if (d > 0) {
    std::vector<std::vector<int>> stack;
    for (int v0 = 0; v0 < g.n; ++v0) stack.push_back({v0});
    while (!stack.empty()) {
      std::vector<int> walk = std::move(stack.back());
      stack.pop_back();
      if (static_cast<int>(walk.size()) == d + 1) {
        const int start = walk.front(), end = walk.back();
        bool keep = true;
        switch (r) {
          case treeg::WalkType::Source: keep = in_set(subset, start); break;
          case treeg::WalkType::Cycle: keep = start == end && in_set(subset, start); break;
          case treeg::WalkType::Target: keep = in_set(subset, end); break;
          case treeg::WalkType::TargetSource:
            keep = in_set(subset, start) && in_set(subset, end);
            break;
        }
        if (keep) {
          for (std::size_t t = 0; t + 1 < walk.size(); ++t) {
            arcs.insert({walk[t], walk[t + 1]});
          }
        }
        continue;
      }
      for (int next = 0; next < g.n; ++next) {
        if (g.adj(next, walk.back()) != 0.0) {
          std::vector<int> extended = walk;
          extended.push_back(next);
          stack.push_back(std::move(extended));
        }
      }
    }
  }
  return {arcs.begin(), arcs.end()};
}

// Deterministic random graphs for property tests.
inline treeg::Graph random_graph(treeg::Rng& rng, int n, int n_features, bool directed,
                                 bool weighted, double edge_prob = 0.35) {
  treeg::Graph g;
  g.n = n;
  g.directed = directed;
  g.adj = Eigen::MatrixXd::Zero(n, n);
  const auto weight = [&]() {
    if (!weighted) return 1.0;
    const double choices[] = {-1.0, 0.5, 1.0, 2.0};
    return choices[rng.next_int(0, 3)];
  };
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      if (rng.next_bernoulli(edge_prob)) {
        const double w = weight();
        g.adj(j, i) = w;
        if (!directed) g.adj(i, j) = w;
      }
    }
  }
  g.features = Eigen::MatrixXd(n, n_features);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n_features; ++k) {
      g.features(i, k) = rng.next_int(-2, 2);
    }
  }
  g.validate();
  return g;
}

inline std::vector<int> random_subset(treeg::Rng& rng, int n, double member_prob = 0.5) {
  std::vector<int> s;
  for (int v = 0; v < n; ++v) {
    if (rng.next_bernoulli(member_prob)) s.push_back(v);
  }
  return s;
}

}  // namespace oracle
