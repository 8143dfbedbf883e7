#include "treeg/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "treeg/ensemble.hpp"

namespace treeg {

AbsPowers abs_walk_powers(const Graph& g, int max_depth) {
  AbsPowers abs;
  abs.powers.reserve(static_cast<std::size_t>(max_depth) + 1);
  abs.powers.push_back(Eigen::MatrixXd::Identity(g.n, g.n));
  const Eigen::MatrixXd base = g.adj.cwiseAbs();
  for (int d = 1; d <= max_depth; ++d) abs.powers.push_back(base * abs.powers.back());
  return abs;
}

std::vector<std::pair<int, int>> used_arcs_for_split(const Graph& g, const AbsPowers& abs,
                                                     const VertexSubset& subset, WalkType r,
                                                     int d) {
  std::vector<std::pair<int, int>> arcs;
  if (d <= 0) return arcs;
  if (d > abs.max_depth()) throw std::invalid_argument("abs powers too shallow");
  const int n = g.n;

  if (r == WalkType::Cycle) {
    if (subset.empty()) return arcs;
    // A walk must start and end at the same subset vertex j, so the two walk
    // segments around an arc have to be paired through j: accumulate
    // sum_j |A|^{t-1}(u, j) * |A|^{d-t}(j, w) over every split point t.
    const auto s = static_cast<int>(subset.members.size());
    Eigen::MatrixXd used = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd left(n, s), right(s, n);
    for (int t = 1; t <= d; ++t) {
      const Eigen::MatrixXd& before = abs.powers[static_cast<std::size_t>(t - 1)];
      const Eigen::MatrixXd& after = abs.powers[static_cast<std::size_t>(d - t)];
      for (int a = 0; a < s; ++a) {
        left.col(a) = before.col(subset.members[static_cast<std::size_t>(a)]);
        right.row(a) = after.row(subset.members[static_cast<std::size_t>(a)]);
      }
      used.noalias() += left * right;
    }
    for (int u = 0; u < n; ++u) {
      for (int w = 0; w < n; ++w) {
        if (g.adj(w, u) != 0.0 && used(u, w) > 0.0) arcs.emplace_back(u, w);
      }
    }
    return arcs;
  }

  // Separable start/end restrictions: an arc (u -> w) taken as step t is on
  // an allowed walk iff some allowed start reaches u in t-1 steps and w
  // reaches some allowed end in d-t steps.
  Eigen::VectorXd start = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd end = Eigen::VectorXd::Ones(n);
  if (r == WalkType::Source || r == WalkType::TargetSource) start = subset.indicator(n);
  if (r == WalkType::Target || r == WalkType::TargetSource) end = subset.indicator(n);

  std::vector<Eigen::VectorXd> fwd(static_cast<std::size_t>(d)), bwd(static_cast<std::size_t>(d));
  for (int t = 0; t < d; ++t) {
    fwd[static_cast<std::size_t>(t)] = abs.powers[static_cast<std::size_t>(t)] * start;
    bwd[static_cast<std::size_t>(t)] = abs.powers[static_cast<std::size_t>(t)].transpose() * end;
  }
  for (int u = 0; u < n; ++u) {
    for (int w = 0; w < n; ++w) {
      if (g.adj(w, u) == 0.0) continue;
      for (int t = 1; t <= d; ++t) {
        if (fwd[static_cast<std::size_t>(t - 1)](u) > 0.0 &&
            bwd[static_cast<std::size_t>(d - t)](w) > 0.0) {
          arcs.emplace_back(u, w);
          break;
        }
      }
    }
  }
  return arcs;
}

namespace {

std::vector<int> competition_ranks(const std::vector<int>& counts) {
  std::vector<int> sorted(counts);
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> ranks(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    // rank = 1 + number of strictly greater counts; ties share the best rank
    const auto greater = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), counts[i]);
    ranks[i] = static_cast<int>(greater) + 1;
  }
  return ranks;
}

}  // namespace

std::vector<double> combine_rank_importance(const std::vector<std::vector<int>>& counts_per_tree,
                                            const std::vector<double>& y_per_tree) {
  if (counts_per_tree.size() != y_per_tree.size()) {
    throw std::invalid_argument("per-tree counts and values must align");
  }
  std::size_t items = 0;
  for (const auto& counts : counts_per_tree) {
    if (items == 0) items = counts.size();
    if (counts.size() != items) throw std::invalid_argument("count vectors differ in length");
  }
  std::vector<double> weight(items, 0.0);
  for (std::size_t t = 0; t < counts_per_tree.size(); ++t) {
    const double y = std::abs(y_per_tree[t]);
    if (y == 0.0) continue;
    const std::vector<int> ranks = competition_ranks(counts_per_tree[t]);
    for (std::size_t i = 0; i < items; ++i) {
      weight[i] += y * std::exp2(static_cast<double>(-ranks[i]));
    }
  }
  double total = 0.0;
  for (double w : weight) total += w;
  if (total <= 0.0) {
    // Every tree predicted zero (or there are no trees): no evidence either
    // way, report the uniform distribution.
    if (items > 0) weight.assign(items, 1.0 / static_cast<double>(items));
    return weight;
  }
  for (double& w : weight) w /= total;
  return weight;
}

namespace {

std::pair<int, int> canonical_edge(int u, int w, bool directed) {
  if (directed || u <= w) return {u, w};
  return {w, u};
}

std::vector<std::pair<int, int>> graph_edges(const Graph& g) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j < g.n; ++j) {
    for (int i = 0; i < g.n; ++i) {
      if (g.adj(i, j) == 0.0) continue;  // arc j -> i
      const auto key = canonical_edge(j, i, g.directed);
      edges.push_back(key);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

const std::vector<Tree>& explained_column(const EnsembleModel& model, const Graph& g,
                                          const PropagationCache& cache, int vertex) {
  if (model.objective == Objective::Multiclass) {
    const int label = predict_label(model, g, cache, vertex);
    return model.trees[static_cast<std::size_t>(label)];
  }
  return model.trees.front();
}

}  // namespace

ExplanationReport explain(const EnsembleModel& model, const Graph& g,
                          const PropagationCache& cache, int vertex) {
  ExplanationReport report;
  const std::vector<Tree>& trees = explained_column(model, g, cache, vertex);
  const std::vector<std::pair<int, int>> edges = graph_edges(g);

  std::vector<std::vector<int>> vertex_counts, edge_counts;
  std::vector<double> ys;
  for (const Tree& tree : trees) {
    const TreePrediction pred = predict_tree(tree, g, cache, vertex, true);
    ys.push_back(pred.value);
    std::vector<int> vc(static_cast<std::size_t>(g.n), 0);
    std::vector<int> ec(edges.size(), 0);
    for (const PathStep& step : pred.path) {
      for (int j : step.selected.members) ++vc[static_cast<std::size_t>(j)];
      // An edge counts once per node even if both arc directions are used.
      std::vector<std::pair<int, int>> keys;
      keys.reserve(step.used_arcs.size());
      for (const auto& arc : step.used_arcs) {
        keys.push_back(canonical_edge(arc.first, arc.second, g.directed));
      }
      std::sort(keys.begin(), keys.end());
      keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      for (const auto& key : keys) {
        const auto it = std::lower_bound(edges.begin(), edges.end(), key);
        if (it != edges.end() && *it == key) {
          ++ec[static_cast<std::size_t>(it - edges.begin())];
        }
      }
    }
    vertex_counts.push_back(std::move(vc));
    edge_counts.push_back(std::move(ec));
  }

  report.vertex_importance = combine_rank_importance(vertex_counts, ys);
  report.edges = edges;
  report.edge_importance = combine_rank_importance(edge_counts, ys);
  for (std::size_t t = 0; t < ys.size(); ++t) {
    TreeDiagnostics vd;
    vd.y = ys[t];
    vd.counts = vertex_counts[t];
    vd.ranks = competition_ranks(vertex_counts[t]);
    report.vertex_diagnostics.push_back(std::move(vd));
    TreeDiagnostics ed;
    ed.y = ys[t];
    ed.counts = edge_counts[t];
    ed.ranks = competition_ranks(edge_counts[t]);
    report.edge_diagnostics.push_back(std::move(ed));
  }
  return report;
}

std::vector<double> vertex_importance(const EnsembleModel& model, const Graph& g,
                                      const PropagationCache& cache, int vertex) {
  const std::vector<Tree>& trees = explained_column(model, g, cache, vertex);
  std::vector<std::vector<int>> counts;
  std::vector<double> ys;
  for (const Tree& tree : trees) {
    const TreePrediction pred = predict_tree(tree, g, cache, vertex, false);
    ys.push_back(pred.value);
    std::vector<int> vc(static_cast<std::size_t>(g.n), 0);
    for (const PathStep& step : pred.path) {
      for (int j : step.selected.members) ++vc[static_cast<std::size_t>(j)];
    }
    counts.push_back(std::move(vc));
  }
  return combine_rank_importance(counts, ys);
}

std::vector<std::pair<std::pair<int, int>, double>> edge_importance(const EnsembleModel& model,
                                                                    const Graph& g,
                                                                    const PropagationCache& cache,
                                                                    int vertex) {
  const ExplanationReport report = explain(model, g, cache, vertex);
  std::vector<std::pair<std::pair<int, int>, double>> out;
  out.reserve(report.edges.size());
  for (std::size_t i = 0; i < report.edges.size(); ++i) {
    out.emplace_back(report.edges[i], report.edge_importance[i]);
  }
  return out;
}

std::string explanation_dot(const Graph& g, const ExplanationReport& report) {
  const bool directed = g.directed;
  std::string out = directed ? "digraph explanation {\n" : "graph explanation {\n";
  out += "  node [shape=circle, style=filled, fillcolor=lightgray];\n";
  double vmax = 0.0;
  for (double v : report.vertex_importance) vmax = std::max(vmax, v);
  double emax = 0.0;
  for (double e : report.edge_importance) emax = std::max(emax, e);
  char buf[160];
  for (int i = 0; i < g.n; ++i) {
    const double imp = report.vertex_importance.empty()
                           ? 0.0
                           : report.vertex_importance[static_cast<std::size_t>(i)];
    const double rel = vmax > 0.0 ? imp / vmax : 0.0;
    std::snprintf(buf, sizeof(buf), "  v%d [label=\"%d\", width=%.4f, tooltip=\"%.6f\"];\n", i, i,
                  0.3 + 1.2 * rel, imp);
    out += buf;
  }
  const char* arrow = directed ? "->" : "--";
  for (std::size_t e = 0; e < report.edges.size(); ++e) {
    const double imp = report.edge_importance[e];
    const double rel = emax > 0.0 ? imp / emax : 0.0;
    std::snprintf(buf, sizeof(buf), "  v%d %s v%d [penwidth=%.4f, tooltip=\"%.6f\"];\n",
                  report.edges[e].first, arrow, report.edges[e].second, 0.5 + 4.0 * rel, imp);
    out += buf;
  }
  out += "}\n";
  return out;
}

}  // namespace treeg
