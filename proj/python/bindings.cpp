// Python bindings for the core library: dataset loading, synthetic tasks,
// split-feature evaluation, ensemble training, prediction and explanations.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "treeg/dataset.hpp"
#include "treeg/ensemble.hpp"
#include "treeg/explain.hpp"
#include "treeg/feature.hpp"
#include "treeg/metrics.hpp"
#include "treeg/synth.hpp"

namespace py = pybind11;
using namespace treeg;

namespace {

Graph make_graph(const Eigen::MatrixXd& adj, const Eigen::MatrixXd& features, bool directed) {
  Graph g;
  g.n = static_cast<int>(adj.rows());
  g.adj = adj;
  g.features = features;
  g.directed = directed;
  g.validate();
  return g;
}

WalkType walk_type_from_string(const std::string& name) { return walk_type_from_name(name); }

VertexSubset subset_from_members(const std::vector<int>& members, int n) {
  if (members.empty()) return VertexSubset::all(n);
  VertexSubset s;
  s.members = members;
  std::sort(s.members.begin(), s.members.end());
  s.origin_node = 0;
  return s;
}

// Owns the graphs and caches backing a trained model's example refs.
struct PyDataset {
  GraphDataset ds;

  py::dict summary() const {
    py::dict out;
    out["name"] = ds.name;
    out["num_graphs"] = ds.graphs.size();
    out["num_features"] = ds.num_features();
    out["num_classes"] = ds.n_classes;
    out["has_targets"] = !ds.targets.empty();
    return out;
  }
};

struct PyModel {
  EnsembleModel model;

  int cache_depth() const { return model_max_walk_depth(model); }

  std::vector<double> predict_scores_py(const Eigen::MatrixXd& adj,
                                        const Eigen::MatrixXd& features, bool directed,
                                        int vertex) const {
    const Graph g = make_graph(adj, features, directed);
    const PropagationCache cache = build_propagation_cache(g, cache_depth());
    return predict_scores(model, g, cache, vertex);
  }

  int predict_label_py(const Eigen::MatrixXd& adj, const Eigen::MatrixXd& features,
                       bool directed, int vertex) const {
    const Graph g = make_graph(adj, features, directed);
    const PropagationCache cache = build_propagation_cache(g, cache_depth());
    return predict_label(model, g, cache, vertex);
  }

  double predict_regression_py(const Eigen::MatrixXd& adj, const Eigen::MatrixXd& features,
                               bool directed, int vertex) const {
    const Graph g = make_graph(adj, features, directed);
    const PropagationCache cache = build_propagation_cache(g, cache_depth());
    return predict_regression(model, g, cache, vertex);
  }

  py::dict explain_py(const Eigen::MatrixXd& adj, const Eigen::MatrixXd& features,
                      bool directed, int vertex) const {
    const Graph g = make_graph(adj, features, directed);
    const PropagationCache cache = build_propagation_cache(g, cache_depth());
    const ExplanationReport rep = explain(model, g, cache, vertex);
    py::dict out;
    out["vertex_importance"] = rep.vertex_importance;
    out["edges"] = rep.edges;
    out["edge_importance"] = rep.edge_importance;
    return out;
  }
};

TrainConfig config_from_kwargs(int max_d, int max_a, int tree_depth, int min_samples_split,
                               std::optional<double> walk_prob, std::uint64_t seed,
                               const std::vector<std::string>& walk_types) {
  TrainConfig cfg;
  cfg.max_depth_d = max_d;
  cfg.max_ancestor_a = max_a;
  cfg.tree_max_depth = tree_depth;
  cfg.min_samples_split = min_samples_split;
  cfg.walk_type_prob = walk_prob;
  cfg.rng_seed = seed;
  if (!walk_types.empty()) {
    cfg.allowed_walk_types = {false, false, false, false};
    for (const std::string& name : walk_types) {
      const WalkType r = walk_type_from_name(name);
      cfg.allowed_walk_types[static_cast<std::size_t>(static_cast<int>(r) - 1)] = true;
    }
  }
  cfg.validate();
  return cfg;
}

PyModel fit_py(const std::vector<Eigen::MatrixXd>& adjs,
               const std::vector<Eigen::MatrixXd>& features_list,
               const std::vector<double>& targets, const std::string& task_name_str,
               const std::string& objective_name_str, const std::vector<int>& vertices,
               bool directed, int n_estimators, double learning_rate, int max_d, int max_a,
               int tree_depth, int min_samples_split, std::optional<double> walk_prob,
               std::uint64_t seed, const std::vector<std::string>& walk_types) {
  if (adjs.size() != features_list.size()) {
    throw std::invalid_argument("adjacency and feature lists must align");
  }
  const Task task = task_from_name(task_name_str);
  const Objective objective = objective_from_name(objective_name_str);
  if (task == Task::Vertex && vertices.size() != adjs.size()) {
    throw std::invalid_argument("vertex tasks need one vertex index per example");
  }

  std::vector<Graph> graphs;
  graphs.reserve(adjs.size());
  for (std::size_t i = 0; i < adjs.size(); ++i) {
    graphs.push_back(make_graph(adjs[i], features_list[i], directed));
  }
  const TrainConfig cfg = config_from_kwargs(max_d, max_a, tree_depth, min_samples_split,
                                             walk_prob, seed, walk_types);
  std::vector<PropagationCache> caches;
  caches.reserve(graphs.size());
  for (const Graph& g : graphs) caches.push_back(build_propagation_cache(g, cfg.max_depth_d));
  std::vector<ExampleRef> examples;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    examples.push_back({&graphs[i], &caches[i], task == Task::Vertex ? vertices[i] : -1});
  }
  PyModel out;
  out.model = fit_ensemble(examples, targets, n_estimators, learning_rate, cfg, task, objective);
  return out;
}

py::dict dataset_to_dict(const GraphDataset& ds) {
  py::list adjs, feats, vlabels;
  for (const Graph& g : ds.graphs) {
    adjs.append(g.adj);
    feats.append(g.features);
  }
  for (const auto& labels : ds.vertex_labels) vlabels.append(labels);
  py::dict out;
  out["name"] = ds.name;
  out["adjacency"] = adjs;
  out["features"] = feats;
  out["labels"] = ds.labels;
  out["targets"] = ds.targets;
  out["vertex_labels"] = vlabels;
  out["num_classes"] = ds.n_classes;
  out["directed"] = !ds.graphs.empty() && ds.graphs.front().directed;
  return out;
}

}  // namespace

PYBIND11_MODULE(_treeg, m) {
  m.doc() = "Decision trees and boosted ensembles whose splits propagate "
            "vertex features along masked graph walks";

  m.def(
      "phi",
      [](const Eigen::MatrixXd& adj, const Eigen::MatrixXd& features, int k, int d,
         const std::vector<int>& subset, const std::string& walk_type, bool directed) {
        const Graph g = make_graph(adj, features, directed);
        const PropagationCache cache = build_propagation_cache(g, d);
        return Eigen::VectorXd(
            phi_vector(g, cache, k, d, subset_from_members(subset, g.n), walk_type_from_string(walk_type)));
      },
      py::arg("adjacency"), py::arg("features"), py::arg("k"), py::arg("d"),
      py::arg("subset") = std::vector<int>{}, py::arg("walk_type") = "source",
      py::arg("directed") = false,
      "Per-vertex split feature: propagate feature column k through d masked walk steps. "
      "An empty subset means all vertices.");

  m.def(
      "phi_aggregate",
      [](const Eigen::MatrixXd& adj, const Eigen::MatrixXd& features, int k, int d,
         const std::vector<int>& subset, const std::string& walk_type,
         const std::string& aggregator, bool directed) {
        const Graph g = make_graph(adj, features, directed);
        const PropagationCache cache = build_propagation_cache(g, d);
        const VertexSubset s = subset_from_members(subset, g.n);
        const WalkType r = walk_type_from_string(walk_type);
        return aggregate_phi(phi_vector(g, cache, k, d, s, r), s, r,
                             aggregator_from_name(aggregator));
      },
      py::arg("adjacency"), py::arg("features"), py::arg("k"), py::arg("d"),
      py::arg("subset") = std::vector<int>{}, py::arg("walk_type") = "source",
      py::arg("aggregator") = "sum", py::arg("directed") = false,
      "Graph-level split feature: aggregate phi over the subset (source masking "
      "aggregates over every vertex).");

  py::class_<PyModel>(m, "Model")
      .def_property_readonly("objective",
                             [](const PyModel& pm) { return objective_name(pm.model.objective); })
      .def_property_readonly("task",
                             [](const PyModel& pm) { return task_name(pm.model.task); })
      .def_property_readonly("num_trees",
                             [](const PyModel& pm) {
                               std::size_t total = 0;
                               for (const auto& row : pm.model.trees) total += row.size();
                               return total;
                             })
      .def_property_readonly(
          "train_losses", [](const PyModel& pm) { return pm.model.train_losses; })
      .def("predict_scores", &PyModel::predict_scores_py, py::arg("adjacency"),
           py::arg("features"), py::arg("directed") = false, py::arg("vertex") = -1)
      .def("predict_label", &PyModel::predict_label_py, py::arg("adjacency"),
           py::arg("features"), py::arg("directed") = false, py::arg("vertex") = -1)
      .def("predict_regression", &PyModel::predict_regression_py, py::arg("adjacency"),
           py::arg("features"), py::arg("directed") = false, py::arg("vertex") = -1)
      .def("explain", &PyModel::explain_py, py::arg("adjacency"), py::arg("features"),
           py::arg("directed") = false, py::arg("vertex") = -1)
      .def("to_json", [](const PyModel& pm) { return model_to_json(pm.model); })
      .def("save", [](const PyModel& pm, const std::string& path) { save_model(pm.model, path); },
           py::arg("path"))
      .def_static("from_json",
                  [](const std::string& text) {
                    PyModel pm;
                    pm.model = model_from_json(text);
                    return pm;
                  },
                  py::arg("text"))
      .def_static("load",
                  [](const std::string& path) {
                    PyModel pm;
                    pm.model = load_model(path);
                    return pm;
                  },
                  py::arg("path"));

  m.def("fit", &fit_py, py::arg("adjacency"), py::arg("features"), py::arg("targets"),
        py::arg("task") = "graph", py::arg("objective") = "regression",
        py::arg("vertices") = std::vector<int>{}, py::arg("directed") = false,
        py::arg("n_estimators") = 50, py::arg("learning_rate") = 0.1, py::arg("max_d") = 2,
        py::arg("max_a") = 2, py::arg("tree_depth") = 5, py::arg("min_samples_split") = 2,
        py::arg("walk_prob") = std::nullopt, py::arg("seed") = 0,
        py::arg("walk_types") = std::vector<std::string>{},
        "Fit a boosted ensemble on a list of graphs.");

  m.def(
      "load_tudataset",
      [](const std::string& dir, const std::string& name, bool constant_feature) {
        GraphDataset ds = load_tudataset(dir, name);
        if (constant_feature && !ds.has_constant) ds = add_constant_feature(std::move(ds));
        return dataset_to_dict(ds);
      },
      py::arg("directory"), py::arg("name"), py::arg("constant_feature") = true,
      "Read a benchmark directory in the plain-text layout.");

  m.def(
      "make_synth",
      [](const std::string& kind, int count, std::uint64_t seed, int walk_len) {
        return dataset_to_dict(make_synth_dataset(synth_kind_from_name(kind), count, seed,
                                                  walk_len));
      },
      py::arg("kind"), py::arg("count"), py::arg("seed") = 0, py::arg("walk_len") = 2,
      "Generate one of the built-in synthetic tasks.");

  m.def(
      "line_graph",
      [](const Eigen::MatrixXd& adj) {
        Graph g;
        g.n = static_cast<int>(adj.rows());
        g.adj = adj;
        g.features = Eigen::MatrixXd::Ones(g.n, 1);
        g.validate();
        const auto [lg, endpoints] = line_graph(g);
        return py::make_tuple(lg.adj, endpoints);
      },
      py::arg("adjacency"),
      "Adjacency of the line graph plus the original endpoints of each new vertex.");

  m.def("stratified_folds", &stratified_fold_assignment, py::arg("labels"), py::arg("k"),
        py::arg("seed"), "Deterministic class-stratified fold ids.");
}
