// Command-line harness: train / predict / cv / ablate / explain / synth.
//
// Every run emits a machine-readable JSON report {"manifest": ..., "results":
// ...} echoing the fully resolved configuration, plus a short human-readable
// summary on standard output. Reports contain no timestamps, so identical
// invocations with identical seeds produce byte-identical files.
//
// Exit codes: 0 success, 2 validation/usage error, 1 runtime error.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "treeg/dataset.hpp"
#include "treeg/ensemble.hpp"
#include "treeg/explain.hpp"
#include "treeg/metrics.hpp"
#include "treeg/rng.hpp"
#include "treeg/synth.hpp"
#include "treeg/tree.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace treeg;

struct Options {
  // input
  std::string data_dir;
  std::string name;
  std::string synth;
  int count = 1000;
  int walk_len = 2;
  bool no_constant = false;
  // training
  std::string task = "graph";
  int max_d = 2;
  int max_a = 2;
  int tree_depth = 5;
  int min_samples = 2;
  int estimators = 50;
  double learning_rate = 0.1;
  double walk_prob = -1.0;  // <0 means task default
  std::string walk_types = "source,cycle,target,target_source";
  std::uint64_t seed = 0;
  // evaluation
  int folds = 10;
  bool nested = false;
  int inner_folds = 5;
  // io
  std::string out;
  std::string report;
  std::string model_path;
  std::string dot_path;
  int index = 0;
  int vertex = -1;
};

std::array<bool, 4> parse_walk_types(const std::string& csv) {
  std::array<bool, 4> allowed{false, false, false, false};
  std::stringstream ss(csv);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    const std::size_t a = item.find_first_not_of(" \t");
    const std::size_t b = item.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    const WalkType r = walk_type_from_name(item.substr(a, b - a + 1));
    allowed[static_cast<std::size_t>(static_cast<int>(r) - 1)] = true;
    any = true;
  }
  if (!any) throw std::invalid_argument("--walk-types names no walk type");
  return allowed;
}

TrainConfig build_config(const Options& o) {
  TrainConfig cfg;
  cfg.max_depth_d = o.max_d;
  cfg.max_ancestor_a = o.max_a;
  cfg.tree_max_depth = o.tree_depth;
  cfg.min_samples_split = o.min_samples;
  if (o.walk_prob >= 0.0) cfg.walk_type_prob = o.walk_prob;
  cfg.rng_seed = o.seed;
  cfg.allowed_walk_types = parse_walk_types(o.walk_types);
  cfg.validate();
  return cfg;
}

GraphDataset load_input(const Options& o) {
  if (!o.synth.empty() && !o.data_dir.empty()) {
    throw std::invalid_argument("give either --data/--name or --synth, not both");
  }
  GraphDataset ds;
  if (!o.synth.empty()) {
    ds = make_synth_dataset(synth_kind_from_name(o.synth), o.count, o.seed, o.walk_len);
  } else if (!o.data_dir.empty()) {
    if (o.name.empty()) throw std::invalid_argument("--data requires --name");
    ds = load_tudataset(o.data_dir, o.name);
  } else {
    throw std::invalid_argument("no input: give --data DIR --name NAME or --synth KIND");
  }
  if (!ds.has_constant && !o.no_constant) ds = add_constant_feature(ds);
  return ds;
}

// Everything a command needs to fit or evaluate models on one dataset.
struct Prepared {
  GraphDataset ds;
  std::vector<PropagationCache> caches;
  Task task = Task::Graph;
  Objective objective = Objective::Binary;
  int n_classes = 0;
  std::vector<ExampleRef> examples;   // one per graph, or one per vertex
  std::vector<double> targets;        // training targets aligned with examples
  std::vector<int> example_graph;     // graph index per example
};

Prepared prepare(GraphDataset ds, const Options& o, int cache_depth) {
  Prepared p;
  p.task = task_from_name(o.task);
  if (p.task == Task::Vertex) {
    if (ds.vertex_labels.empty()) {
      throw std::invalid_argument("vertex task needs node labels in the dataset");
    }
    // The node labels become the target, so the one-hot encoding of those
    // labels is removed from the feature matrix.
    if (ds.one_hot_dims > 0) {
      for (Graph& g : ds.graphs) {
        g.features = g.features.rightCols(g.features.cols() - ds.one_hot_dims).eval();
      }
      ds.attribute_dims = static_cast<int>(ds.graphs.front().features.cols());
      ds.one_hot_dims = 0;
    }
    if (ds.graphs.front().features.cols() == 0) {
      throw std::invalid_argument("vertex task has no usable features (node labels are targets)");
    }
  }
  p.ds = std::move(ds);
  p.caches.reserve(p.ds.graphs.size());
  for (const Graph& g : p.ds.graphs) p.caches.push_back(build_propagation_cache(g, cache_depth));

  if (p.task == Task::Graph) {
    if (!p.ds.targets.empty()) {
      p.objective = Objective::Regression;
      p.targets = p.ds.targets;
    } else {
      if (p.ds.n_classes < 2) throw std::invalid_argument("dataset has fewer than 2 classes");
      p.n_classes = p.ds.n_classes;
      p.objective = p.n_classes == 2 ? Objective::Binary : Objective::Multiclass;
      p.targets.reserve(p.ds.labels.size());
      for (int y : p.ds.labels) p.targets.push_back(static_cast<double>(y));
    }
    for (std::size_t i = 0; i < p.ds.graphs.size(); ++i) {
      p.examples.push_back({&p.ds.graphs[i], &p.caches[i], -1});
      p.example_graph.push_back(static_cast<int>(i));
    }
  } else {
    int max_label = 0;
    for (std::size_t i = 0; i < p.ds.graphs.size(); ++i) {
      const std::vector<int>& labels = p.ds.vertex_labels[i];
      for (int v = 0; v < p.ds.graphs[i].n; ++v) {
        p.examples.push_back({&p.ds.graphs[i], &p.caches[i], v});
        p.example_graph.push_back(static_cast<int>(i));
        p.targets.push_back(static_cast<double>(labels[static_cast<std::size_t>(v)]));
        max_label = std::max(max_label, labels[static_cast<std::size_t>(v)]);
      }
    }
    p.n_classes = max_label + 1;
    if (p.n_classes < 2) throw std::invalid_argument("vertex labels have fewer than 2 classes");
    p.objective = p.n_classes == 2 ? Objective::Binary : Objective::Multiclass;
  }
  return p;
}

json input_manifest(const Options& o) {
  json in;
  if (!o.synth.empty()) {
    in["source"] = "synthetic";
    in["kind"] = o.synth;
    in["count"] = o.count;
    in["walk_len"] = o.walk_len;
  } else {
    in["source"] = "tudataset";
    in["directory"] = o.data_dir;
    in["name"] = o.name;
  }
  in["add_constant"] = !o.no_constant;
  return in;
}

json config_manifest(const Options& o, const TrainConfig& cfg, Task task) {
  json c;
  c["max_walk_depth"] = cfg.max_depth_d;
  c["max_ancestor_distance"] = cfg.max_ancestor_a;
  c["tree_depth"] = cfg.tree_max_depth;
  c["min_samples_split"] = cfg.min_samples_split;
  c["walk_type_prob"] = cfg.resolved_walk_prob(task);
  json types = json::array();
  for (WalkType r : {WalkType::Source, WalkType::Cycle, WalkType::Target, WalkType::TargetSource}) {
    if (cfg.allows(r)) types.push_back(walk_type_name(r));
  }
  c["walk_types"] = types;
  c["estimators"] = o.estimators;
  c["learning_rate"] = o.learning_rate;
  c["seed"] = std::to_string(o.seed);
  return c;
}

json base_manifest(const std::string& command, const Options& o, const TrainConfig& cfg,
                   const Prepared& p) {
  json m;
  m["command"] = command;
  m["input"] = input_manifest(o);
  m["task"] = task_name(p.task);
  m["objective"] = objective_name(p.objective);
  m["n_graphs"] = static_cast<int>(p.ds.graphs.size());
  m["n_examples"] = static_cast<int>(p.examples.size());
  m["n_features"] = p.ds.num_features();
  m["config"] = config_manifest(o, cfg, p.task);
  return m;
}

void write_report(const std::string& path, const json& report) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << text;
}

std::vector<int> subset_indices(const std::vector<int>& fold_of_graph,
                                const std::vector<int>& example_graph, int fold, bool test) {
  std::vector<int> idx;
  for (std::size_t i = 0; i < example_graph.size(); ++i) {
    const bool in_test = fold_of_graph[static_cast<std::size_t>(example_graph[i])] == fold;
    if (in_test == test) idx.push_back(static_cast<int>(i));
  }
  return idx;
}

struct FoldOutcome {
  double metric = 0.0;  // accuracy (classification) or mean squared error
  int test_count = 0;
};

FoldOutcome evaluate_fold(const Prepared& p, const std::vector<int>& train_idx,
                          const std::vector<int>& test_idx, const TrainConfig& cfg,
                          int estimators, double lr) {
  std::vector<ExampleRef> train_examples;
  std::vector<double> train_targets;
  train_examples.reserve(train_idx.size());
  for (int i : train_idx) {
    train_examples.push_back(p.examples[static_cast<std::size_t>(i)]);
    train_targets.push_back(p.targets[static_cast<std::size_t>(i)]);
  }
  const EnsembleModel model =
      fit_ensemble(train_examples, train_targets, estimators, lr, cfg, p.task, p.objective);
  FoldOutcome out;
  out.test_count = static_cast<int>(test_idx.size());
  if (p.objective == Objective::Regression) {
    double acc = 0.0;
    for (int i : test_idx) {
      const ExampleRef& ex = p.examples[static_cast<std::size_t>(i)];
      const double pred = predict_regression(model, *ex.g, *ex.cache, ex.vertex);
      const double d = pred - p.targets[static_cast<std::size_t>(i)];
      acc += d * d;
    }
    out.metric = acc / static_cast<double>(test_idx.size());
  } else {
    int hits = 0;
    for (int i : test_idx) {
      const ExampleRef& ex = p.examples[static_cast<std::size_t>(i)];
      if (predict_label(model, *ex.g, *ex.cache, ex.vertex) ==
          static_cast<int>(p.targets[static_cast<std::size_t>(i)])) {
        ++hits;
      }
    }
    out.metric = static_cast<double>(hits) / static_cast<double>(test_idx.size());
  }
  return out;
}

std::vector<int> make_fold_assignment(const Prepared& p, int folds, std::uint64_t seed) {
  if (p.objective == Objective::Regression || p.task == Task::Vertex) {
    return fold_assignment(p.ds.graphs.size(), folds, seed);
  }
  return stratified_fold_assignment(p.ds.labels, folds, seed);
}

struct CvSummary {
  std::vector<double> per_fold;
  double mean = 0.0, stddev = 0.0, best = 0.0;
  json extra = json::object();
};

CvSummary summarize(const std::vector<double>& per_fold, bool higher_is_better) {
  CvSummary s;
  s.per_fold = per_fold;
  for (double v : per_fold) s.mean += v;
  s.mean /= static_cast<double>(per_fold.size());
  double var = 0.0;
  for (double v : per_fold) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(per_fold.size()));
  s.best = higher_is_better ? *std::max_element(per_fold.begin(), per_fold.end())
                            : *std::min_element(per_fold.begin(), per_fold.end());
  return s;
}

CvSummary run_cv(const Prepared& p, const Options& o, const TrainConfig& base_cfg,
                 const std::vector<int>& fold_of_graph) {
  const bool classify = p.objective != Objective::Regression;
  std::vector<double> per_fold;
  json fold_details = json::array();
  for (int f = 0; f < o.folds; ++f) {
    const std::vector<int> train_idx = subset_indices(fold_of_graph, p.example_graph, f, false);
    const std::vector<int> test_idx = subset_indices(fold_of_graph, p.example_graph, f, true);
    if (test_idx.empty() || train_idx.empty()) {
      throw std::invalid_argument("fold " + std::to_string(f) + " is empty; lower --folds");
    }
    TrainConfig cfg = base_cfg;
    cfg.rng_seed = derive_seed(o.seed, 101, static_cast<std::uint64_t>(f));
    json detail;
    detail["fold"] = f;
    if (o.nested) {
      // Inner model selection over the (walk depth, ancestor distance) grid.
      std::vector<int> train_graphs;
      for (std::size_t g = 0; g < fold_of_graph.size(); ++g) {
        if (fold_of_graph[g] != f) train_graphs.push_back(static_cast<int>(g));
      }
      std::vector<int> inner_fold_of_graph(fold_of_graph.size(), -1);
      {
        // Fold the outer-train graphs; stratify for classification.
        std::vector<int> inner;
        if (classify && p.task == Task::Graph) {
          std::vector<int> labels;
          for (int g : train_graphs) labels.push_back(p.ds.labels[static_cast<std::size_t>(g)]);
          inner = stratified_fold_assignment(labels, o.inner_folds,
                                             derive_seed(o.seed, 202, static_cast<std::uint64_t>(f)));
        } else {
          inner = fold_assignment(train_graphs.size(), o.inner_folds,
                                  derive_seed(o.seed, 202, static_cast<std::uint64_t>(f)));
        }
        for (std::size_t t = 0; t < train_graphs.size(); ++t) {
          inner_fold_of_graph[static_cast<std::size_t>(train_graphs[t])] = inner[t];
        }
      }
      double best_score = classify ? -1.0 : std::numeric_limits<double>::infinity();
      int best_d = 0, best_a = 0;
      json grid = json::array();
      for (int d = 0; d <= o.max_d; ++d) {
        for (int a = 0; a <= o.max_a; ++a) {
          double total = 0.0;
          for (int inner_f = 0; inner_f < o.inner_folds; ++inner_f) {
            std::vector<int> itr, ite;
            for (std::size_t i = 0; i < p.example_graph.size(); ++i) {
              const int gf = inner_fold_of_graph[static_cast<std::size_t>(p.example_graph[i])];
              if (gf < 0) continue;
              (gf == inner_f ? ite : itr).push_back(static_cast<int>(i));
            }
            TrainConfig inner_cfg = base_cfg;
            inner_cfg.max_depth_d = d;
            inner_cfg.max_ancestor_a = a;
            inner_cfg.rng_seed = derive_seed(o.seed, 303,
                                             static_cast<std::uint64_t>(f * 97 + inner_f));
            total += evaluate_fold(p, itr, ite, inner_cfg, o.estimators, o.learning_rate).metric;
          }
          const double mean = total / static_cast<double>(o.inner_folds);
          grid.push_back({{"max_walk_depth", d}, {"max_ancestor_distance", a}, {"mean", mean}});
          const bool better = classify ? mean > best_score : mean < best_score;
          if (better) {
            best_score = mean;
            best_d = d;
            best_a = a;
          }
        }
      }
      cfg.max_depth_d = best_d;
      cfg.max_ancestor_a = best_a;
      detail["grid"] = grid;
      detail["chosen"] = {{"max_walk_depth", best_d}, {"max_ancestor_distance", best_a}};
    }
    const FoldOutcome outcome =
        evaluate_fold(p, train_idx, test_idx, cfg, o.estimators, o.learning_rate);
    per_fold.push_back(outcome.metric);
    detail["test_examples"] = outcome.test_count;
    detail[classify ? "accuracy" : "mse"] = outcome.metric;
    fold_details.push_back(detail);
  }
  CvSummary s = summarize(per_fold, classify);
  s.extra["folds"] = fold_details;
  return s;
}

json cv_summary_json(const CvSummary& s, bool classify) {
  json r;
  r[classify ? "per_fold_accuracy" : "per_fold_mse"] = s.per_fold;
  r["mean"] = s.mean;
  r["std"] = s.stddev;
  r["best"] = s.best;
  for (auto& [k, v] : s.extra.items()) r[k] = v;
  return r;
}

int cmd_train(const Options& o) {
  const TrainConfig cfg = build_config(o);
  if (o.out.empty()) throw std::invalid_argument("train requires --out MODEL_PATH");
  const Prepared p = prepare(load_input(o), o, cfg.max_depth_d);
  const EnsembleModel model = fit_ensemble(p.examples, p.targets, o.estimators, o.learning_rate,
                                           cfg, p.task, p.objective);
  save_model(model, o.out);

  json results;
  if (p.objective == Objective::Regression) {
    std::vector<double> preds;
    preds.reserve(p.examples.size());
    for (const ExampleRef& ex : p.examples) {
      preds.push_back(predict_regression(model, *ex.g, *ex.cache, ex.vertex));
    }
    results["train_mse"] = mean_squared_error_of(p.targets, preds);
  } else {
    int hits = 0;
    for (std::size_t i = 0; i < p.examples.size(); ++i) {
      const ExampleRef& ex = p.examples[i];
      if (predict_label(model, *ex.g, *ex.cache, ex.vertex) == static_cast<int>(p.targets[i])) {
        ++hits;
      }
    }
    results["train_accuracy"] = static_cast<double>(hits) / static_cast<double>(p.examples.size());
  }
  json losses = json::array();
  for (const std::vector<double>& column : model.train_losses) {
    losses.push_back(column.back());
  }
  results["final_train_loss"] = losses;
  results["model_path"] = o.out;

  json report;
  report["manifest"] = base_manifest("train", o, cfg, p);
  report["results"] = results;
  write_report(o.report.empty() ? o.out + ".report.json" : o.report, report);

  std::cout << "trained " << objective_name(p.objective) << " model on "
            << p.examples.size() << " examples (" << p.ds.num_features() << " features); ";
  if (results.contains("train_accuracy")) {
    std::cout << "train accuracy " << results["train_accuracy"].get<double>();
  } else {
    std::cout << "train mse " << results["train_mse"].get<double>();
  }
  std::cout << "\nmodel written to " << o.out << "\n";
  return 0;
}

int cmd_predict(const Options& o) {
  if (o.model_path.empty()) throw std::invalid_argument("predict requires --model");
  const EnsembleModel model = load_model(o.model_path);
  Options adjusted = o;
  adjusted.task = task_name(model.task);
  const Prepared p = prepare(load_input(adjusted), adjusted,
                             std::max(model_max_walk_depth(model), model.config.max_depth_d));
  if (model.n_features != p.ds.num_features()) {
    throw std::invalid_argument("model expects " + std::to_string(model.n_features) +
                                " features, dataset has " + std::to_string(p.ds.num_features()));
  }
  json preds = json::array();
  int hits = 0;
  double sq = 0.0;
  const bool has_truth = !p.targets.empty();
  for (std::size_t i = 0; i < p.examples.size(); ++i) {
    const ExampleRef& ex = p.examples[i];
    json row;
    row["graph"] = p.example_graph[i];
    if (model.task == Task::Vertex) row["vertex"] = ex.vertex;
    if (model.objective == Objective::Regression) {
      const double v = predict_regression(model, *ex.g, *ex.cache, ex.vertex);
      row["value"] = v;
      if (has_truth) {
        const double d = v - p.targets[i];
        sq += d * d;
      }
    } else {
      const int label = predict_label(model, *ex.g, *ex.cache, ex.vertex);
      row["label"] = label;
      row["scores"] = predict_scores(model, *ex.g, *ex.cache, ex.vertex);
      if (has_truth && label == static_cast<int>(p.targets[i])) ++hits;
    }
    preds.push_back(row);
  }
  json results;
  results["predictions"] = preds;
  if (has_truth) {
    if (model.objective == Objective::Regression) {
      results["mse"] = sq / static_cast<double>(p.examples.size());
    } else {
      results["accuracy"] = static_cast<double>(hits) / static_cast<double>(p.examples.size());
    }
  }
  json report;
  report["manifest"] = base_manifest("predict", adjusted, model.config, p);
  report["manifest"]["model"] = o.model_path;
  report["results"] = results;
  write_report(o.out, report);
  std::cerr << "predicted " << p.examples.size() << " examples\n";
  return 0;
}

int cmd_cv(const Options& o) {
  const TrainConfig cfg = build_config(o);
  const Prepared p = prepare(load_input(o), o, cfg.max_depth_d);
  const std::vector<int> fold_of_graph = make_fold_assignment(p, o.folds, o.seed);
  const CvSummary s = run_cv(p, o, cfg, fold_of_graph);
  const bool classify = p.objective != Objective::Regression;

  json report;
  report["manifest"] = base_manifest("cv", o, cfg, p);
  report["manifest"]["cv"] = {{"folds", o.folds},
                              {"nested", o.nested},
                              {"inner_folds", o.nested ? o.inner_folds : 0}};
  json results = cv_summary_json(s, classify);
  results["fold_assignment"] = fold_of_graph;
  report["results"] = results;
  write_report(o.out, report);

  const char* metric = classify ? "accuracy" : "mse";
  for (std::size_t f = 0; f < s.per_fold.size(); ++f) {
    std::cerr << "fold " << f << ": " << metric << " " << s.per_fold[f] << "\n";
  }
  std::cerr << "mean " << s.mean << " +- " << s.stddev << ", best " << s.best << "\n";
  return 0;
}

int cmd_ablate(const Options& o) {
  const TrainConfig cfg = build_config(o);
  const Prepared p = prepare(load_input(o), o, cfg.max_depth_d);
  json report;
  report["manifest"] = base_manifest("ablate", o, cfg, p);
  report["manifest"]["cv"] = {{"folds", o.folds}};
  json results;

  if (p.objective == Objective::Regression) {
    // Walk-type study: one ensemble per single walk type, then the three
    // types that did not win combined, all on a shared train/test split.
    const std::vector<int> fold_of_graph = fold_assignment(p.ds.graphs.size(), o.folds, o.seed);
    const std::vector<int> train_idx = subset_indices(fold_of_graph, p.example_graph, 0, false);
    const std::vector<int> test_idx = subset_indices(fold_of_graph, p.example_graph, 0, true);
    std::vector<double> test_targets;
    for (int i : test_idx) test_targets.push_back(p.targets[static_cast<std::size_t>(i)]);
    results["label_variance"] = variance_of(test_targets);
    results["test_examples"] = static_cast<int>(test_idx.size());

    const std::array<WalkType, 4> kinds{WalkType::Source, WalkType::Cycle, WalkType::Target,
                                        WalkType::TargetSource};
    json single;
    double best_l2 = std::numeric_limits<double>::infinity();
    WalkType best_type = WalkType::Source;
    for (WalkType r : kinds) {
      TrainConfig run = cfg;
      run.allowed_walk_types = {false, false, false, false};
      run.allowed_walk_types[static_cast<std::size_t>(static_cast<int>(r) - 1)] = true;
      run.rng_seed = derive_seed(o.seed, 404, static_cast<std::uint64_t>(r));
      const double l2 =
          evaluate_fold(p, train_idx, test_idx, run, o.estimators, o.learning_rate).metric;
      single[walk_type_name(r)] = l2;
      if (l2 < best_l2) {
        best_l2 = l2;
        best_type = r;
      }
    }
    results["single_type_mse"] = single;
    results["best_type"] = walk_type_name(best_type);

    TrainConfig others = cfg;
    others.allowed_walk_types = {true, true, true, true};
    others.allowed_walk_types[static_cast<std::size_t>(static_cast<int>(best_type) - 1)] = false;
    others.rng_seed = derive_seed(o.seed, 404, 99);
    json others_names = json::array();
    for (WalkType r : kinds) {
      if (r != best_type) others_names.push_back(walk_type_name(r));
    }
    results["others_types"] = others_names;
    results["others_mse"] =
        evaluate_fold(p, train_idx, test_idx, others, o.estimators, o.learning_rate).metric;

    std::cerr << "best single walk type: " << walk_type_name(best_type) << " (mse " << best_l2
              << "), other three combined mse " << results["others_mse"].get<double>() << "\n";
  } else {
    // Capacity study: full model vs no-subsets (a=0) vs features-only
    // (d=0, a=0), sharing fold assignment and per-fold seeds.
    const std::vector<int> fold_of_graph = make_fold_assignment(p, o.folds, o.seed);
    results["fold_assignment"] = fold_of_graph;
    struct Variant {
      const char* key;
      int max_d, max_a;
    };
    const Variant variants[] = {{"full", o.max_d, o.max_a}, {"a0", o.max_d, 0}, {"d0a0", 0, 0}};
    std::map<std::string, double> means;
    for (const Variant& v : variants) {
      Options vo = o;
      vo.max_d = v.max_d;
      vo.max_a = v.max_a;
      vo.nested = false;
      TrainConfig vcfg = cfg;
      vcfg.max_depth_d = v.max_d;
      vcfg.max_ancestor_a = v.max_a;
      const CvSummary s = run_cv(p, vo, vcfg, fold_of_graph);
      json entry = cv_summary_json(s, true);
      entry["max_walk_depth"] = v.max_d;
      entry["max_ancestor_distance"] = v.max_a;
      results[v.key] = entry;
      means[v.key] = s.mean;
      std::cerr << v.key << ": mean accuracy " << s.mean << " +- " << s.stddev << ", best "
                << s.best << "\n";
    }
    results["ordering_ok"] = means["full"] >= means["a0"] && means["a0"] >= means["d0a0"] - 0.02;
  }

  report["results"] = results;
  write_report(o.out, report);
  return 0;
}

int cmd_explain(const Options& o) {
  if (o.model_path.empty()) throw std::invalid_argument("explain requires --model");
  const EnsembleModel model = load_model(o.model_path);
  Options adjusted = o;
  adjusted.task = task_name(model.task);
  const Prepared p = prepare(load_input(adjusted), adjusted,
                             std::max(model_max_walk_depth(model), model.config.max_depth_d));
  if (model.n_features != p.ds.num_features()) {
    throw std::invalid_argument("model expects " + std::to_string(model.n_features) +
                                " features, dataset has " + std::to_string(p.ds.num_features()));
  }
  if (o.index < -1 || o.index >= static_cast<int>(p.ds.graphs.size())) {
    throw std::invalid_argument("--index out of range");
  }
  const int vertex = model.task == Task::Vertex ? std::max(o.vertex, 0) : -1;
  std::vector<int> targets_idx;
  if (o.index >= 0) {
    targets_idx.push_back(o.index);
  } else {
    for (std::size_t i = 0; i < p.ds.graphs.size(); ++i) targets_idx.push_back(static_cast<int>(i));
  }

  json graphs = json::array();
  for (int gi : targets_idx) {
    const Graph& g = p.ds.graphs[static_cast<std::size_t>(gi)];
    const PropagationCache& cache = p.caches[static_cast<std::size_t>(gi)];
    if (vertex >= g.n) throw std::invalid_argument("--vertex out of range");
    const ExplanationReport rep = explain(model, g, cache, vertex);
    json entry;
    entry["graph"] = gi;
    if (model.task == Task::Vertex) entry["vertex"] = vertex;
    if (model.objective == Objective::Regression) {
      entry["prediction"] = predict_regression(model, g, cache, vertex);
    } else {
      entry["prediction"] = predict_label(model, g, cache, vertex);
    }
    entry["vertex_importance"] = rep.vertex_importance;
    json edges = json::array();
    for (const auto& [u, w] : rep.edges) edges.push_back({u, w});
    entry["edges"] = edges;
    entry["edge_importance"] = rep.edge_importance;
    graphs.push_back(entry);
    if (!o.dot_path.empty() && targets_idx.size() == 1) {
      std::ofstream dot(o.dot_path);
      if (!dot) throw std::runtime_error("cannot write DOT file: " + o.dot_path);
      dot << explanation_dot(g, rep);
    }
    // Human summary: top vertices by importance.
    std::vector<int> order(rep.vertex_importance.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return rep.vertex_importance[static_cast<std::size_t>(a)] >
             rep.vertex_importance[static_cast<std::size_t>(b)];
    });
    std::cerr << "graph " << gi << " top vertices:";
    for (std::size_t i = 0; i < order.size() && i < 5; ++i) {
      std::cerr << " " << order[i] << " ("
                << rep.vertex_importance[static_cast<std::size_t>(order[i])] << ")";
    }
    std::cerr << "\n";
  }

  json report;
  report["manifest"] = base_manifest("explain", adjusted, model.config, p);
  report["manifest"]["model"] = o.model_path;
  report["manifest"]["index"] = o.index;
  report["results"] = {{"graphs", graphs}};
  write_report(o.out, report);
  return 0;
}

int cmd_synth(const Options& o) {
  if (o.synth.empty()) throw std::invalid_argument("synth requires --synth KIND");
  if (o.out.empty()) throw std::invalid_argument("synth requires --out DIR");
  const SynthKind kind = synth_kind_from_name(o.synth);
  const GraphDataset ds = make_synth_dataset(kind, o.count, o.seed, o.walk_len);
  save_tudataset(ds, o.out, ds.name);

  json manifest;
  manifest["command"] = "synth";
  manifest["kind"] = o.synth;
  manifest["count"] = o.count;
  manifest["walk_len"] = o.walk_len;
  manifest["seed"] = std::to_string(o.seed);
  manifest["regression"] = synth_is_regression(kind);
  json results;
  results["graphs"] = static_cast<int>(ds.graphs.size());
  results["directory"] = o.out + "/" + ds.name;
  json report;
  report["manifest"] = manifest;
  report["results"] = results;
  write_report(o.out + "/" + ds.name + "/manifest.json", report);
  std::cout << "wrote " << ds.graphs.size() << " graphs to " << o.out << "/" << ds.name << "\n";
  return 0;
}

void add_input_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--data", o.data_dir, "directory holding <name>/<name>_*.txt files");
  cmd->add_option("--name", o.name, "dataset name inside --data");
  cmd->add_option("--synth", o.synth, "synthetic task name");
  cmd->add_option("--count", o.count, "synthetic graph count")->check(CLI::PositiveNumber);
  cmd->add_option("--walk-len", o.walk_len, "walk length for synthetic counting tasks")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--no-constant", o.no_constant, "do not append the constant-1 vertex feature");
}

void add_train_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--task", o.task, "graph or vertex")->check(CLI::IsMember({"graph", "vertex"}));
  cmd->add_option("--max-d", o.max_d, "walk depth bound")->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-a", o.max_a, "ancestor distance bound")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tree-depth", o.tree_depth, "structural tree depth bound")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-samples", o.min_samples, "minimum examples to split")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--estimators", o.estimators, "boosted trees per class")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--learning-rate", o.learning_rate, "boosting shrinkage");
  cmd->add_option("--walk-prob", o.walk_prob,
                  "per-node walk type sampling probability (default 0.25 graph, 0.5 vertex)");
  cmd->add_option("--walk-types", o.walk_types, "comma list of permitted walk types");
  cmd->add_option("--seed", o.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boosted decision trees over graph walk features"};
  app.require_subcommand(1);
  Options o;

  CLI::App* train = app.add_subcommand("train", "fit a model and save it");
  add_input_flags(train, o);
  add_train_flags(train, o);
  train->add_option("--out", o.out, "model output path");
  train->add_option("--report", o.report, "metrics report path (default <out>.report.json)");

  CLI::App* predict = app.add_subcommand("predict", "run a saved model over a dataset");
  add_input_flags(predict, o);
  predict->add_option("--model", o.model_path, "model file")->required();
  predict->add_option("--out", o.out, "report path (default: stdout)");

  CLI::App* cv = app.add_subcommand("cv", "k-fold cross validation");
  add_input_flags(cv, o);
  add_train_flags(cv, o);
  cv->add_option("--folds", o.folds, "number of folds")->check(CLI::Range(2, 1000));
  cv->add_flag("--nested", o.nested, "tune (max-d, max-a) on inner folds");
  cv->add_option("--inner-folds", o.inner_folds, "inner folds for --nested")
      ->check(CLI::Range(2, 1000));
  cv->add_option("--out", o.out, "report path (default: stdout)");

  CLI::App* ablate = app.add_subcommand(
      "ablate", "compare full model vs a=0 vs d=0,a=0 (or walk types on regression tasks)");
  add_input_flags(ablate, o);
  add_train_flags(ablate, o);
  ablate->add_option("--folds", o.folds, "number of folds")->check(CLI::Range(2, 1000));
  ablate->add_option("--out", o.out, "report path (default: stdout)");

  CLI::App* explain_cmd = app.add_subcommand("explain", "vertex and edge importance for a graph");
  add_input_flags(explain_cmd, o);
  explain_cmd->add_option("--model", o.model_path, "model file")->required();
  explain_cmd->add_option("--index", o.index, "graph index (-1: all graphs)");
  explain_cmd->add_option("--vertex", o.vertex, "vertex of interest for vertex-task models");
  explain_cmd->add_option("--dot", o.dot_path, "write a Graphviz file for the chosen graph");
  explain_cmd->add_option("--out", o.out, "report path (default: stdout)");

  CLI::App* synth = app.add_subcommand("synth", "write a synthetic dataset to disk");
  synth->add_option("--synth", o.synth, "synthetic task name")->required();
  synth->add_option("--count", o.count, "graph count")->check(CLI::PositiveNumber);
  synth->add_option("--walk-len", o.walk_len, "walk length for counting tasks")
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", o.seed, "random seed");
  synth->add_option("--out", o.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train->parsed()) return cmd_train(o);
    if (predict->parsed()) return cmd_predict(o);
    if (cv->parsed()) return cmd_cv(o);
    if (ablate->parsed()) return cmd_ablate(o);
    if (explain_cmd->parsed()) return cmd_explain(o);
    if (synth->parsed()) return cmd_synth(o);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
