#pragma once

#include <string>
#include <vector>

#include "treeg/tree.hpp"

namespace treeg {

enum class Objective { Regression, Binary, Multiclass };

const char* objective_name(Objective o);
Objective objective_from_name(const std::string& name);

// Boosted sequence of trees. Regression and binary models hold one tree list;
// multiclass holds one list per class (one-vs-all), trained with identical
// seeds so any class column equals the corresponding standalone binary model.
struct EnsembleModel {
  Task task = Task::Graph;
  Objective objective = Objective::Regression;
  int n_classes = 0;  // number of classes for multiclass, else 0
  double learning_rate = 0.1;
  std::vector<double> base_scores;       // size 1, or n_classes
  std::vector<std::vector<Tree>> trees;  // [class][estimator]; single row unless multiclass
  TrainConfig config;
  int n_features = 0;
  // Training loss after the base score and after each added tree, per class;
  // boosting must never let these increase.
  std::vector<std::vector<double>> train_losses;
};

// Targets: reals for regression, {0, 1} for binary, {0..C-1} for multiclass.
// Regression minimizes squared error (trees fit residuals); binary minimizes
// logistic loss (trees fit negative gradients, base score is the log-odds).
// Throws std::invalid_argument on label/task mismatch and std::logic_error if
// the training loss ever increases.
EnsembleModel fit_ensemble(const std::vector<ExampleRef>& examples,
                           const std::vector<double>& targets, int n_estimators,
                           double learning_rate, const TrainConfig& config, Task task,
                           Objective objective);

// Raw additive scores: base + learning_rate * sum of tree outputs. Size 1 for
// regression/binary, n_classes for multiclass.
std::vector<double> predict_scores(const EnsembleModel& model, const Graph& g,
                                   const PropagationCache& cache, int vertex = -1);

// Binary: 1 when sigmoid(score) > 0.5; multiclass: argmax score, ties to the
// lowest class index. Throws for regression models.
int predict_label(const EnsembleModel& model, const Graph& g, const PropagationCache& cache,
                  int vertex = -1);

double predict_regression(const EnsembleModel& model, const Graph& g,
                          const PropagationCache& cache, int vertex = -1);

double sigmoid(double x);

// Versioned JSON serialization; numeric fields round-trip exactly.
std::string model_to_json(const EnsembleModel& model);
EnsembleModel model_from_json(const std::string& text, const std::string& origin = "<string>");
void save_model(const EnsembleModel& model, const std::string& path);
EnsembleModel load_model(const std::string& path);

// Largest walk depth any split in the model uses; the propagation caches
// passed to predict must reach at least this deep.
int model_max_walk_depth(const EnsembleModel& model);

}  // namespace treeg
