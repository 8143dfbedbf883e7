#include "treeg/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treeg {

const char* objective_name(Objective o) {
  switch (o) {
    case Objective::Regression: return "regression";
    case Objective::Binary: return "binary";
    case Objective::Multiclass: return "multiclass";
  }
  throw std::invalid_argument("unknown objective");
}

Objective objective_from_name(const std::string& name) {
  if (name == "regression") return Objective::Regression;
  if (name == "binary") return Objective::Binary;
  if (name == "multiclass") return Objective::Multiclass;
  throw std::invalid_argument("unknown objective: " + name);
}

double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace {

constexpr double kProbClamp = 1e-12;

double clamp_prob(double p) { return std::min(1.0 - kProbClamp, std::max(kProbClamp, p)); }

double mean_squared_error(const std::vector<double>& y, const std::vector<double>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - f[i];
    sum += d * d;
  }
  return sum / static_cast<double>(y.size());
}

double mean_log_loss(const std::vector<double>& y, const std::vector<double>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double p = clamp_prob(sigmoid(f[i]));
    sum += y[i] > 0.5 ? -std::log(p) : -std::log(1.0 - p);
  }
  return sum / static_cast<double>(y.size());
}

void check_non_increasing(std::vector<double>& losses, double next) {
  if (!losses.empty()) {
    const double prev = losses.back();
    if (next > prev + 1e-9 * (1.0 + std::abs(prev))) {
      throw std::logic_error("training loss increased while boosting");
    }
  }
  losses.push_back(next);
}

// One boosted column: regression on raw targets, or logistic boosting on 0/1
// targets. Trees always fit pseudo-residuals with plain mean leaves; the
// learning rate scales their contribution.
void fit_column(const std::vector<ExampleRef>& examples, const std::vector<double>& targets,
                int n_estimators, double learning_rate, const TrainConfig& config, Task task,
                bool logistic, std::vector<Tree>& trees, double& base_score,
                std::vector<double>& losses) {
  const std::size_t m = examples.size();
  std::vector<double> f(m, 0.0);
  if (logistic) {
    double p = 0.0;
    for (double y : targets) p += y;
    p = clamp_prob(p / static_cast<double>(m));
    base_score = std::log(p / (1.0 - p));
  } else {
    base_score = 0.0;
    for (double y : targets) base_score += y;
    base_score /= static_cast<double>(m);
  }
  std::fill(f.begin(), f.end(), base_score);
  check_non_increasing(losses, logistic ? mean_log_loss(targets, f) : mean_squared_error(targets, f));

  std::vector<double> residual(m);
  std::vector<double> tree_pred;
  for (int t = 0; t < n_estimators; ++t) {
    for (std::size_t i = 0; i < m; ++i) {
      residual[i] = logistic ? targets[i] - sigmoid(f[i]) : targets[i] - f[i];
    }
    Tree tree = fit_tree(examples, residual, config, task, static_cast<std::uint64_t>(t), nullptr,
                         &tree_pred);
    for (std::size_t i = 0; i < m; ++i) f[i] += learning_rate * tree_pred[i];
    trees.push_back(std::move(tree));
    check_non_increasing(losses,
                         logistic ? mean_log_loss(targets, f) : mean_squared_error(targets, f));
  }
}

}  // namespace

EnsembleModel fit_ensemble(const std::vector<ExampleRef>& examples,
                           const std::vector<double>& targets, int n_estimators,
                           double learning_rate, const TrainConfig& config, Task task,
                           Objective objective) {
  config.validate();
  if (examples.empty() || examples.size() != targets.size()) {
    throw std::invalid_argument("examples and targets must align and be non-empty");
  }
  if (n_estimators < 0) throw std::invalid_argument("n_estimators must be >= 0");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");

  EnsembleModel model;
  model.task = task;
  model.objective = objective;
  model.learning_rate = learning_rate;
  model.config = config;
  model.n_features = examples.front().g->num_features();

  switch (objective) {
    case Objective::Regression: {
      model.trees.emplace_back();
      model.base_scores.push_back(0.0);
      model.train_losses.emplace_back();
      fit_column(examples, targets, n_estimators, learning_rate, config, task, false,
                 model.trees[0], model.base_scores[0], model.train_losses[0]);
      break;
    }
    case Objective::Binary: {
      for (double y : targets) {
        if (y != 0.0 && y != 1.0) throw std::invalid_argument("binary targets must be 0 or 1");
      }
      model.trees.emplace_back();
      model.base_scores.push_back(0.0);
      model.train_losses.emplace_back();
      fit_column(examples, targets, n_estimators, learning_rate, config, task, true,
                 model.trees[0], model.base_scores[0], model.train_losses[0]);
      break;
    }
    case Objective::Multiclass: {
      int n_classes = 0;
      for (double y : targets) {
        const double r = std::floor(y);
        if (r != y || y < 0.0) throw std::invalid_argument("multiclass targets must be 0..C-1");
        n_classes = std::max(n_classes, static_cast<int>(r) + 1);
      }
      if (n_classes < 2) throw std::invalid_argument("multiclass needs at least two classes");
      model.n_classes = n_classes;
      std::vector<double> binarized(targets.size());
      for (int c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < targets.size(); ++i) {
          binarized[i] = targets[i] == static_cast<double>(c) ? 1.0 : 0.0;
        }
        model.trees.emplace_back();
        model.base_scores.push_back(0.0);
        model.train_losses.emplace_back();
        // Same config (and therefore the same seeds) for every class: each
        // class column is exactly the binary model for its one-vs-all labels.
        fit_column(examples, binarized, n_estimators, learning_rate, config, task, true,
                   model.trees[static_cast<std::size_t>(c)],
                   model.base_scores[static_cast<std::size_t>(c)],
                   model.train_losses[static_cast<std::size_t>(c)]);
      }
      break;
    }
  }
  return model;
}

std::vector<double> predict_scores(const EnsembleModel& model, const Graph& g,
                                   const PropagationCache& cache, int vertex) {
  if (g.num_features() != model.n_features) {
    throw std::invalid_argument("graph feature count differs from the fitted model");
  }
  std::vector<double> scores;
  scores.reserve(model.trees.size());
  for (std::size_t c = 0; c < model.trees.size(); ++c) {
    double s = model.base_scores[c];
    for (const Tree& tree : model.trees[c]) {
      s += model.learning_rate * predict_tree_value(tree, g, cache, vertex);
    }
    scores.push_back(s);
  }
  return scores;
}

int predict_label(const EnsembleModel& model, const Graph& g, const PropagationCache& cache,
                  int vertex) {
  const std::vector<double> scores = predict_scores(model, g, cache, vertex);
  switch (model.objective) {
    case Objective::Binary:
      return sigmoid(scores[0]) > 0.5 ? 1 : 0;
    case Objective::Multiclass: {
      int best = 0;
      for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
      }
      return best;
    }
    case Objective::Regression:
      throw std::invalid_argument("regression models have no label");
  }
  throw std::invalid_argument("unknown objective");
}

double predict_regression(const EnsembleModel& model, const Graph& g,
                          const PropagationCache& cache, int vertex) {
  if (model.objective != Objective::Regression) {
    throw std::invalid_argument("model is not a regression model");
  }
  return predict_scores(model, g, cache, vertex)[0];
}

int model_max_walk_depth(const EnsembleModel& model) {
  int depth = 0;
  for (const auto& column : model.trees) {
    for (const Tree& tree : column) {
      for (const TreeNode& node : tree.nodes) {
        if (!node.is_leaf) depth = std::max(depth, node.split.d);
      }
    }
  }
  return depth;
}

}  // namespace treeg
