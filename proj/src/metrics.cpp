#include "treeg/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "treeg/rng.hpp"

namespace treeg {

double accuracy(const std::vector<int>& labels, const std::vector<int>& predictions) {
  if (labels.size() != predictions.size()) {
    throw std::invalid_argument("label/prediction size mismatch");
  }
  if (labels.empty()) throw std::invalid_argument("accuracy of an empty set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == predictions[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double mean_squared_error_of(const std::vector<double>& targets,
                             const std::vector<double>& predictions) {
  if (targets.size() != predictions.size()) {
    throw std::invalid_argument("target/prediction size mismatch");
  }
  if (targets.empty()) throw std::invalid_argument("mse of an empty set");
  double acc = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const double d = targets[i] - predictions[i];
    acc += d * d;
  }
  return acc / static_cast<double>(targets.size());
}

double variance_of(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("variance of an empty set");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double acc = 0.0;
  for (double v : values) acc += (v - mean) * (v - mean);
  return acc / static_cast<double>(values.size());
}

std::vector<int> stratified_fold_assignment(const std::vector<int>& labels, int k,
                                            std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("need at least 2 folds");
  if (labels.empty()) throw std::invalid_argument("no examples to fold");
  const int n_classes = 1 + *std::max_element(labels.begin(), labels.end());
  std::vector<std::vector<int>> by_class(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw std::invalid_argument("labels must be non-negative");
    by_class[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
  }
  std::vector<int> fold(labels.size(), -1);
  for (int c = 0; c < n_classes; ++c) {
    std::vector<int>& members = by_class[static_cast<std::size_t>(c)];
    if (static_cast<int>(members.size()) < k) {
      throw std::invalid_argument("class " + std::to_string(c) + " has fewer than " +
                                  std::to_string(k) + " examples");
    }
    Rng rng(derive_seed(seed, 17, static_cast<std::uint64_t>(c)));
    rng.shuffle(members);
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
      fold[static_cast<std::size_t>(members[pos])] = static_cast<int>(pos % static_cast<std::size_t>(k));
    }
  }
  return fold;
}

std::vector<int> fold_assignment(std::size_t count, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("need at least 2 folds");
  if (count < static_cast<std::size_t>(k)) {
    throw std::invalid_argument("fewer examples than folds");
  }
  std::vector<int> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = static_cast<int>(i);
  Rng rng(derive_seed(seed, 17, 0));
  rng.shuffle(order);
  std::vector<int> fold(count, -1);
  for (std::size_t pos = 0; pos < count; ++pos) {
    fold[static_cast<std::size_t>(order[pos])] = static_cast<int>(pos % static_cast<std::size_t>(k));
  }
  return fold;
}

}  // namespace treeg
