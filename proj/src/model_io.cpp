#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "treeg/ensemble.hpp"

namespace treeg {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr const char* kFormatName = "treeg-model";
constexpr int kFormatVersion = 1;

ordered_json node_to_json(const TreeNode& node) {
  ordered_json j;
  j["leaf"] = node.is_leaf;
  j["value"] = node.value;
  if (!node.is_leaf) {
    j["k"] = node.split.k;
    j["d"] = node.split.d;
    j["offset"] = node.split.subset_ref.offset;
    j["sign"] = node.split.subset_ref.sign;
    j["walk"] = walk_type_name(node.split.r);
    if (node.split.agg.has_value()) {
      j["agg"] = aggregator_name(*node.split.agg);
    } else {
      j["agg"] = nullptr;
    }
    j["theta"] = node.split.theta;
    j["left"] = node.left;
    j["right"] = node.right;
    j["structural"] = node.structural;
  }
  return j;
}

TreeNode node_from_json(const ordered_json& j, int node_count) {
  TreeNode node;
  node.is_leaf = j.at("leaf").get<bool>();
  node.value = j.at("value").get<double>();
  if (!node.is_leaf) {
    node.split.k = j.at("k").get<int>();
    node.split.d = j.at("d").get<int>();
    node.split.subset_ref.offset = j.at("offset").get<int>();
    node.split.subset_ref.sign = j.at("sign").get<int>();
    node.split.r = walk_type_from_name(j.at("walk").get<std::string>());
    if (j.at("agg").is_null()) {
      node.split.agg = std::nullopt;
    } else {
      node.split.agg = aggregator_from_name(j.at("agg").get<std::string>());
    }
    node.split.theta = j.at("theta").get<double>();
    node.left = j.at("left").get<int>();
    node.right = j.at("right").get<int>();
    node.structural = j.value("structural", false);
    if (node.left < 0 || node.left >= node_count || node.right < 0 || node.right >= node_count) {
      throw std::invalid_argument("tree node child index out of range");
    }
    if (node.split.k < 0 || node.split.d < 0 || node.split.subset_ref.offset < 0 ||
        (node.split.subset_ref.sign != 1 && node.split.subset_ref.sign != -1)) {
      throw std::invalid_argument("tree node split fields out of range");
    }
  }
  return node;
}

ordered_json tree_to_json(const Tree& tree) {
  ordered_json nodes = ordered_json::array();
  for (const TreeNode& node : tree.nodes) nodes.push_back(node_to_json(node));
  return nodes;
}

Tree tree_from_json(const ordered_json& j, Task task, int n_features) {
  Tree tree;
  tree.task = task;
  tree.n_features = n_features;
  const int count = static_cast<int>(j.size());
  for (const ordered_json& nj : j) tree.nodes.push_back(node_from_json(nj, count));
  if (tree.nodes.empty()) throw std::invalid_argument("tree has no nodes");
  return tree;
}

ordered_json config_to_json(const TrainConfig& config) {
  ordered_json j;
  j["max_depth_d"] = config.max_depth_d;
  j["max_ancestor_a"] = config.max_ancestor_a;
  j["tree_max_depth"] = config.tree_max_depth;
  j["min_samples_split"] = config.min_samples_split;
  if (config.walk_type_prob.has_value()) {
    j["walk_type_prob"] = *config.walk_type_prob;
  } else {
    j["walk_type_prob"] = nullptr;
  }
  // Decimal string: JSON numbers cannot carry all 64 seed bits exactly.
  j["rng_seed"] = std::to_string(config.rng_seed);
  ordered_json allowed = ordered_json::array();
  for (WalkType r : {WalkType::Source, WalkType::Cycle, WalkType::Target, WalkType::TargetSource}) {
    if (config.allows(r)) allowed.push_back(walk_type_name(r));
  }
  j["allowed_walk_types"] = allowed;
  return j;
}

TrainConfig config_from_json(const ordered_json& j) {
  TrainConfig config;
  config.max_depth_d = j.at("max_depth_d").get<int>();
  config.max_ancestor_a = j.at("max_ancestor_a").get<int>();
  config.tree_max_depth = j.at("tree_max_depth").get<int>();
  config.min_samples_split = j.at("min_samples_split").get<int>();
  if (!j.at("walk_type_prob").is_null()) {
    config.walk_type_prob = j.at("walk_type_prob").get<double>();
  }
  config.rng_seed = std::stoull(j.at("rng_seed").get<std::string>());
  config.allowed_walk_types = {false, false, false, false};
  for (const ordered_json& name : j.at("allowed_walk_types")) {
    const WalkType r = walk_type_from_name(name.get<std::string>());
    config.allowed_walk_types[static_cast<std::size_t>(static_cast<int>(r) - 1)] = true;
  }
  config.validate();
  return config;
}

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return "line " + std::to_string(line);
}

}  // namespace

std::string model_to_json(const EnsembleModel& model) {
  ordered_json j;
  j["format"] = kFormatName;
  j["version"] = kFormatVersion;
  j["task"] = task_name(model.task);
  j["objective"] = objective_name(model.objective);
  j["n_classes"] = model.n_classes;
  j["learning_rate"] = model.learning_rate;
  j["n_features"] = model.n_features;
  j["base_scores"] = model.base_scores;
  j["config"] = config_to_json(model.config);
  ordered_json columns = ordered_json::array();
  for (const auto& column : model.trees) {
    ordered_json trees = ordered_json::array();
    for (const Tree& tree : column) trees.push_back(tree_to_json(tree));
    columns.push_back(std::move(trees));
  }
  j["trees"] = columns;
  return j.dump(2) + "\n";
}

EnsembleModel model_from_json(const std::string& text, const std::string& origin) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(origin + ": malformed model file (" + line_context(text, e.byte) +
                             "): " + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kFormatName) {
      throw std::invalid_argument("not a model file (unexpected format field)");
    }
    if (j.at("version").get<int>() != kFormatVersion) {
      throw std::invalid_argument("unsupported model format version " +
                                  std::to_string(j.at("version").get<int>()));
    }
    EnsembleModel model;
    model.task = task_from_name(j.at("task").get<std::string>());
    model.objective = objective_from_name(j.at("objective").get<std::string>());
    model.n_classes = j.at("n_classes").get<int>();
    model.learning_rate = j.at("learning_rate").get<double>();
    model.n_features = j.at("n_features").get<int>();
    model.base_scores = j.at("base_scores").get<std::vector<double>>();
    model.config = config_from_json(j.at("config"));
    for (const ordered_json& column : j.at("trees")) {
      model.trees.emplace_back();
      for (const ordered_json& tj : column) {
        model.trees.back().push_back(tree_from_json(tj, model.task, model.n_features));
      }
    }
    if (model.trees.size() != model.base_scores.size() || model.trees.empty()) {
      throw std::invalid_argument("tree columns and base scores disagree");
    }
    const std::size_t expected =
        model.objective == Objective::Multiclass ? static_cast<std::size_t>(model.n_classes) : 1;
    if (model.trees.size() != expected) {
      throw std::invalid_argument("tree column count does not match the objective");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(origin + ": invalid model file: " + e.what());
  }
}

void save_model(const EnsembleModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << model_to_json(model);
  if (!out) throw std::runtime_error("failed writing model file: " + path);
}

EnsembleModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str(), path);
}

}  // namespace treeg
