#include "treeg/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "treeg/explain.hpp"
#include "treeg/rng.hpp"

namespace treeg {

void TrainConfig::validate() const {
  if (max_depth_d < 0 || max_ancestor_a < 0 || tree_max_depth < 0 || min_samples_split < 0) {
    throw std::invalid_argument("train config bounds must be >= 0");
  }
  if (walk_type_prob.has_value() && (*walk_type_prob < 0.0 || *walk_type_prob > 1.0)) {
    throw std::invalid_argument("walk_type_prob must be in [0, 1]");
  }
}

namespace {

constexpr WalkType kAllTypes[] = {WalkType::Source, WalkType::Cycle, WalkType::Target,
                                  WalkType::TargetSource};
constexpr Aggregator kAllAggs[] = {Aggregator::Sum, Aggregator::Mean, Aggregator::Min,
                                   Aggregator::Max};

std::vector<WalkType> permitted_types(const TrainConfig& config, Task task) {
  std::vector<WalkType> out;
  for (WalkType r : kAllTypes) {
    if (!config.allows(r)) continue;
    if (task == Task::Vertex && !vertex_task_allows(r)) continue;
    out.push_back(r);
  }
  return out;
}

// Fresh draws at every split node, seeded by (run seed, tree, node id) so any
// single tree is reproducible in isolation.
std::vector<WalkType> sample_walk_types(const TrainConfig& config, Task task,
                                        std::uint64_t tree_index, int node_id) {
  Rng rng(derive_seed(config.rng_seed, tree_index, static_cast<std::uint64_t>(node_id)));
  const double p = config.resolved_walk_prob(task);
  std::vector<WalkType> sampled;
  for (WalkType r : permitted_types(config, task)) {
    if (rng.next_bernoulli(p)) sampled.push_back(r);
  }
  return sampled;
}

std::vector<SubsetRef> available_refs(int stack_depth, int max_ancestor_a) {
  std::vector<SubsetRef> refs{SubsetRef{}};
  const int reach = std::min(stack_depth, max_ancestor_a);
  for (int q = 1; q <= reach; ++q) {
    refs.push_back(SubsetRef{q, +1});
    refs.push_back(SubsetRef{q, -1});
  }
  return refs;
}

const VertexSubset& resolve_subset(const NodeExample& ex, const SubsetRef& ref,
                                   const VertexSubset& full) {
  if (ref.is_all()) return full;
  const std::size_t depth = ex.generated.size();
  const auto& entry = ex.generated[depth - static_cast<std::size_t>(ref.offset)];
  return ref.sign > 0 ? entry.first : entry.second;
}

struct AggValues {
  double sum = 0.0, mean = 0.0, mn = 0.0, mx = 0.0;

  double get(Aggregator a) const {
    switch (a) {
      case Aggregator::Sum: return sum;
      case Aggregator::Mean: return mean;
      case Aggregator::Min: return mn;
      case Aggregator::Max: return mx;
    }
    return 0.0;
  }
};

AggValues stats_over_range(const double* data, int n) {
  AggValues out;
  out.mn = std::numeric_limits<double>::infinity();
  out.mx = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    out.sum += data[i];
    out.mn = std::min(out.mn, data[i]);
    out.mx = std::max(out.mx, data[i]);
  }
  out.mean = n > 0 ? out.sum / n : 0.0;
  return out;
}

struct EvalBuffers {
  Eigen::VectorXd masked;
  Eigen::VectorXd out;
};

// Evaluates one candidate quadruple (k, d, subset, type) on one example
// without materializing the masked matrix. Fills either the vertex-level phi
// (vertex tasks) or all four aggregator values at once (graph tasks). Both
// fitting and inference route through here, so their arithmetic is identical.
// A graph-task restricted aggregation over an empty subset yields zeros; the
// split search never emits such candidates, but a fitted split can meet an
// empty subset on unseen graphs and then reads phi = 0.
void eval_candidate(const ExampleRef& ex, int k, int d, const VertexSubset& subset, WalkType r,
                    Task task, EvalBuffers& buf, double* vertex_phi, AggValues* aggs) {
  const Graph& g = *ex.g;
  const PropagationCache& cache = *ex.cache;
  const auto du = static_cast<std::size_t>(d);
  const bool all = subset.is_all();

  auto stats_members_of = [&](auto&& value_at) {
    AggValues out;
    if (subset.empty()) return out;  // inference-only path; zeros by convention
    out.mn = std::numeric_limits<double>::infinity();
    out.mx = -std::numeric_limits<double>::infinity();
    for (int j : subset.members) {
      const double x = value_at(j);
      out.sum += x;
      out.mn = std::min(out.mn, x);
      out.mx = std::max(out.mx, x);
    }
    out.mean = out.sum / static_cast<double>(subset.size());
    return out;
  };

  switch (r) {
    case WalkType::Cycle: {
      auto value_at = [&](int j) { return cache.diagonals[du](j) * g.features(j, k); };
      if (task == Task::Vertex) {
        const bool in = all || std::binary_search(subset.members.begin(), subset.members.end(),
                                                  ex.vertex);
        *vertex_phi = in ? value_at(ex.vertex) : 0.0;
      } else {
        *aggs = stats_members_of(value_at);
      }
      return;
    }
    case WalkType::Target: {
      // 1_S ∘ (A^d f_k); aggregation is restricted to S, so masked-out rows
      // never enter the stats.
      auto col = cache.propagated[du].col(k);
      if (task == Task::Vertex) throw std::invalid_argument("target walks invalid for vertex tasks");
      *aggs = stats_members_of([&](int j) { return col(j); });
      return;
    }
    case WalkType::Source:
    case WalkType::TargetSource: {
      const bool ts = r == WalkType::TargetSource;
      if (all) {
        auto col = cache.propagated[du].col(k);
        if (task == Task::Vertex) {
          *vertex_phi = col(ex.vertex);
        } else if (ts) {
          *aggs = stats_members_of([&](int j) { return col(j); });
        } else {
          *aggs = stats_over_range(col.data(), g.n);
        }
        return;
      }
      if (subset.empty()) {
        // Every column is zeroed, so phi is the zero vector; the aggregates
        // over all n entries (Source) are zero as well.
        if (task == Task::Vertex) {
          *vertex_phi = 0.0;
        } else {
          *aggs = AggValues{};
        }
        return;
      }
      buf.masked.setZero(g.n);
      for (int j : subset.members) buf.masked(j) = g.features(j, k);
      buf.out.noalias() = cache.walks.powers[du] * buf.masked;
      if (task == Task::Vertex) {
        if (ts) throw std::invalid_argument("target-source walks invalid for vertex tasks");
        *vertex_phi = buf.out(ex.vertex);
      } else if (ts) {
        *aggs = stats_members_of([&](int j) { return buf.out(j); });
      } else {
        *aggs = stats_over_range(buf.out.data(), g.n);
      }
      return;
    }
  }
  throw std::invalid_argument("unknown walk type");
}

struct BestTracker {
  bool found = false;
  double gain = 0.0;
  SplitParams params;

  // Strict improvement only: the caller iterates specs in canonical order and
  // thresholds in ascending order, so ties keep the earlier spec and the
  // smaller threshold.
  void consider(double g, const SplitParams& p) {
    if (g <= 0.0) return;
    if (!found || g > gain) {
      found = true;
      gain = g;
      params = p;
    }
  }
};

// Threshold scan for one spec: sort phi, place candidate thresholds at
// midpoints between consecutive distinct values, and score by the reduction
// in sum of squared deviations.
void scan_spec(const std::vector<double>& phi, const std::vector<double>& targets,
               double total_sum, SplitParams params, std::vector<std::pair<double, int>>& order,
               BestTracker& best) {
  const std::size_t m = phi.size();
  order.clear();
  for (std::size_t i = 0; i < m; ++i) order.emplace_back(phi[i], static_cast<int>(i));
  std::sort(order.begin(), order.end());
  double sum_left = 0.0;
  const double parent = total_sum * total_sum / static_cast<double>(m);
  for (std::size_t pos = 0; pos + 1 < m; ++pos) {
    sum_left += targets[static_cast<std::size_t>(order[pos].second)];
    const double a = order[pos].first;
    const double b = order[pos + 1].first;
    if (a == b) continue;
    double theta = 0.5 * (a + b);
    // Keep phi > theta equivalent to phi >= b even if the midpoint rounds up.
    if (!(theta < b)) theta = a;
    const auto ml = static_cast<double>(pos + 1);
    const auto mr = static_cast<double>(m - pos - 1);
    const double sum_right = total_sum - sum_left;
    const double gain = sum_left * sum_left / ml + sum_right * sum_right / mr - parent;
    params.theta = theta;
    best.consider(gain, params);
  }
}

std::vector<WalkType> canonical_types(const std::vector<WalkType>& sampled, Task task) {
  std::vector<WalkType> types;
  for (WalkType r : kAllTypes) {
    if (task == Task::Vertex && !vertex_task_allows(r)) continue;
    if (std::find(sampled.begin(), sampled.end(), r) != sampled.end()) types.push_back(r);
  }
  return types;
}

int common_feature_count(const std::vector<NodeExample>& examples) {
  const int l = examples.front().ref.g->num_features();
  for (const NodeExample& ex : examples) {
    if (ex.ref.g->num_features() != l) {
      throw std::invalid_argument("examples disagree on feature count");
    }
  }
  return l;
}

struct ResolvedSubsets {
  std::vector<SubsetRef> refs;
  std::vector<std::vector<const VertexSubset*>> per_ref;  // [ref][example]
  std::vector<bool> any_empty;
};

ResolvedSubsets resolve_all(const std::vector<NodeExample>& examples,
                            const std::vector<VertexSubset>& fulls, int max_ancestor_a,
                            bool only_full) {
  const auto depth = static_cast<int>(examples.front().generated.size());
  for (const NodeExample& ex : examples) {
    if (static_cast<int>(ex.generated.size()) != depth) {
      throw std::invalid_argument("examples disagree on ancestor depth");
    }
  }
  ResolvedSubsets rs;
  rs.refs = only_full ? std::vector<SubsetRef>{SubsetRef{}} : available_refs(depth, max_ancestor_a);
  rs.per_ref.resize(rs.refs.size());
  rs.any_empty.assign(rs.refs.size(), false);
  for (std::size_t ri = 0; ri < rs.refs.size(); ++ri) {
    rs.per_ref[ri].reserve(examples.size());
    for (std::size_t e = 0; e < examples.size(); ++e) {
      const VertexSubset& s = resolve_subset(examples[e], rs.refs[ri], fulls[e]);
      rs.per_ref[ri].push_back(&s);
      if (s.empty()) rs.any_empty[ri] = true;
    }
  }
  return rs;
}

std::vector<VertexSubset> full_sets(const std::vector<NodeExample>& examples) {
  std::vector<VertexSubset> fulls;
  fulls.reserve(examples.size());
  for (const NodeExample& ex : examples) fulls.push_back(VertexSubset::all(ex.ref.g->n));
  return fulls;
}

}  // namespace

std::optional<SplitChoice> find_best_split(const std::vector<NodeExample>& examples,
                                           const std::vector<double>& targets,
                                           const std::vector<WalkType>& sampled_types,
                                           const TrainConfig& config, Task task,
                                           SplitSearchStats* stats) {
  if (examples.size() != targets.size()) {
    throw std::invalid_argument("examples and targets must align");
  }
  if (examples.empty() || static_cast<int>(examples.size()) < config.min_samples_split) {
    return std::nullopt;
  }
  const std::size_t m = examples.size();
  const int l = common_feature_count(examples);

  // When no walk type was sampled, the split still searches unmasked features
  // over the full vertex set.
  const bool none_sampled = sampled_types.empty();
  const std::vector<WalkType> types =
      none_sampled ? std::vector<WalkType>{WalkType::Source} : canonical_types(sampled_types, task);
  if (types.empty()) return std::nullopt;

  const std::vector<VertexSubset> fulls = full_sets(examples);
  const ResolvedSubsets rs = resolve_all(examples, fulls, config.max_ancestor_a, none_sampled);

  double total_sum = 0.0;
  for (double y : targets) total_sum += y;

  BestTracker best;
  EvalBuffers buf;
  std::vector<std::pair<double, int>> order;
  order.reserve(m);
  std::vector<double> phi(m);
  std::vector<AggValues> aggs(task == Task::Graph ? m : 0);

  for (int k = 0; k < l; ++k) {
    for (int d = 0; d <= config.max_depth_d; ++d) {
      for (std::size_t ri = 0; ri < rs.refs.size(); ++ri) {
        const SubsetRef ref = rs.refs[ri];
        for (WalkType r : types) {
          if (task == Task::Graph && r != WalkType::Source && rs.any_empty[ri]) continue;
          for (std::size_t e = 0; e < m; ++e) {
            eval_candidate(examples[e].ref, k, d, *rs.per_ref[ri][e], r, task, buf,
                           task == Task::Vertex ? &phi[e] : nullptr,
                           task == Task::Graph ? &aggs[e] : nullptr);
          }
          SplitParams params;
          params.k = k;
          params.d = d;
          params.subset_ref = ref;
          params.r = r;
          if (task == Task::Vertex) {
            params.agg = std::nullopt;
            if (stats) ++stats->candidates_evaluated;
            scan_spec(phi, targets, total_sum, params, order, best);
          } else {
            for (Aggregator agg : kAllAggs) {
              for (std::size_t e = 0; e < m; ++e) phi[e] = aggs[e].get(agg);
              params.agg = agg;
              if (stats) ++stats->candidates_evaluated;
              scan_spec(phi, targets, total_sum, params, order, best);
            }
          }
        }
      }
    }
  }
  if (!best.found) return std::nullopt;
  return SplitChoice{best.params, best.gain};
}

std::pair<VertexSubset, VertexSubset> generate_subsets(const SplitParams& split,
                                                       const VertexSubset& used_subset,
                                                       const Graph& g,
                                                       const PropagationCache& cache,
                                                       int node_id) {
  VertexSubset plus, minus;
  plus.origin_node = minus.origin_node = node_id;
  plus.sign = +1;
  minus.sign = -1;
  if (used_subset.empty()) return {plus, minus};

  // Sum aggregates |S| entries, so its threshold is rescaled to a per-vertex
  // level before membership testing; the other aggregators compare directly.
  double theta = split.theta;
  if (split.agg.has_value() && *split.agg == Aggregator::Sum) {
    theta /= static_cast<double>(used_subset.size());
  }
  const Eigen::VectorXd v = phi_vector(g, cache, split.k, split.d, used_subset, split.r);
  for (int j : used_subset.members) {
    (v(j) > theta ? plus : minus).members.push_back(j);
  }
  return {plus, minus};
}

namespace {

// Median midpoint of the pooled distinct vertex-level phi values; used when a
// node has no separating threshold but can still generate subsets that give
// its descendants something to split on.
std::optional<SplitChoice> find_structural_split(const std::vector<NodeExample>& examples,
                                                 const std::vector<WalkType>& sampled_types,
                                                 const TrainConfig& config, Task task) {
  const bool none_sampled = sampled_types.empty();
  const std::vector<WalkType> types =
      none_sampled ? std::vector<WalkType>{WalkType::Source} : canonical_types(sampled_types, task);
  if (types.empty()) return std::nullopt;
  const int l = common_feature_count(examples);
  const std::vector<VertexSubset> fulls = full_sets(examples);
  const ResolvedSubsets rs = resolve_all(examples, fulls, config.max_ancestor_a, none_sampled);

  std::vector<double> pooled;
  for (int k = 0; k < l; ++k) {
    for (int d = 0; d <= config.max_depth_d; ++d) {
      for (std::size_t ri = 0; ri < rs.refs.size(); ++ri) {
        // The chosen subset is partitioned by the split, so it must be
        // non-empty on every example to be worth generating from.
        if (rs.any_empty[ri]) continue;
        for (WalkType r : types) {
          pooled.clear();
          for (std::size_t e = 0; e < examples.size(); ++e) {
            const VertexSubset& used = *rs.per_ref[ri][e];
            const Eigen::VectorXd v = phi_vector(*examples[e].ref.g, *examples[e].ref.cache, k, d,
                                                 used, r);
            for (int j : used.members) pooled.push_back(v(j));
          }
          std::sort(pooled.begin(), pooled.end());
          pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
          if (pooled.size() < 2) continue;
          const std::size_t mid = (pooled.size() - 2) / 2;
          SplitParams params;
          params.k = k;
          params.d = d;
          params.subset_ref = rs.refs[ri];
          params.r = r;
          // Mean keeps the vertex-level threshold unscaled during subset
          // generation; vertex tasks carry no aggregator at all.
          params.agg = task == Task::Graph ? std::optional<Aggregator>(Aggregator::Mean)
                                           : std::nullopt;
          params.theta = 0.5 * (pooled[mid] + pooled[mid + 1]);
          if (!(params.theta < pooled[mid + 1])) params.theta = pooled[mid];
          return SplitChoice{params, 0.0};
        }
      }
    }
  }
  return std::nullopt;
}

class TreeFitter {
 public:
  TreeFitter(const TrainConfig& config, Task task, std::uint64_t tree_index,
             SplitSearchStats* stats, std::vector<double>* train_predictions)
      : config_(config), task_(task), tree_index_(tree_index), stats_(stats),
        train_predictions_(train_predictions) {}

  Tree run(const std::vector<ExampleRef>& examples, const std::vector<double>& targets) {
    std::vector<NodeExample> node_examples;
    node_examples.reserve(examples.size());
    std::vector<int> positions(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
      node_examples.push_back(NodeExample{examples[i], {}});
      positions[i] = static_cast<int>(i);
    }
    if (train_predictions_) train_predictions_->assign(examples.size(), 0.0);
    double root_mean = 0.0;
    for (double y : targets) root_mean += y;
    root_mean /= static_cast<double>(targets.size());
    n_features_ = common_feature_count(node_examples);
    fit_node(std::move(node_examples), targets, std::move(positions), 0, root_mean);
    Tree tree;
    tree.nodes = std::move(nodes_);
    tree.task = task_;
    tree.n_features = n_features_;
    return tree;
  }

 private:
  int fit_node(std::vector<NodeExample> examples, std::vector<double> targets,
               std::vector<int> positions, int depth, double parent_mean) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const std::size_t m = examples.size();
    if (m == 0) {
      // An empty route (possible under a structural split) predicts like its
      // parent.
      nodes_[id].value = parent_mean;
      return id;
    }
    double mean = 0.0;
    for (double y : targets) mean += y;
    mean /= static_cast<double>(m);
    bool pure = true;
    for (double y : targets) {
      if (y != targets.front()) {
        pure = false;
        break;
      }
    }
    if (pure || depth >= config_.tree_max_depth ||
        static_cast<int>(m) < config_.min_samples_split) {
      return make_leaf(id, mean, positions);
    }

    const std::vector<WalkType> sampled = sample_walk_types(config_, task_, tree_index_, id);
    std::optional<SplitChoice> choice =
        find_best_split(examples, targets, sampled, config_, task_, stats_);
    bool structural = false;
    if (!choice.has_value() && config_.max_ancestor_a >= 1 &&
        config_.tree_max_depth - depth >= 2) {
      choice = find_structural_split(examples, sampled, config_, task_);
      structural = choice.has_value();
    }
    if (!choice.has_value()) return make_leaf(id, mean, positions);

    const SplitParams& params = choice->params;
    nodes_[id].is_leaf = false;
    nodes_[id].value = mean;
    nodes_[id].split = params;
    nodes_[id].structural = structural;
    if (stats_) {
      ++stats_->split_nodes;
      if (structural) ++stats_->structural_splits;
    }

    std::vector<NodeExample> left, right;
    std::vector<double> left_y, right_y;
    std::vector<int> left_pos, right_pos;
    EvalBuffers buf;
    for (std::size_t e = 0; e < m; ++e) {
      NodeExample& ex = examples[e];
      const VertexSubset full = VertexSubset::all(ex.ref.g->n);
      const VertexSubset& used = resolve_subset(ex, params.subset_ref, full);
      auto generated = generate_subsets(params, used, *ex.ref.g, *ex.ref.cache, id);
      if (generated.first.size() + generated.second.size() != used.size()) {
        throw std::logic_error("generated subsets do not partition their parent");
      }
      double vertex_phi = 0.0;
      AggValues aggs;
      eval_candidate(ex.ref, params.k, params.d, used, params.r, task_, buf, &vertex_phi, &aggs);
      const double phi = task_ == Task::Vertex ? vertex_phi : aggs.get(*params.agg);
      ex.generated.push_back(std::move(generated));
      if (phi > params.theta) {
        left.push_back(std::move(ex));
        left_y.push_back(targets[e]);
        left_pos.push_back(positions[e]);
      } else {
        right.push_back(std::move(ex));
        right_y.push_back(targets[e]);
        right_pos.push_back(positions[e]);
      }
    }
    examples.clear();
    targets.clear();
    positions.clear();

    const int li =
        fit_node(std::move(left), std::move(left_y), std::move(left_pos), depth + 1, mean);
    const int ri =
        fit_node(std::move(right), std::move(right_y), std::move(right_pos), depth + 1, mean);
    nodes_[id].left = li;
    nodes_[id].right = ri;
    return id;
  }

  int make_leaf(int id, double value, const std::vector<int>& positions) {
    nodes_[id].value = value;
    if (train_predictions_) {
      for (int pos : positions) (*train_predictions_)[static_cast<std::size_t>(pos)] = value;
    }
    return id;
  }

  const TrainConfig& config_;
  Task task_;
  std::uint64_t tree_index_;
  SplitSearchStats* stats_;
  std::vector<double>* train_predictions_;
  std::vector<TreeNode> nodes_;
  int n_features_ = 0;
};

}  // namespace

Tree fit_tree(const std::vector<ExampleRef>& examples, const std::vector<double>& targets,
              const TrainConfig& config, Task task, std::uint64_t tree_index,
              SplitSearchStats* stats, std::vector<double>* train_predictions) {
  config.validate();
  if (examples.empty()) throw std::invalid_argument("cannot fit a tree on zero examples");
  if (examples.size() != targets.size()) {
    throw std::invalid_argument("examples and targets must align");
  }
  for (const ExampleRef& ex : examples) {
    if (ex.g == nullptr || ex.cache == nullptr) throw std::invalid_argument("null example");
    if (ex.cache->max_depth() < config.max_depth_d) {
      throw std::invalid_argument("propagation cache too shallow for configured walk depth");
    }
    if (task == Task::Vertex && (ex.vertex < 0 || ex.vertex >= ex.g->n)) {
      throw std::invalid_argument("vertex-task example needs a valid vertex index");
    }
  }
  TreeFitter fitter(config, task, tree_index, stats, train_predictions);
  return fitter.run(examples, targets);
}

TreePrediction predict_tree(const Tree& tree, const Graph& g, const PropagationCache& cache,
                            int vertex, bool record_edges) {
  if (tree.nodes.empty()) throw std::invalid_argument("empty tree");
  if (tree.n_features > 0 && g.num_features() != tree.n_features) {
    throw std::invalid_argument("graph feature count differs from the fitted tree");
  }
  const Task task = tree.task;
  if (task == Task::Vertex && (vertex < 0 || vertex >= g.n)) {
    throw std::invalid_argument("vertex-task prediction needs a valid vertex index");
  }
  if (task == Task::Graph && vertex >= 0) {
    throw std::invalid_argument("graph-task prediction takes no vertex index");
  }
  TreePrediction out;
  const VertexSubset full = VertexSubset::all(g.n);
  std::vector<std::pair<VertexSubset, VertexSubset>> stack;
  std::optional<AbsPowers> abs;
  EvalBuffers buf;
  ExampleRef ref{&g, &cache, vertex};
  int cur = 0;
  while (!tree.nodes[static_cast<std::size_t>(cur)].is_leaf) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(cur)];
    const SplitParams& params = node.split;
    if (params.d > cache.max_depth()) {
      throw std::invalid_argument("propagation cache too shallow for fitted tree");
    }
    const SubsetRef& sref = params.subset_ref;
    if (!sref.is_all() && static_cast<std::size_t>(sref.offset) > stack.size()) {
      throw std::invalid_argument("subset reference reaches above the prediction path");
    }
    const std::pair<VertexSubset, VertexSubset>* entry =
        sref.is_all() ? nullptr : &stack[stack.size() - static_cast<std::size_t>(sref.offset)];
    const VertexSubset& used =
        sref.is_all() ? full : (sref.sign > 0 ? entry->first : entry->second);
    PathStep step;
    step.node_id = cur;
    step.selected = used;
    if (record_edges) {
      if (!abs.has_value()) abs = abs_walk_powers(g, cache.max_depth());
      step.used_arcs = used_arcs_for_split(g, *abs, used, params.r, params.d);
    }
    out.path.push_back(std::move(step));

    double vertex_phi = 0.0;
    AggValues aggs;
    eval_candidate(ref, params.k, params.d, used, params.r, task, buf, &vertex_phi, &aggs);
    const double phi = task == Task::Vertex ? vertex_phi : aggs.get(*params.agg);
    stack.push_back(generate_subsets(params, used, g, cache, cur));
    cur = phi > params.theta ? node.left : node.right;
  }
  out.value = tree.nodes[static_cast<std::size_t>(cur)].value;
  return out;
}

double predict_tree_value(const Tree& tree, const Graph& g, const PropagationCache& cache,
                          int vertex) {
  return predict_tree(tree, g, cache, vertex, false).value;
}

}  // namespace treeg
