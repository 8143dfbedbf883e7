#include "treeg/feature.hpp"

#include <algorithm>
#include <limits>

namespace treeg {

const char* task_name(Task t) {
  return t == Task::Graph ? "graph" : "vertex";
}

Task task_from_name(const std::string& name) {
  if (name == "graph") return Task::Graph;
  if (name == "vertex") return Task::Vertex;
  throw std::invalid_argument("unknown task: " + name);
}

const char* aggregator_name(Aggregator a) {
  switch (a) {
    case Aggregator::Sum: return "sum";
    case Aggregator::Mean: return "mean";
    case Aggregator::Min: return "min";
    case Aggregator::Max: return "max";
  }
  throw std::invalid_argument("unknown aggregator");
}

Aggregator aggregator_from_name(const std::string& name) {
  if (name == "sum") return Aggregator::Sum;
  if (name == "mean") return Aggregator::Mean;
  if (name == "min") return Aggregator::Min;
  if (name == "max") return Aggregator::Max;
  throw std::invalid_argument("unknown aggregator: " + name);
}

static void check_feature_index(const Graph& g, int k) {
  if (k < 0 || k >= g.num_features()) throw std::invalid_argument("feature index out of range");
}

Eigen::VectorXd phi_vector(const Graph& g, const WalkMatrixCache& cache, int k, int d,
                           const VertexSubset& subset, WalkType r) {
  check_feature_index(g, k);
  if (d < 0 || d > cache.max_depth()) throw std::invalid_argument("walk depth out of range");
  return masked_walks(cache.powers[static_cast<std::size_t>(d)], subset, r) * g.features.col(k);
}

Eigen::VectorXd phi_vector(const Graph& g, const PropagationCache& cache, int k, int d,
                           const VertexSubset& subset, WalkType r) {
  check_feature_index(g, k);
  if (d < 0 || d > cache.max_depth()) throw std::invalid_argument("walk depth out of range");
  const auto du = static_cast<std::size_t>(d);
  switch (r) {
    case WalkType::Source: {
      if (subset.is_all()) return cache.propagated[du].col(k);
      Eigen::VectorXd masked = Eigen::VectorXd::Zero(g.n);
      for (int j : subset.members) masked(j) = g.features(j, k);
      return cache.walks.powers[du] * masked;
    }
    case WalkType::Target: {
      if (subset.is_all()) return cache.propagated[du].col(k);
      Eigen::VectorXd out = Eigen::VectorXd::Zero(g.n);
      for (int j : subset.members) out(j) = cache.propagated[du](j, k);
      return out;
    }
    case WalkType::TargetSource: {
      if (subset.is_all()) return cache.propagated[du].col(k);
      Eigen::VectorXd masked = Eigen::VectorXd::Zero(g.n);
      for (int j : subset.members) masked(j) = g.features(j, k);
      Eigen::VectorXd prop = cache.walks.powers[du] * masked;
      Eigen::VectorXd out = Eigen::VectorXd::Zero(g.n);
      for (int j : subset.members) out(j) = prop(j);
      return out;
    }
    case WalkType::Cycle: {
      Eigen::VectorXd out = Eigen::VectorXd::Zero(g.n);
      for (int j : subset.members) out(j) = cache.diagonals[du](j) * g.features(j, k);
      return out;
    }
  }
  throw std::invalid_argument("unknown walk type");
}

double aggregate_phi(const Eigen::VectorXd& v, const VertexSubset& subset, WalkType r,
                     Aggregator agg) {
  if (r == WalkType::Source) {
    switch (agg) {
      case Aggregator::Sum: return v.sum();
      case Aggregator::Mean: return v.mean();
      case Aggregator::Min: return v.minCoeff();
      case Aggregator::Max: return v.maxCoeff();
    }
    throw std::invalid_argument("unknown aggregator");
  }
  if (subset.empty()) throw EmptyAggregationError();
  double sum = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  for (int j : subset.members) {
    const double x = v(j);
    sum += x;
    mn = std::min(mn, x);
    mx = std::max(mx, x);
  }
  switch (agg) {
    case Aggregator::Sum: return sum;
    case Aggregator::Mean: return sum / static_cast<double>(subset.size());
    case Aggregator::Min: return mn;
    case Aggregator::Max: return mx;
  }
  throw std::invalid_argument("unknown aggregator");
}

double phi_vertex(const Graph& g, const WalkMatrixCache& cache, const FeatureSpec& spec, int i) {
  if (spec.agg.has_value()) throw std::invalid_argument("vertex-task spec must not aggregate");
  if (!vertex_task_allows(spec.r)) {
    throw std::invalid_argument("vertex-task spec requires source or cycle walks");
  }
  if (i < 0 || i >= g.n) throw std::invalid_argument("vertex index out of range");
  return phi_vector(g, cache, spec.k, spec.d, spec.subset, spec.r)(i);
}

double phi_graph(const Graph& g, const WalkMatrixCache& cache, const FeatureSpec& spec) {
  if (!spec.agg.has_value()) throw std::invalid_argument("graph-task spec requires an aggregator");
  Eigen::VectorXd v = phi_vector(g, cache, spec.k, spec.d, spec.subset, spec.r);
  return aggregate_phi(v, spec.subset, spec.r, *spec.agg);
}

std::vector<FeatureSpec> enumerate_candidate_specs(int num_features, int max_depth,
                                                   const std::vector<VertexSubset>& available_subsets,
                                                   const std::vector<WalkType>& sampled_types,
                                                   Task task) {
  // Canonical walk-type order regardless of the order types were sampled in.
  std::vector<WalkType> types;
  for (WalkType r : {WalkType::Source, WalkType::Cycle, WalkType::Target, WalkType::TargetSource}) {
    if (task == Task::Vertex && !vertex_task_allows(r)) continue;
    if (std::find(sampled_types.begin(), sampled_types.end(), r) != sampled_types.end()) {
      types.push_back(r);
    }
  }
  static constexpr Aggregator kAggs[] = {Aggregator::Sum, Aggregator::Mean, Aggregator::Min,
                                         Aggregator::Max};
  std::vector<FeatureSpec> specs;
  for (int k = 0; k < num_features; ++k) {
    for (int d = 0; d <= max_depth; ++d) {
      for (const VertexSubset& subset : available_subsets) {
        for (WalkType r : types) {
          if (task == Task::Vertex) {
            specs.push_back(FeatureSpec{k, d, subset, r, std::nullopt});
          } else {
            // Restricted aggregation over an empty subset is undefined; those
            // candidates are never emitted. Source aggregates over all
            // entries, so it stays legal for an empty subset (phi is zero).
            if (r != WalkType::Source && subset.empty()) continue;
            for (Aggregator agg : kAggs) {
              specs.push_back(FeatureSpec{k, d, subset, r, agg});
            }
          }
        }
      }
    }
  }
  return specs;
}

}  // namespace treeg
