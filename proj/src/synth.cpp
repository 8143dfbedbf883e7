#include "treeg/synth.hpp"

#include <stdexcept>

#include "treeg/rng.hpp"

namespace treeg {

namespace {

constexpr int kRedIsolatedVertices = 50;
constexpr int kWalkTaskVertices = 10;
constexpr double kEdgeProb = 0.1;
constexpr double kRedProb = 0.3;
// Walk-count tasks use denser graphs and an even color split so that the
// per-color walk counts carry most of the target variance instead of being
// drowned by the sparsity noise of individual arcs.
constexpr double kWalkEdgeProb = 0.5;
constexpr double kWalkRedProb = 0.5;

Eigen::MatrixXd undirected_er(int n, double p, Rng& rng) {
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.next_bernoulli(p)) adj(i, j) = adj(j, i) = 1.0;
    }
  }
  return adj;
}

// Directed ER: an arc from i to j is stored as adj(j, i) = 1.
Eigen::MatrixXd directed_er(int n, double p, Rng& rng) {
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && rng.next_bernoulli(p)) adj(j, i) = 1.0;
    }
  }
  return adj;
}

Eigen::VectorXd random_red(int n, Rng& rng, double prob = kRedProb) {
  Eigen::VectorXd red(n);
  for (int i = 0; i < n; ++i) red(i) = rng.next_bernoulli(prob) ? 1.0 : 0.0;
  return red;
}

Eigen::MatrixXd const_and_red_features(const Eigen::VectorXd& red) {
  Eigen::MatrixXd f(red.size(), 2);
  f.col(0).setOnes();
  f.col(1) = red;
  return f;
}

GraphDataset make_red_isolated(int count, std::uint64_t seed) {
  if (count < 2 || count % 2 != 0) {
    throw std::invalid_argument("red-isolated count must be a positive even number");
  }
  GraphDataset ds;
  ds.name = "red_isolated";
  ds.n_classes = 2;
  ds.label_values = {0, 1};
  ds.attribute_dims = 2;
  ds.has_constant = true;
  const int per_class = count / 2;
  int have_pos = 0, have_neg = 0;
  Rng rng(derive_seed(seed, 0, 0));
  const long max_attempts = 1000L * count;
  for (long attempt = 0; attempt < max_attempts && have_pos + have_neg < count; ++attempt) {
    Graph g;
    g.n = kRedIsolatedVertices;
    g.directed = false;
    g.adj = undirected_er(g.n, kEdgeProb, rng);
    const int forced = rng.next_int(0, 3);
    for (int t = 0; t < forced; ++t) {
      const int v = rng.next_int(0, g.n - 1);
      g.adj.row(v).setZero();
      g.adj.col(v).setZero();
    }
    const Eigen::VectorXd red = random_red(g.n, rng);
    g.features = const_and_red_features(red);
    int red_isolated = 0;
    for (int v = 0; v < g.n; ++v) {
      if (red(v) == 1.0 && g.adj.col(v).sum() == 0.0) ++red_isolated;
    }
    const int label = red_isolated == 1 ? 1 : 0;
    int& have = label == 1 ? have_pos : have_neg;
    if (have >= per_class) continue;
    ++have;
    g.validate();
    ds.graphs.push_back(std::move(g));
    ds.labels.push_back(label);
  }
  if (have_pos + have_neg < count) {
    throw std::logic_error("red-isolated sampler failed to balance classes");
  }
  return ds;
}

GraphDataset make_walk_task(SynthKind kind, int count, std::uint64_t seed, int walk_len) {
  if (count < 1) throw std::invalid_argument("count must be positive");
  if (walk_len < 1) throw std::invalid_argument("walk length must be positive");
  GraphDataset ds;
  ds.name = synth_kind_name(kind);
  ds.attribute_dims = 2;
  ds.has_constant = true;
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(kind), 0));
  for (int i = 0; i < count; ++i) {
    Graph g;
    g.n = kWalkTaskVertices;
    g.directed = true;
    g.adj = directed_er(g.n, kWalkEdgeProb, rng);
    const Eigen::VectorXd red = random_red(g.n, rng, kWalkRedProb);
    g.features = const_and_red_features(red);
    g.validate();
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(g.n, g.n);
    for (int t = 0; t < walk_len; ++t) power = g.adj * power;
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.n);
    double target = 0.0;
    switch (kind) {
      case SynthKind::WalkStart:
        target = ones.dot(power * red);
        break;
      case SynthKind::WalkEnd:
        target = red.dot(power * ones);
        break;
      case SynthKind::WalkClosed:
        target = power.diagonal().dot(red);
        break;
      case SynthKind::WalkBetween:
        target = red.dot(power * red);
        break;
      default:
        throw std::logic_error("not a walk task");
    }
    ds.graphs.push_back(std::move(g));
    ds.targets.push_back(target);
  }
  return ds;
}

GraphDataset make_red_count(int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("count must be positive");
  GraphDataset ds;
  ds.name = "red_count";
  ds.n_classes = 3;
  ds.label_values = {0, 1, 2};
  ds.attribute_dims = 2;
  ds.has_constant = true;
  Rng rng(derive_seed(seed, 5, 0));
  for (int i = 0; i < count; ++i) {
    Graph g;
    g.n = 12;
    g.directed = false;
    g.adj = undirected_er(g.n, kEdgeProb, rng);
    Eigen::VectorXd red(g.n);
    for (int v = 0; v < g.n; ++v) red(v) = rng.next_bernoulli(0.15) ? 1.0 : 0.0;
    g.features = const_and_red_features(red);
    g.validate();
    ds.graphs.push_back(std::move(g));
    ds.labels.push_back(std::min(static_cast<int>(red.sum()), 2));
  }
  return ds;
}

GraphDataset make_coordinate_pair() {
  GraphDataset ds;
  ds.name = "coordinate_pair";
  ds.n_classes = 2;
  ds.label_values = {0, 1};
  ds.attribute_dims = 2;
  Eigen::MatrixXd coords(4, 2);
  coords << 1, 1,   // vertex 0
      1, -1,        // vertex 1
      -1, 1,        // vertex 2
      -1, -1;       // vertex 3
  for (int which = 0; which < 2; ++which) {
    Graph g;
    g.n = 4;
    g.directed = false;
    g.features = coords;
    g.adj = Eigen::MatrixXd::Zero(4, 4);
    if (which == 0) {
      g.adj(0, 3) = g.adj(3, 0) = 1.0;  // (1,1) -- (-1,-1)
    } else {
      g.adj(1, 2) = g.adj(2, 1) = 1.0;  // (1,-1) -- (-1,1)
    }
    g.validate();
    ds.graphs.push_back(std::move(g));
    ds.labels.push_back(which == 0 ? 1 : 0);
  }
  return ds;
}

Graph circulant8(std::initializer_list<int> distances) {
  Graph g;
  g.n = 8;
  g.directed = false;
  g.adj = Eigen::MatrixXd::Zero(8, 8);
  g.features = Eigen::MatrixXd::Ones(8, 1);
  for (int i = 0; i < 8; ++i) {
    for (int d : distances) {
      const int j = (i + d) % 8;
      g.adj(i, j) = g.adj(j, i) = 1.0;
    }
  }
  g.validate();
  return g;
}

GraphDataset make_regular_pair() {
  GraphDataset ds;
  ds.name = "regular_pair";
  ds.n_classes = 2;
  ds.label_values = {0, 1};
  ds.attribute_dims = 1;
  ds.has_constant = true;
  ds.graphs.push_back(circulant8({1, 2}));  // many triangles
  ds.labels.push_back(1);
  ds.graphs.push_back(circulant8({1, 3}));  // triangle-free
  ds.labels.push_back(0);
  return ds;
}

}  // namespace

std::string synth_kind_name(SynthKind kind) {
  switch (kind) {
    case SynthKind::RedIsolated: return "red_isolated";
    case SynthKind::WalkStart: return "walk_start";
    case SynthKind::WalkEnd: return "walk_end";
    case SynthKind::WalkClosed: return "walk_closed";
    case SynthKind::WalkBetween: return "walk_between";
    case SynthKind::RedCount: return "red_count";
    case SynthKind::CoordinatePair: return "coordinate_pair";
    case SynthKind::RegularPair: return "regular_pair";
  }
  throw std::invalid_argument("unknown synthetic task");
}

SynthKind synth_kind_from_name(const std::string& name) {
  for (SynthKind kind :
       {SynthKind::RedIsolated, SynthKind::WalkStart, SynthKind::WalkEnd, SynthKind::WalkClosed,
        SynthKind::WalkBetween, SynthKind::RedCount, SynthKind::CoordinatePair,
        SynthKind::RegularPair}) {
    if (synth_kind_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown synthetic task: " + name);
}

bool synth_is_regression(SynthKind kind) {
  switch (kind) {
    case SynthKind::WalkStart:
    case SynthKind::WalkEnd:
    case SynthKind::WalkClosed:
    case SynthKind::WalkBetween:
      return true;
    default:
      return false;
  }
}

GraphDataset make_synth_dataset(SynthKind kind, int count, std::uint64_t seed, int walk_len) {
  switch (kind) {
    case SynthKind::RedIsolated: return make_red_isolated(count, seed);
    case SynthKind::WalkStart:
    case SynthKind::WalkEnd:
    case SynthKind::WalkClosed:
    case SynthKind::WalkBetween:
      return make_walk_task(kind, count, seed, walk_len);
    case SynthKind::RedCount: return make_red_count(count, seed);
    case SynthKind::CoordinatePair: return make_coordinate_pair();
    case SynthKind::RegularPair: return make_regular_pair();
  }
  throw std::invalid_argument("unknown synthetic task");
}

}  // namespace treeg
