#include <cmath>
#include <set>

#include "doctest.h"
#include "oracle.hpp"
#include "treeg/synth.hpp"

using namespace treeg;

namespace {

bool is_red(const Graph& g, int v) { return g.features(v, 1) == 1.0; }

int red_isolated_count(const Graph& g) {
  int count = 0;
  for (int v = 0; v < g.n; ++v) {
    if (is_red(g, v) && g.adj.row(v).sum() == 0.0) ++count;
  }
  return count;
}

// Counts length-L walks satisfying the color condition by brute enumeration.
double walk_target(const Graph& g, SynthKind kind, int len) {
  std::vector<int> red;
  for (int v = 0; v < g.n; ++v) {
    if (is_red(g, v)) red.push_back(v);
  }
  double total = 0.0;
  for (int from = 0; from < g.n; ++from) {
    for (int to = 0; to < g.n; ++to) {
      const bool from_red = is_red(g, from), to_red = is_red(g, to);
      bool keep = false;
      switch (kind) {
        case SynthKind::WalkStart: keep = from_red; break;
        case SynthKind::WalkEnd: keep = to_red; break;
        case SynthKind::WalkClosed: keep = from_red && from == to; break;
        case SynthKind::WalkBetween: keep = from_red && to_red; break;
        default: throw std::logic_error("not a walk task");
      }
      if (keep) total += oracle::walk_weight_between(g, from, to, len);
    }
  }
  return total;
}

}  // namespace

TEST_CASE("kind names round trip") {
  for (SynthKind kind :
       {SynthKind::RedIsolated, SynthKind::WalkStart, SynthKind::WalkEnd, SynthKind::WalkClosed,
        SynthKind::WalkBetween, SynthKind::RedCount, SynthKind::CoordinatePair,
        SynthKind::RegularPair}) {
    CHECK(synth_kind_from_name(synth_kind_name(kind)) == kind);
  }
  CHECK_THROWS_AS(synth_kind_from_name("unknown"), std::invalid_argument);
  CHECK(synth_is_regression(SynthKind::WalkStart));
  CHECK_FALSE(synth_is_regression(SynthKind::RedIsolated));
}

TEST_CASE("the isolated-red task is balanced and labeled by its predicate") {
  const GraphDataset ds = make_synth_dataset(SynthKind::RedIsolated, 60, 7);
  REQUIRE(ds.size() == 60);
  CHECK(ds.n_classes == 2);
  CHECK(ds.has_constant);
  int positives = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Graph& g = ds.graphs[i];
    CHECK(g.n == 50);
    CHECK(g.features.cols() == 2);
    for (int v = 0; v < g.n; ++v) CHECK(g.features(v, 0) == 1.0);
    const int expected = red_isolated_count(g) == 1 ? 1 : 0;
    CHECK(ds.labels[i] == expected);
    positives += ds.labels[i];
  }
  CHECK(positives == 30);

  // Adding an edge at the isolated red vertex flips the predicate.
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.labels[i] != 1) continue;
    Graph g = ds.graphs[i];
    int isolated = -1;
    for (int v = 0; v < g.n; ++v) {
      if (is_red(g, v) && g.adj.row(v).sum() == 0.0) isolated = v;
    }
    REQUIRE(isolated >= 0);
    const int other = isolated == 0 ? 1 : 0;
    g.adj(isolated, other) = g.adj(other, isolated) = 1.0;
    CHECK(red_isolated_count(g) == 0);
    break;
  }

  const GraphDataset again = make_synth_dataset(SynthKind::RedIsolated, 60, 7);
  CHECK(again.graphs[0].adj == ds.graphs[0].adj);
  CHECK(again.graphs[0].features == ds.graphs[0].features);
  CHECK_THROWS_AS(make_synth_dataset(SynthKind::RedIsolated, 61, 7), std::invalid_argument);
}

TEST_CASE("walk-count targets agree with brute-force enumeration") {
  for (SynthKind kind : {SynthKind::WalkStart, SynthKind::WalkEnd, SynthKind::WalkClosed,
                         SynthKind::WalkBetween}) {
    for (int len : {2, 3}) {
      const GraphDataset ds = make_synth_dataset(kind, 25, 11, len);
      REQUIRE(ds.size() == 25);
      REQUIRE(ds.targets.size() == 25);
      CHECK(ds.labels.empty());
      for (std::size_t i = 0; i < ds.size(); ++i) {
        const Graph& g = ds.graphs[i];
        CHECK(g.n == 10);
        CHECK(g.directed);
        CHECK(ds.targets[i] == doctest::Approx(walk_target(g, kind, len)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("a red-started directed path counts exactly one admissible walk") {
  // Directed path 0 -> 1 -> 2 with only vertex 0 red: length-2 walks starting
  // red reduce to the single walk 0 -> 1 -> 2.
  Graph g;
  g.n = 3;
  g.directed = true;
  g.adj = Eigen::MatrixXd::Zero(3, 3);
  g.adj(1, 0) = 1.0;
  g.adj(2, 1) = 1.0;
  g.features = Eigen::MatrixXd::Zero(3, 2);
  g.features.col(0).setOnes();
  g.features(0, 1) = 1.0;
  CHECK(walk_target(g, SynthKind::WalkStart, 2) == doctest::Approx(1.0));
  CHECK(walk_target(g, SynthKind::WalkEnd, 2) == doctest::Approx(0.0));
  CHECK(walk_target(g, SynthKind::WalkClosed, 2) == doctest::Approx(0.0));
  CHECK(walk_target(g, SynthKind::WalkBetween, 2) == doctest::Approx(0.0));
}

TEST_CASE("red counting labels cap at two") {
  const GraphDataset ds = make_synth_dataset(SynthKind::RedCount, 90, 3);
  REQUIRE(ds.size() == 90);
  CHECK(ds.n_classes == 3);
  std::set<int> seen;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const Graph& g = ds.graphs[i];
    int reds = 0;
    for (int v = 0; v < g.n; ++v) reds += is_red(g, v) ? 1 : 0;
    CHECK(ds.labels[i] == std::min(reds, 2));
    seen.insert(ds.labels[i]);
  }
  CHECK(seen.size() == 3);
}

TEST_CASE("the coordinate pair shares multisets of features but not labels") {
  const GraphDataset ds = make_synth_dataset(SynthKind::CoordinatePair, 2, 0);
  REQUIRE(ds.size() == 2);
  CHECK(ds.labels == std::vector<int>{1, 0});
  CHECK_FALSE(ds.has_constant);
  for (const Graph& g : ds.graphs) {
    REQUIRE(g.n == 4);
    CHECK(g.adj.sum() == doctest::Approx(2.0));  // one undirected edge
    std::multiset<std::pair<double, double>> points;
    for (int v = 0; v < 4; ++v) points.insert({g.features(v, 0), g.features(v, 1)});
    const std::multiset<std::pair<double, double>> expected{
        {1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}, {-1.0, -1.0}};
    CHECK(points == expected);
  }
  // The connected pair differs: diagonal (equal coordinates) vs anti-diagonal.
  const Graph& g1 = ds.graphs[0];
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (g1.adj(i, j) != 0.0) {
        CHECK(g1.features(i, 0) * g1.features(j, 0) < 0.0);
        CHECK(g1.features(i, 1) * g1.features(j, 1) < 0.0);
        CHECK(g1.features(i, 0) == g1.features(i, 1));
      }
    }
  }
}

TEST_CASE("the regular pair separates by closed triangle walks only") {
  const GraphDataset ds = make_synth_dataset(SynthKind::RegularPair, 2, 0);
  REQUIRE(ds.size() == 2);
  CHECK(ds.labels == std::vector<int>{1, 0});
  double traces[2];
  for (int gi = 0; gi < 2; ++gi) {
    const Graph& g = ds.graphs[static_cast<std::size_t>(gi)];
    REQUIRE(g.n == 8);
    for (int v = 0; v < 8; ++v) CHECK(g.adj.row(v).sum() == doctest::Approx(4.0));
    const Eigen::MatrixXd a3 = g.adj * g.adj * g.adj;
    traces[gi] = a3.trace();
    // Total walk counts of every length up to 3 coincide (both 4-regular).
    CHECK(g.adj.sum() == doctest::Approx(32.0));
    CHECK((g.adj * g.adj).sum() == doctest::Approx(128.0));
    CHECK(a3.sum() == doctest::Approx(512.0));
  }
  CHECK(traces[0] == doctest::Approx(48.0));
  CHECK(traces[1] == doctest::Approx(0.0));
}
