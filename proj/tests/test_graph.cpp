#include <stdexcept>

#include "doctest.h"
#include "oracle.hpp"
#include "treeg/graph.hpp"
#include "treeg/rng.hpp"

using namespace treeg;

namespace {

Graph path3() {
  Graph g;
  g.n = 3;
  g.adj = Eigen::MatrixXd::Zero(3, 3);
  g.adj(0, 1) = g.adj(1, 0) = 1.0;
  g.adj(1, 2) = g.adj(2, 1) = 1.0;
  g.features = Eigen::MatrixXd::Ones(3, 1);
  return g;
}

Graph triangle() {
  Graph g;
  g.n = 3;
  g.adj = Eigen::MatrixXd::Ones(3, 3) - Eigen::MatrixXd::Identity(3, 3);
  g.features = Eigen::MatrixXd::Ones(3, 1);
  return g;
}

}  // namespace

TEST_CASE("graph validation rejects malformed inputs") {
  Graph g = path3();
  CHECK_NOTHROW(g.validate());

  Graph bad_shape = g;
  bad_shape.adj = Eigen::MatrixXd::Zero(3, 2);
  CHECK_THROWS_AS(bad_shape.validate(), std::invalid_argument);

  Graph bad_rows = g;
  bad_rows.features = Eigen::MatrixXd::Zero(2, 1);
  CHECK_THROWS_AS(bad_rows.validate(), std::invalid_argument);

  Graph asym = g;
  asym.adj(0, 2) = 5.0;  // adj(2, 0) stays 0
  CHECK_THROWS_AS(asym.validate(), std::invalid_argument);
  asym.directed = true;
  CHECK_NOTHROW(asym.validate());

  Graph nan_graph = g;
  nan_graph.adj(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(nan_graph.validate(), std::invalid_argument);
}

TEST_CASE("walk powers of the empty graph are zero past the identity") {
  Graph g;
  g.n = 3;
  g.adj = Eigen::MatrixXd::Zero(3, 3);
  g.features = Eigen::MatrixXd::Zero(3, 1);
  const WalkMatrixCache cache = walk_powers(g, 2);
  REQUIRE(cache.max_depth() == 2);
  CHECK(cache.powers[0].isApprox(Eigen::MatrixXd::Identity(3, 3)));
  CHECK(cache.powers[1].isZero(0.0));
  CHECK(cache.powers[2].isZero(0.0));
}

TEST_CASE("depth zero is always the identity") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = oracle::random_graph(rng, 5, 1, trial % 2 == 0, true);
    const WalkMatrixCache cache = walk_powers(g, 0);
    CHECK(cache.powers[0].isApprox(Eigen::MatrixXd::Identity(5, 5)));
  }
}

TEST_CASE("length-2 closed walks on the 3-path are (1, 2, 1)") {
  const WalkMatrixCache cache = walk_powers(path3(), 2);
  const Eigen::VectorXd diag = cache.powers[2].diagonal();
  CHECK(diag(0) == doctest::Approx(1.0));
  CHECK(diag(1) == doctest::Approx(2.0));
  CHECK(diag(2) == doctest::Approx(1.0));
}

TEST_CASE("source mask over the full vertex set is the identity operation") {
  const Graph g = triangle();
  const WalkMatrixCache cache = walk_powers(g, 2);
  const VertexSubset all = VertexSubset::all(3);
  CHECK(masked_walks(cache.powers[2], all, WalkType::Source).isApprox(cache.powers[2]));
}

TEST_CASE("cycle mask keeps only the chosen diagonal entries") {
  const Graph g = triangle();
  const WalkMatrixCache cache = walk_powers(g, 2);
  VertexSubset s;
  s.members = {0};
  s.origin_node = 3;
  const Eigen::MatrixXd masked = masked_walks(cache.powers[2], s, WalkType::Cycle);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(0, 0) = 2.0;  // two length-2 closed walks at vertex 0
  CHECK(masked.isApprox(expected));
}

TEST_CASE("masked walk matrices match step-by-step walk enumeration") {
  Rng rng(101);
  for (int trial = 0; trial < 12; ++trial) {
    const bool directed = trial % 2 == 1;
    const bool weighted = trial % 3 == 0;
    const Graph g = oracle::random_graph(rng, 3 + trial % 4, 2, directed, weighted);
    const WalkMatrixCache cache = walk_powers(g, 3);
    VertexSubset s;
    s.members = oracle::random_subset(rng, g.n);
    s.origin_node = 1;
    for (int d = 0; d <= 3; ++d) {
      for (WalkType r :
           {WalkType::Source, WalkType::Cycle, WalkType::Target, WalkType::TargetSource}) {
        const Eigen::MatrixXd fast = masked_walks(cache.powers[d], s, r);
        const Eigen::MatrixXd slow = oracle::masked_walks(g, s.members, r, d);
        CHECK_MESSAGE(
            (fast - slow).cwiseAbs().maxCoeff() < 1e-9,
            "trial ", trial, " d=", d, " type=", walk_type_name(r));
      }
    }
  }
}

TEST_CASE("mask rejects out-of-range subset members") {
  const Graph g = triangle();
  const WalkMatrixCache cache = walk_powers(g, 1);
  VertexSubset s;
  s.members = {0, 7};
  s.origin_node = 0;
  CHECK_THROWS_AS(masked_walks(cache.powers[1], s, WalkType::Source), std::invalid_argument);
}

TEST_CASE("propagation cache stores powers applied to features and diagonals") {
  Rng rng(55);
  const Graph g = oracle::random_graph(rng, 6, 3, false, true);
  const PropagationCache cache = build_propagation_cache(g, 3);
  REQUIRE(cache.max_depth() == 3);
  for (int d = 0; d <= 3; ++d) {
    CHECK(cache.propagated[d].isApprox(cache.walks.powers[d] * g.features, 1e-12));
    CHECK(cache.diagonals[d].isApprox(cache.walks.powers[d].diagonal(), 1e-12));
  }
}

TEST_CASE("vertex permutation relabels adjacency and features consistently") {
  Rng rng(9);
  const Graph g = oracle::random_graph(rng, 5, 2, true, true);
  const std::vector<int> perm = {2, 0, 4, 1, 3};
  const Graph pg = permute_graph(g, perm);
  for (int i = 0; i < g.n; ++i) {
    for (int j = 0; j < g.n; ++j) {
      CHECK(pg.adj(perm[i], perm[j]) == doctest::Approx(g.adj(i, j)));
    }
    for (int k = 0; k < g.num_features(); ++k) {
      CHECK(pg.features(perm[i], k) == doctest::Approx(g.features(i, k)));
    }
  }
}

TEST_CASE("subset helpers") {
  const VertexSubset all = VertexSubset::all(4);
  CHECK(all.is_all());
  CHECK(all.size() == 4);
  CHECK(all.indicator(4).sum() == doctest::Approx(4.0));

  VertexSubset s;
  s.members = {1, 3};
  s.origin_node = 2;
  s.sign = -1;
  CHECK_FALSE(s.is_all());
  const Eigen::VectorXd ind = s.indicator(4);
  CHECK(ind(0) == 0.0);
  CHECK(ind(1) == 1.0);
  CHECK(ind(2) == 0.0);
  CHECK(ind(3) == 1.0);
}
