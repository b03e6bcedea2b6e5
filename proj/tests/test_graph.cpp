#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <set>

#include "chaosbound/graph_analysis.hpp"
#include "chaosbound/rng.hpp"
#include "chaosbound/sampler.hpp"
#include "chaosbound/separator.hpp"
#include "chaosbound/shape.hpp"
#include "test_support.hpp"

using namespace chaosbound;

TEST_CASE("reference shapes have the expected separators") {
  CHECK(min_vertex_separator(wigner_shape()).size() == 1);
  CHECK(min_vertex_separator(z_shape()).size() == 2);
  const SeparatorResult star = min_vertex_separator(star_shape());
  CHECK(star.size() == 1);
  CHECK(star.separator == std::vector<int>{4});  // the hub
}

TEST_CASE("empty tuples yield an empty separator") {
  Shape s = wigner_shape();
  s.left.clear();
  const SeparatorResult result = min_vertex_separator(s);
  CHECK(result.size() == 0);
  CHECK(result.disjoint_paths.empty());
}

TEST_CASE("overlapping tuples force their vertices into the separator") {
  Shape s;
  s.vertex_names = {"u", "v", "w"};
  s.left = {0, 1};
  s.right = {1, 2};
  s.edges = {{0, 2}};
  const SeparatorResult result = min_vertex_separator(s);
  // v is in both tuples; u-w is a second disjoint path
  CHECK(result.size() == 2);
  std::set<int> sep(result.separator.begin(), result.separator.end());
  CHECK(sep.count(1) == 1);
}

TEST_CASE("menger certificate on random shapes") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const Shape shape = testsupport::random_shape(i);
    const SeparatorResult result = min_vertex_separator(shape);

    // matches the exhaustive minimum and the path count
    CHECK(result.size() == testsupport::exhaustive_min_separator(shape));
    CHECK(result.disjoint_paths.size() == result.separator.size());
    CHECK(testsupport::separates(shape, result.separator));

    // paths are vertex-disjoint with exactly one endpoint in each tuple
    const std::set<int> left(shape.left.begin(), shape.left.end());
    const std::set<int> right(shape.right.begin(), shape.right.end());
    const std::set<int> sep(result.separator.begin(), result.separator.end());
    std::set<int> used;
    for (const auto& path : result.disjoint_paths) {
      REQUIRE(!path.empty());
      int lefts = 0, rights = 0, cuts = 0;
      for (size_t k = 0; k < path.size(); ++k) {
        CHECK(used.insert(path[k]).second);
        lefts += left.count(path[k]);
        rights += right.count(path[k]);
        cuts += sep.count(path[k]);
        if (k + 1 < path.size()) CHECK(shape.has_edge(path[k], path[k + 1]));
      }
      if (path.size() == 1 && left.count(path[0]) && right.count(path[0])) {
        CHECK(lefts == 1);
        CHECK(rights == 1);
      } else {
        CHECK(lefts == 1);
        CHECK(rights == 1);
      }
      CHECK(cuts == 1);  // the separator meets every path exactly once
    }
  }
}

TEST_CASE("norm exponents of the reference shapes") {
  const GraphBoundReport beta = norm_exponents(wigner_shape());
  CHECK(beta.poly_exponent == Rational(1, 2));
  CHECK(beta.f == 1);
  CHECK(beta.log_exponent == Rational(1, 2));

  const GraphBoundReport gamma = norm_exponents(z_shape());
  CHECK(gamma.poly_exponent == Rational(1));
  CHECK(gamma.f == 2);

  const GraphBoundReport delta = norm_exponents(star_shape());
  CHECK(delta.poly_exponent == Rational(3));
  CHECK(delta.f == 2);
  CHECK(delta.isolated_middle == std::vector<int>{5});
  CHECK(delta.left_power == 2);
  CHECK(delta.right_power == 2);
}

TEST_CASE("edgeless shape with equal tuples behaves like the identity") {
  Shape s;
  s.vertex_names = {"u"};
  s.left = {0};
  s.right = {0};
  const GraphBoundReport report = norm_exponents(s);
  CHECK(report.poly_exponent == Rational(0));
  CHECK(report.f == 0);
  CHECK(report.k1 + report.k2 == 0);

  const Eigen::MatrixXd m = Eigen::MatrixXd(materialize_graph_matrix(s, 5, 123));
  CHECK((m - Eigen::MatrixXd::Identity(5, 5)).norm() == 0.0);
}

TEST_CASE("edge ordering on the reference shapes") {
  const EdgeOrdering beta = edge_ordering(wigner_shape());
  CHECK(beta.k1 == 1);
  CHECK(beta.k2 == 0);

  const EdgeOrdering delta = edge_ordering(star_shape());
  CHECK(delta.k1 == 2);
  CHECK(delta.k2 == 0);
  CHECK(delta.ordered_edges.size() == 4);

  // the two path edges sit at the end of the ordering
  const GraphBoundReport report = norm_exponents(star_shape());
  std::set<std::pair<int, int>> path_edges;
  for (const auto& path : report.separator.disjoint_paths)
    for (size_t i = 0; i + 1 < path.size(); ++i)
      path_edges.insert({std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1])});
  for (size_t i = delta.ordered_edges.size() - static_cast<size_t>(delta.k1);
       i < delta.ordered_edges.size(); ++i)
    CHECK(path_edges.count(delta.ordered_edges[i]) == 1);
}

TEST_CASE("edge ordering stays within the f budget on random shapes") {
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Shape shape = testsupport::random_shape(i);
    const GraphBoundReport report = norm_exponents(shape);  // throws if k1 + k2 > f
    CHECK(report.k1 + report.k2 <= report.f);
    // ordering is a permutation of the edge set
    const EdgeOrdering ordering = edge_ordering(shape);
    CHECK(ordering.ordered_edges.size() == shape.edges.size());
    std::set<std::pair<int, int>> seen(ordering.ordered_edges.begin(), ordering.ordered_edges.end());
    CHECK(seen.size() == shape.edges.size());
  }
}

TEST_CASE("orientation decomposition of the reference shapes") {
  const auto beta = shape_to_schemas(wigner_shape(), 6);
  REQUIRE(beta.size() == 2);
  for (const auto& schema : beta) {
    CHECK(schema.q == 1);
    CHECK(schema.p == 2);
    CHECK(validate(schema).ok());
    CHECK(schema.distribution.kind == DistributionKind::EdgeRademacher);
  }

  const auto gamma = shape_to_schemas(z_shape(), 6);
  CHECK(gamma.size() == 8);
  for (const auto& schema : gamma) CHECK(schema.q == 3);

  Shape edgeless;
  edgeless.vertex_names = {"u"};
  edgeless.left = {0};
  edgeless.right = {0};
  const auto schemas = shape_to_schemas(edgeless, 6);
  REQUIRE(schemas.size() == 1);
  CHECK(schemas[0].q == 0);
  CHECK(!validate(schemas[0]).ok());  // deterministic matrix, flagged
}

TEST_CASE("orientation weights partition the injective realizations") {
  // over all orientations, each injective tuple satisfies exactly one weight
  const auto schemas = shape_to_schemas(z_shape(), 4);
  std::vector<long long> point(4);
  int covered = 0, total = 0;
  for (point[0] = 0; point[0] < 4; ++point[0])
    for (point[1] = 0; point[1] < 4; ++point[1])
      for (point[2] = 0; point[2] < 4; ++point[2])
        for (point[3] = 0; point[3] < 4; ++point[3]) {
          const std::set<long long> distinct(point.begin(), point.end());
          if (distinct.size() != 4) continue;
          ++total;
          int hits = 0;
          for (const auto& schema : schemas)
            if (schema.weight.evaluate(point)) ++hits;
          CHECK(hits == 1);
          ++covered;
        }
  CHECK(covered == total);
  CHECK(total == 4 * 3 * 2 * 1);
}

TEST_CASE("sigma bound check on the reference shapes") {
  const SigmaBoundReport beta = sigma_bound_check(wigner_shape());
  CHECK(beta.sigma_exponent == Rational(1, 2));
  CHECK(beta.exponents_match);
  CHECK(beta.separator_realized);

  const SigmaBoundReport gamma = sigma_bound_check(z_shape());
  CHECK(gamma.sigma_exponent == Rational(1));
  CHECK(gamma.exponents_match);

  const SigmaBoundReport delta = sigma_bound_check(star_shape());
  CHECK(delta.sigma_exponent == Rational(3));
  CHECK(delta.exponents_match);
  CHECK(delta.maximizer_diagonal == std::vector<int>{4});
  CHECK(delta.separator_realized);
}

TEST_CASE("bitmask sigma exponent agrees with the flattening-engine path") {
  for (std::uint64_t i = 0; i < 60; ++i) {
    const Shape shape = testsupport::random_shape(i, 6);
    if (shape.edges.size() > 5 || shape.edges.empty()) continue;
    const SigmaBoundReport slow = sigma_bound_check(shape);
    CHECK(Rational(sigma_exponent_numerator(shape), 2) == slow.sigma_exponent);
    CHECK(slow.exponents_match);
  }
}

TEST_CASE("wigner materialization is a sign matrix with zero diagonal") {
  const Eigen::MatrixXd m = Eigen::MatrixXd(materialize_graph_matrix(wigner_shape(), 4, 7));
  REQUIRE(m.rows() == 4);
  REQUIRE(m.cols() == 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) CHECK(m(i, j) == 0.0);
      else {
        CHECK(std::abs(m(i, j)) == 1.0);
        CHECK(m(i, j) == m(j, i));  // edge variables are unordered
      }
    }
}

TEST_CASE("star materialization entry equals the direct two-loop sum") {
  const long long n = 7;
  const std::uint64_t seed = 99;
  const Eigen::SparseMatrix<double> m = materialize_graph_matrix(star_shape(), n, seed);
  REQUIRE(m.rows() == 49);
  REQUIRE(m.cols() == 49);

  // entry ((0,1),(2,3)): images of (i,j,k,l); sum over hub x and bystander y
  double expected = 0.0;
  for (long long x = 4; x < n; ++x)
    for (long long y = 4; y < n; ++y) {
      if (x == y) continue;
      expected += rng::edge_rademacher(seed, 0, x) * rng::edge_rademacher(seed, 1, x) *
                  rng::edge_rademacher(seed, 2, x) * rng::edge_rademacher(seed, 3, x);
    }
  CHECK(Eigen::MatrixXd(m)(0 * 7 + 1, 2 * 7 + 3) == doctest::Approx(expected));
}

TEST_CASE("materialization caps are enforced") {
  GraphMaterializeLimits limits;
  limits.max_realizations = 100;
  CHECK_THROWS_AS(materialize_graph_matrix(star_shape(), 10, 0, limits), CapExceeded);
  CHECK_THROWS_AS(materialize_graph_matrix(wigner_shape(), 1, 0), CapExceeded);
}

TEST_CASE("wigner empirical norm sits in the semicircle band") {
  SampleConfig config;
  config.shape = wigner_shape();
  config.shape_n = 512;
  config.mode = SampleMode::Coupled;
  config.trials = 10;
  config.seed = 2024;
  const SampleReport report = monte_carlo(config);
  const double scaled = report.mean_norm / std::sqrt(512.0);
  CHECK(scaled > 1.5);
  CHECK(scaled < 2.5);
}
