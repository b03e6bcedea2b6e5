#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "chaosbound/graph_analysis.hpp"
#include "chaosbound/oracle.hpp"
#include "chaosbound/rng.hpp"
#include "chaosbound/sampler.hpp"
#include "chaosbound/schema.hpp"
#include "test_support.hpp"

using namespace chaosbound;

namespace {

Eigen::MatrixXd random_gaussian(int rows, int cols, std::uint64_t seed) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = rng::gaussian(rng::mix(seed, static_cast<std::uint64_t>(i * 1024 + j)));
  return m;
}

}  // namespace

TEST_CASE("decoupled khatri-rao realization unrolls to layer products") {
  const ChaosSchema s = khatri_rao_schema(2, 2, 2);
  const std::uint64_t seed = 17;
  const MaterializedMatrix m = materialize(s, SampleMode::Decoupled, seed);
  const Eigen::MatrixXd y = m.to_dense();
  REQUIRE(y.rows() == 4);
  REQUIRE(y.cols() == 2);

  const std::vector<double> t1 = chaos_layer_table(s, 0, seed);
  const std::vector<double> t2 = chaos_layer_table(s, 1, seed);
  for (long long j1 = 0; j1 < 2; ++j1)
    for (long long j2 = 0; j2 < 2; ++j2)
      for (long long k = 0; k < 2; ++k) {
        const double expected = t1[static_cast<size_t>(j1 * 2 + k)] * t2[static_cast<size_t>(j2 * 2 + k)];
        CHECK(y(j1 * 2 + j2, k) == expected);
      }
}

TEST_CASE("single-coefficient rademacher chaos has norm one") {
  ChaosSchema s;
  s.p = 0;
  s.q = 1;
  s.chaos_coords = {{}};
  s.distribution = DistributionSpec::rademacher();
  const MaterializedMatrix m = materialize(s, SampleMode::Decoupled, 5);
  REQUIRE(m.rows() == 1);
  REQUIRE(m.cols() == 1);
  CHECK(std::abs(m.to_dense()(0, 0)) == 1.0);
  CHECK(spectral_norm(m).value == doctest::Approx(1.0));
}

TEST_CASE("coupled graph schemas reproduce the graph matrix exactly") {
  const std::uint64_t seed = 4242;
  const Shape beta = wigner_shape();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(4, 4);
  for (const auto& schema : shape_to_schemas(beta, 4))
    sum += materialize(schema, SampleMode::Coupled, seed).to_dense();
  const Eigen::MatrixXd direct = Eigen::MatrixXd(materialize_graph_matrix(beta, 4, seed));
  CHECK((sum - direct).norm() == 0.0);
}

TEST_CASE("coupled mode needs one shared coordinate template") {
  ChaosSchema s;
  s.p = 2;
  s.dims = {2, 3};
  s.q = 2;
  s.chaos_coords = {{0}, {1}};  // template sizes differ: (2) vs (3)
  s.row_coord = {0};
  s.col_coord = {1};
  CHECK_THROWS_AS(materialize(s, SampleMode::Coupled, 1), CoupledUnsupported);
  CHECK_THROWS_AS(decoupling_ratio(s, 2, 1), NotSymmetrizable);
}

TEST_CASE("materialization caps are enforced") {
  MaterializeLimits limits;
  limits.max_entries = 4;
  CHECK_THROWS_AS(materialize(khatri_rao_schema(2, 3, 4), SampleMode::Decoupled, 1, limits),
                  CapExceeded);
}

TEST_CASE("spectral norm matches the dense SVD on small matrices") {
  MaterializedMatrix identity;
  identity.is_dense = true;
  identity.dense = Eigen::MatrixXd::Identity(5, 5);
  CHECK(spectral_norm(identity).value == doctest::Approx(1.0));

  MaterializedMatrix diag;
  diag.is_dense = true;
  diag.dense = Eigen::Vector4d(1, 2, 3, 4).asDiagonal();
  CHECK(spectral_norm(diag).value == doctest::Approx(4.0));

  const Eigen::MatrixXd g = random_gaussian(40, 60, 7);
  CHECK(spectral_norm(g).value == doctest::Approx(dense_spectral_norm(g)).epsilon(1e-6));

  for (std::uint64_t i = 0; i < 200; ++i) {
    const int rows = 1 + static_cast<int>(rng::splitmix64(rng::mix(i, 1)) % 64);
    const int cols = 1 + static_cast<int>(rng::splitmix64(rng::mix(i, 2)) % 64);
    const Eigen::MatrixXd m = random_gaussian(rows, cols, 1000 + i);
    CHECK(spectral_norm(m).value == doctest::Approx(dense_spectral_norm(m)).epsilon(1e-6));
  }
}

TEST_CASE("power iteration path agrees with the SVD oracle") {
  // min_svd_dim = 0 forces the iterative path even on small matrices
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Eigen::MatrixXd m = random_gaussian(30, 45, 50 + i);
    const SpectralNormResult result = spectral_norm(m, 1e-9, 5000, 0);
    CHECK(result.converged);
    CHECK(result.value == doctest::Approx(dense_spectral_norm(m)).epsilon(1e-6));
  }
  // sparse storage goes through the same estimator
  const Shape beta = wigner_shape();
  MaterializedMatrix sparse;
  sparse.is_dense = false;
  sparse.sparse = materialize_graph_matrix(beta, 96, 3);
  const double direct = dense_spectral_norm(Eigen::MatrixXd(sparse.sparse));
  CHECK(spectral_norm(sparse, 1e-9, 5000, 0).value == doctest::Approx(direct).epsilon(1e-6));
}

TEST_CASE("zero matrices report zero norm") {
  MaterializedMatrix zero;
  zero.is_dense = true;
  zero.dense = Eigen::MatrixXd::Zero(100, 80);
  const SpectralNormResult result = spectral_norm(zero, 1e-6, 0, 16);
  CHECK(result.value == 0.0);
  CHECK(result.converged);
}

TEST_CASE("monte carlo is deterministic and trial-stable") {
  SampleConfig config;
  config.schema = khatri_rao_schema(2, 3, 5);
  config.trials = 6;
  config.seed = 77;
  const SampleReport a = monte_carlo(config);
  const SampleReport b = monte_carlo(config);
  CHECK(a.to_csv() == b.to_csv());
  CHECK(a.to_json() == b.to_json());

  // trials are independent streams: a shorter run is a prefix of a longer one
  config.trials = 3;
  const SampleReport prefix = monte_carlo(config);
  for (int t = 0; t < 3; ++t) CHECK(prefix.norms[static_cast<size_t>(t)] == a.norms[static_cast<size_t>(t)]);

  CHECK(a.stderr_ > 0.0);
  CHECK(a.trials == 6);
}

TEST_CASE("zero-weight schema samples to zero") {
  ChaosSchema s = khatri_rao_schema(2, 2, 2);
  s.weight.constraints.push_back(Less{0, 0});
  SampleConfig config;
  config.schema = s;
  config.trials = 3;
  config.seed = 5;
  const SampleReport report = monte_carlo(config);
  CHECK(report.mean_norm == 0.0);
  CHECK(report.stderr_ == 0.0);
}

TEST_CASE("decoupled entry second moments count the contributing tuples") {
  // diagonal schema: entry (i,i) sums S_1 = 3 orthogonal layer products
  ChaosSchema s;
  s.p = 2;
  s.dims = {2, 3};
  s.q = 2;
  s.chaos_coords = {{0}, {1}};
  s.row_coord = {0};
  s.col_coord = {0};
  s.distribution = DistributionSpec::gaussian();

  const int trials = 4000;
  Eigen::MatrixXd second_moment = Eigen::MatrixXd::Zero(2, 2);
  Eigen::MatrixXd fourth = Eigen::MatrixXd::Zero(2, 2);
  for (int t = 0; t < trials; ++t) {
    const Eigen::MatrixXd y =
        materialize(s, SampleMode::Decoupled, rng::mix(321, static_cast<std::uint64_t>(t))).to_dense();
    second_moment += y.cwiseProduct(y);
    fourth += y.cwiseProduct(y).cwiseProduct(y.cwiseProduct(y));
  }
  second_moment /= trials;
  fourth /= trials;
  for (int i = 0; i < 2; ++i) {
    const double expected = 3.0;  // count of contributing lattice points
    const double variance = fourth(i, i) - second_moment(i, i) * second_moment(i, i);
    const double se = std::sqrt(std::max(variance, 0.0) / trials);
    CHECK(std::abs(second_moment(i, i) - expected) <= 3.0 * se);
  }
}

TEST_CASE("scaling fit recovers exact power laws and validates input") {
  std::vector<std::pair<double, SampleReport>> series;
  for (double n : {16.0, 32.0, 64.0, 128.0}) {
    SampleReport r;
    r.mean_norm = std::sqrt(n);
    series.emplace_back(n, r);
  }
  const ScalingReport fit = scaling_fit(series);
  CHECK(fit.slope == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(fit.slope_ci == doctest::Approx(0.0));

  series.resize(2);
  CHECK_THROWS_AS(scaling_fit(series), std::invalid_argument);

  std::vector<std::pair<double, SampleReport>> bad;
  SampleReport r;
  r.mean_norm = 1.0;
  bad.emplace_back(4.0, r);
  bad.emplace_back(2.0, r);
  bad.emplace_back(8.0, r);
  CHECK_THROWS_AS(scaling_fit(bad), std::invalid_argument);

  std::vector<std::pair<double, SampleReport>> zero;
  r.mean_norm = 0.0;
  zero.emplace_back(2.0, r);
  zero.emplace_back(4.0, r);
  zero.emplace_back(8.0, r);
  CHECK_THROWS_AS(scaling_fit(zero), std::invalid_argument);
}

TEST_CASE("order-1 decoupling ratio is exactly one") {
  ChaosSchema s;
  s.p = 2;
  s.dims = {4, 5};
  s.q = 1;
  s.chaos_coords = {{0, 1}};
  s.row_coord = {0};
  s.col_coord = {1};
  s.distribution = DistributionSpec::gaussian();
  CHECK(decoupling_ratio(s, 4, 99) == 1.0);
}

TEST_CASE("order-2 decoupling ratio sits inside the two-sided band") {
  // full-index chaos: coupled version is h h^T without its diagonal
  ChaosSchema s;
  s.p = 2;
  s.dims = {64, 64};
  s.q = 2;
  s.chaos_coords = {{0}, {1}};
  s.row_coord = {0};
  s.col_coord = {1};
  s.distribution = DistributionSpec::gaussian();
  const double ratio = decoupling_ratio(s, 8, 11);
  CHECK(ratio > 1.0 / 16.0);
  CHECK(ratio < 16.0);
}

TEST_CASE("sampled nck envelope brackets the monte carlo mean") {
  // sanity band: lower/32 <= mean <= 32*upper on small calibration models
  auto check_envelope = [](const ChaosSchema& schema, const SampleReport& report) {
    const ChaosParameters cp = chaos_parameters(schema);
    const DistributionParams dist = distribution_params(
        schema.distribution, std::max<long long>(schema.max_matrix_dim(), 2),
        std::max<long long>(schema.max_alphabet(), 2));
    const double upper = bound_profile(BoundTheorem::NckUpper, dist, cp, schema.q,
                                       schema.max_matrix_dim(), schema.max_alphabet())
                             .numeric_value;
    const double lower = bound_profile(BoundTheorem::NckLower, dist, cp, schema.q,
                                       schema.max_matrix_dim(), schema.max_alphabet())
                             .numeric_value;
    CHECK(report.mean_norm <= 32.0 * upper);
    CHECK(report.mean_norm >= lower / 32.0);
  };

  SampleConfig wigner;
  wigner.schema = shape_to_schemas(wigner_shape(), 64)[0];
  wigner.trials = 5;
  wigner.seed = 31;
  check_envelope(*wigner.schema, monte_carlo(wigner));

  SampleConfig kr;
  kr.schema = khatri_rao_schema(2, 8, 16);
  kr.trials = 5;
  kr.seed = 32;
  check_envelope(*kr.schema, monte_carlo(kr));
}

TEST_CASE("khatri-rao mean norm lands within a factor 8 of sigma") {
  SampleConfig config;
  config.schema = khatri_rao_schema(2, 64, 4096);
  config.trials = 3;
  config.seed = 101;
  const SampleReport report = monte_carlo(config);
  const double sigma = chaos_parameters(*config.schema).sigma.numeric;
  CHECK(sigma == doctest::Approx(64.0));
  CHECK(report.mean_norm >= sigma / 8.0);
  CHECK(report.mean_norm <= sigma * 8.0);
}
