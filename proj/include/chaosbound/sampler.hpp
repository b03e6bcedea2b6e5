#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaosbound/graph_analysis.hpp"
#include "chaosbound/schema.hpp"
#include "chaosbound/shape.hpp"

namespace chaosbound {

struct CoupledUnsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotSymmetrizable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SampleMode { Coupled, Decoupled };

struct MaterializeLimits {
  long long max_entries = 1LL << 26;  // d1 * d2
  long long max_lattice = 1LL << 27;  // summation lattice points
};

/// Dense or sparse realization, chosen by the expected fill. Either way the
/// norm estimator only needs matrix-vector products.
struct MaterializedMatrix {
  Eigen::MatrixXd dense;
  Eigen::SparseMatrix<double> sparse;
  bool is_dense = true;

  Eigen::Index rows() const { return is_dense ? dense.rows() : sparse.rows(); }
  Eigen::Index cols() const { return is_dense ? dense.cols() : sparse.cols(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const {
    return is_dense ? Eigen::VectorXd(dense * v) : Eigen::VectorXd(sparse * v);
  }
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& v) const {
    return is_dense ? Eigen::VectorXd(dense.transpose() * v)
                    : Eigen::VectorXd(sparse.transpose() * v);
  }
  Eigen::MatrixXd to_dense() const { return is_dense ? dense : Eigen::MatrixXd(sparse); }
};

/// Materializes one realization of the chaos. Decoupled mode draws one
/// variable per (layer, coordinate value); coupled mode shares one family
/// across layers keyed by the coordinate value and multiplies the weight by
/// the all-distinct indicator over the chaos coordinate values. Entries are
/// pure functions of (seed, layer, value), so identical seeds reproduce the
/// matrix bit for bit.
MaterializedMatrix materialize(const ChaosSchema& schema, SampleMode mode, std::uint64_t seed,
                               const MaterializeLimits& limits = {});

struct SpectralNormResult {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
};

/// Power iteration on the Gram operator with a fixed seeded start vector and
/// two confirmation iterations; falls back to dense SVD when the smaller
/// dimension is at most min_svd_dim. max_iters <= 0 selects the default
/// 10*log(dim) + 200.
SpectralNormResult spectral_norm(const MaterializedMatrix& m, double tol = 1e-6,
                                 int max_iters = 0, int min_svd_dim = 64);
SpectralNormResult spectral_norm(const Eigen::MatrixXd& m, double tol = 1e-6, int max_iters = 0,
                                 int min_svd_dim = 64);

struct SampleConfig {
  std::optional<ChaosSchema> schema;
  std::optional<Shape> shape;   // graph-matrix sampling (coupled edge signs)
  long long shape_n = 0;        // ground-set size when sampling a shape
  SampleMode mode = SampleMode::Decoupled;
  int trials = 1;
  std::uint64_t seed = 1;
  double norm_tol = 1e-6;
  int max_iters = 0;
  MaterializeLimits limits;
};

struct SampleReport {
  double mean_norm = 0.0;
  double stderr_ = 0.0;  // sample standard deviation / sqrt(trials)
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> norms;
  std::vector<bool> converged;

  std::string to_csv() const;   // trial,norm
  std::string to_json() const;  // summary
};

/// Estimates E||Y|| by independent trials; trial t is derived from
/// mix(seed, t), so reports are reproducible byte for byte.
SampleReport monte_carlo(const SampleConfig& config);

struct ScalingReport {
  std::vector<double> dims;
  std::vector<double> means;
  std::vector<double> stderrs;
  double slope = 0.0;
  double slope_ci = 0.0;  // +- 2 standard errors of the fitted slope
  double intercept = 0.0;

  std::string to_csv() const;  // dim,mean_norm,stderr
};

/// Least-squares slope of log mean norm against log dimension.
ScalingReport scaling_fit(const std::vector<std::pair<double, SampleReport>>& series);

/// mean||X|| / mean||Y_sym|| for the coupled chaos against the symmetrized
/// decoupled chaos. Requires all chaos coordinates to share one index-set
/// template (sizes per position), otherwise NotSymmetrizable.
double decoupling_ratio(const ChaosSchema& schema, int trials, std::uint64_t seed,
                        const MaterializeLimits& limits = {});

/// Symmetrized decoupled realization: the layer products are averaged over
/// all permutations of the layers. Exposed for tests.
MaterializedMatrix materialize_symmetrized(const ChaosSchema& schema, std::uint64_t seed,
                                           const MaterializeLimits& limits = {});

/// The variables of one decoupled layer, indexed by the linearized coordinate
/// value. materialize() reads exactly these tables.
std::vector<double> chaos_layer_table(const ChaosSchema& schema, int layer, std::uint64_t seed);

}  // namespace chaosbound
