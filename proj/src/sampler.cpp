#include "chaosbound/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chaosbound/oracle.hpp"
#include "chaosbound/rng.hpp"

namespace chaosbound {

namespace {

constexpr std::uint64_t kLayerTag = 0x6c617972ULL;

struct LatticeWalker {
  const ChaosSchema& schema;
  std::vector<long long> point;

  explicit LatticeWalker(const ChaosSchema& s) : schema(s), point(static_cast<size_t>(s.p), 0) {}

  long long lattice_size() const {
    long long total = 1;
    for (long long s : schema.dims) total *= s;
    return total;
  }

  bool advance() {
    for (int u = schema.p - 1; u >= 0; --u) {
      if (++point[static_cast<size_t>(u)] < schema.dims[static_cast<size_t>(u)]) return true;
      point[static_cast<size_t>(u)] = 0;
    }
    return false;
  }

  long long linearize(const IndexSet& set) const {
    long long idx = 0;
    for (int u : set) idx = idx * schema.dims[static_cast<size_t>(u)] + point[static_cast<size_t>(u)];
    return idx;
  }
};

struct Accumulator {
  bool dense;
  Eigen::MatrixXd mat;
  std::vector<Eigen::Triplet<double>> triplets;
  long long rows, cols;

  Accumulator(long long r, long long c, bool use_dense) : dense(use_dense), rows(r), cols(c) {
    if (dense) mat = Eigen::MatrixXd::Zero(r, c);
  }

  void add(long long r, long long c, double v) {
    if (dense) mat(r, c) += v;
    else triplets.emplace_back(static_cast<int>(r), static_cast<int>(c), v);
  }

  MaterializedMatrix finish() {
    MaterializedMatrix out;
    out.is_dense = dense;
    if (dense) {
      out.dense = std::move(mat);
    } else {
      out.sparse.resize(static_cast<int>(rows), static_cast<int>(cols));
      out.sparse.setFromTriplets(triplets.begin(), triplets.end());
    }
    return out;
  }
};

void check_limits(const ChaosSchema& schema, const MaterializeLimits& limits) {
  if (!schema.numeric_dims()) throw CapExceeded("materialization requires numeric dimension sizes");
  long long entries = schema.row_dim();
  if (schema.col_dim() > 0 && entries > limits.max_entries / schema.col_dim())
    throw CapExceeded("matrix entry count exceeds cap");
  long long lattice = 1;
  for (long long s : schema.dims) {
    lattice *= std::max<long long>(s, 1);
    if (lattice > limits.max_lattice) throw CapExceeded("summation lattice exceeds cap");
  }
}

bool prefer_dense(const ChaosSchema& schema) {
  const double entries =
      static_cast<double>(schema.row_dim()) * static_cast<double>(schema.col_dim());
  double lattice = 1;
  for (long long s : schema.dims) lattice *= static_cast<double>(s);
  return entries <= 0.0 || lattice / entries >= 0.05;
}

bool same_template(const ChaosSchema& schema) {
  for (int t = 1; t < schema.q; ++t) {
    const IndexSet& a = schema.chaos_coords[0];
    const IndexSet& b = schema.chaos_coords[static_cast<size_t>(t)];
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (schema.dims[static_cast<size_t>(a[i])] != schema.dims[static_cast<size_t>(b[i])])
        return false;
  }
  return true;
}

}  // namespace

// entries are pure functions of (seed, layer, value)
std::vector<double> chaos_layer_table(const ChaosSchema& schema, int layer, std::uint64_t seed) {
  const long long size = schema.alphabet_size(layer);
  std::vector<double> table(static_cast<size_t>(size));
  const std::uint64_t layer_key =
      rng::mix(seed, rng::mix(kLayerTag, static_cast<std::uint64_t>(layer + 1)));
  for (long long value = 0; value < size; ++value)
    table[static_cast<size_t>(value)] =
        rng::draw(schema.distribution, rng::mix(layer_key, static_cast<std::uint64_t>(value)));
  return table;
}

MaterializedMatrix materialize(const ChaosSchema& schema, SampleMode mode, std::uint64_t seed,
                               const MaterializeLimits& limits) {
  check_limits(schema, limits);
  const bool edge_dist = schema.distribution.kind == DistributionKind::EdgeRademacher;
  if (mode == SampleMode::Coupled) {
    if (!same_template(schema))
      throw CoupledUnsupported("chaos coordinates do not share one index-set template");
    if (edge_dist)
      for (const auto& coord : schema.chaos_coords)
        if (coord.size() != 2)
          throw CoupledUnsupported("edge variables need coordinate pairs");
  }

  // decoupled layers; the coupled family reuses the first layer's stream so
  // that order-1 coupled and decoupled realizations coincide exactly
  std::vector<std::vector<double>> tables;
  if (!edge_dist || mode == SampleMode::Decoupled) {
    const int layer_count = mode == SampleMode::Coupled ? 1 : schema.q;
    for (int t = 0; t < layer_count; ++t) tables.push_back(chaos_layer_table(schema, t, seed));
  }

  Accumulator acc(schema.row_dim(), schema.col_dim(), prefer_dense(schema));
  LatticeWalker walk(schema);
  const long long total = walk.lattice_size();
  std::vector<long long> values(static_cast<size_t>(schema.q), 0);
  for (long long step = 0; step < total; ++step, walk.advance()) {
    if (!schema.weight.evaluate(walk.point)) continue;

    double product = 1.0;
    if (mode == SampleMode::Decoupled) {
      for (int t = 0; t < schema.q; ++t)
        product *= tables[static_cast<size_t>(t)][static_cast<size_t>(
            walk.linearize(schema.chaos_coords[static_cast<size_t>(t)]))];
    } else {
      // all-distinct indicator over the chaos coordinate values
      bool distinct = true;
      if (edge_dist) {
        for (int t = 0; t < schema.q && distinct; ++t) {
          const IndexSet& coord = schema.chaos_coords[static_cast<size_t>(t)];
          long long a = walk.point[static_cast<size_t>(coord[0])];
          long long b = walk.point[static_cast<size_t>(coord[1])];
          if (a > b) std::swap(a, b);
          values[static_cast<size_t>(t)] = a * schema.dims[static_cast<size_t>(coord[1])] + b;
        }
      } else {
        for (int t = 0; t < schema.q; ++t)
          values[static_cast<size_t>(t)] = walk.linearize(schema.chaos_coords[static_cast<size_t>(t)]);
      }
      for (int s = 0; s < schema.q && distinct; ++s)
        for (int t = s + 1; t < schema.q && distinct; ++t)
          distinct = values[static_cast<size_t>(s)] != values[static_cast<size_t>(t)];
      if (!distinct) continue;

      for (int t = 0; t < schema.q; ++t) {
        if (edge_dist) {
          const IndexSet& coord = schema.chaos_coords[static_cast<size_t>(t)];
          product *= rng::edge_rademacher(seed, walk.point[static_cast<size_t>(coord[0])],
                                          walk.point[static_cast<size_t>(coord[1])]);
        } else {
          product *= tables[0][static_cast<size_t>(
              walk.linearize(schema.chaos_coords[static_cast<size_t>(t)]))];
        }
      }
    }
    acc.add(walk.linearize(schema.row_coord), walk.linearize(schema.col_coord), product);
  }
  return acc.finish();
}

MaterializedMatrix materialize_symmetrized(const ChaosSchema& schema, std::uint64_t seed,
                                           const MaterializeLimits& limits) {
  check_limits(schema, limits);
  if (!same_template(schema))
    throw NotSymmetrizable("chaos coordinates do not share one index-set template");
  if (schema.distribution.kind == DistributionKind::EdgeRademacher)
    throw NotSymmetrizable("edge variables are coupled by construction");

  std::vector<std::vector<double>> tables;
  for (int t = 0; t < schema.q; ++t) tables.push_back(chaos_layer_table(schema, t, seed));
  double factorial = 1.0;
  for (int t = 2; t <= schema.q; ++t) factorial *= t;

  Accumulator acc(schema.row_dim(), schema.col_dim(), prefer_dense(schema));
  LatticeWalker walk(schema);
  const long long total = walk.lattice_size();
  std::vector<int> perm(static_cast<size_t>(schema.q));
  std::vector<long long> values(static_cast<size_t>(schema.q));
  for (long long step = 0; step < total; ++step, walk.advance()) {
    if (!schema.weight.evaluate(walk.point)) continue;
    for (int t = 0; t < schema.q; ++t)
      values[static_cast<size_t>(t)] = walk.linearize(schema.chaos_coords[static_cast<size_t>(t)]);
    std::iota(perm.begin(), perm.end(), 0);
    double sum = 0.0;
    do {
      double product = 1.0;
      for (int t = 0; t < schema.q; ++t)
        product *= tables[static_cast<size_t>(t)][static_cast<size_t>(values[static_cast<size_t>(perm[static_cast<size_t>(t)])])];
      sum += product;
    } while (std::next_permutation(perm.begin(), perm.end()));
    acc.add(walk.linearize(schema.row_coord), walk.linearize(schema.col_coord), sum / factorial);
  }
  return acc.finish();
}

SpectralNormResult spectral_norm(const MaterializedMatrix& m, double tol, int max_iters,
                                 int min_svd_dim) {
  SpectralNormResult result;
  const Eigen::Index rows = m.rows(), cols = m.cols();
  if (rows == 0 || cols == 0) return result;
  if (std::min(rows, cols) <= min_svd_dim) {
    result.value = dense_spectral_norm(m.to_dense());
    return result;
  }
  if (max_iters <= 0)
    max_iters = static_cast<int>(10.0 * std::log(static_cast<double>(std::max(rows, cols)))) + 200;

  // fixed seeded start vector, uniform direction on the sphere
  Eigen::VectorXd v(cols);
  const std::uint64_t key = rng::mix(0x73706563ULL, static_cast<std::uint64_t>(rows * 1315423911ULL + cols));
  for (Eigen::Index i = 0; i < cols; ++i)
    v(i) = rng::gaussian(rng::mix(key, static_cast<std::uint64_t>(i)));
  const double start_norm = v.norm();
  if (start_norm == 0.0) v.setOnes();
  v /= v.norm();

  double lambda = 0.0;
  int confirmations = 0;
  result.converged = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::VectorXd w = m.apply_transpose(m.apply(v));
    const double norm = w.norm();
    result.iterations = iter + 1;
    if (norm == 0.0) {
      result.value = 0.0;
      result.converged = true;
      return result;
    }
    const double change = std::abs(norm - lambda);
    lambda = norm;
    v = w / norm;
    if (change <= tol * std::max(lambda, 1e-300)) {
      if (++confirmations >= 2) {
        result.converged = true;
        break;
      }
    } else {
      confirmations = 0;
    }
  }
  result.value = std::sqrt(lambda);
  return result;
}

SpectralNormResult spectral_norm(const Eigen::MatrixXd& m, double tol, int max_iters,
                                 int min_svd_dim) {
  MaterializedMatrix wrapped;
  wrapped.is_dense = true;
  wrapped.dense = m;
  return spectral_norm(wrapped, tol, max_iters, min_svd_dim);
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string SampleReport::to_csv() const {
  std::ostringstream out;
  out << "trial,norm\n";
  for (size_t t = 0; t < norms.size(); ++t) out << t << "," << format_double(norms[t]) << "\n";
  return out.str();
}

std::string SampleReport::to_json() const {
  std::ostringstream out;
  out << "{\n  \"mean_norm\": " << format_double(mean_norm) << ",\n  \"stderr\": "
      << format_double(stderr_) << ",\n  \"trials\": " << trials << ",\n  \"seed\": " << seed
      << "\n}\n";
  return out.str();
}

SampleReport monte_carlo(const SampleConfig& config) {
  if (config.trials < 1) throw std::invalid_argument("monte_carlo: trials must be >= 1");
  if (!config.schema && !config.shape)
    throw std::invalid_argument("monte_carlo: need a schema or a shape");

  SampleReport report;
  report.trials = config.trials;
  report.seed = config.seed;
  for (int trial = 0; trial < config.trials; ++trial) {
    const std::uint64_t trial_seed = rng::mix(config.seed, static_cast<std::uint64_t>(trial));
    SpectralNormResult norm;
    if (config.shape) {
      if (config.mode == SampleMode::Coupled) {
        MaterializedMatrix m;
        m.is_dense = false;
        m.sparse = materialize_graph_matrix(*config.shape, config.shape_n, trial_seed);
        const double density = static_cast<double>(m.sparse.nonZeros()) /
                               (static_cast<double>(m.rows()) * static_cast<double>(m.cols()));
        if (density >= 0.05) {
          m.dense = Eigen::MatrixXd(m.sparse);
          m.is_dense = true;
          m.sparse.resize(0, 0);
        }
        norm = spectral_norm(m, config.norm_tol, config.max_iters);
      } else {
        // decoupled graph sampling goes through the orientation schemas
        MaterializedMatrix sum;
        bool first = true;
        for (const auto& schema : shape_to_schemas(*config.shape, config.shape_n)) {
          MaterializedMatrix part = materialize(schema, SampleMode::Decoupled, trial_seed, config.limits);
          if (first) {
            sum.is_dense = true;
            sum.dense = part.to_dense();
            first = false;
          } else {
            sum.dense += part.to_dense();
          }
        }
        norm = spectral_norm(sum, config.norm_tol, config.max_iters);
      }
    } else {
      const MaterializedMatrix m = materialize(*config.schema, config.mode, trial_seed, config.limits);
      norm = spectral_norm(m, config.norm_tol, config.max_iters);
    }
    report.norms.push_back(norm.value);
    report.converged.push_back(norm.converged);
  }

  const double mean = std::accumulate(report.norms.begin(), report.norms.end(), 0.0) /
                      static_cast<double>(report.trials);
  report.mean_norm = mean;
  if (report.trials >= 2) {
    double ss = 0.0;
    for (double x : report.norms) ss += (x - mean) * (x - mean);
    report.stderr_ = std::sqrt(ss / (report.trials - 1)) / std::sqrt(static_cast<double>(report.trials));
  }
  return report;
}

std::string ScalingReport::to_csv() const {
  std::ostringstream out;
  out << "dim,mean_norm,stderr\n";
  for (size_t i = 0; i < dims.size(); ++i)
    out << format_double(dims[i]) << "," << format_double(means[i]) << ","
        << format_double(stderrs[i]) << "\n";
  return out.str();
}

ScalingReport scaling_fit(const std::vector<std::pair<double, SampleReport>>& series) {
  if (series.size() < 3) throw std::invalid_argument("scaling_fit: need at least 3 sizes");
  ScalingReport report;
  for (size_t i = 0; i < series.size(); ++i) {
    if (i > 0 && series[i].first <= series[i - 1].first)
      throw std::invalid_argument("scaling_fit: dimensions must increase");
    if (series[i].second.mean_norm <= 0.0)
      throw std::invalid_argument("scaling_fit: mean norms must be positive");
    report.dims.push_back(series[i].first);
    report.means.push_back(series[i].second.mean_norm);
    report.stderrs.push_back(series[i].second.stderr_);
  }

  const size_t n = series.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += std::log(report.dims[i]);
    sy += std::log(report.means[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(report.dims[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(report.means[i]) - my);
  }
  report.slope = sxy / sxx;
  report.intercept = my - report.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = std::log(report.means[i]) - (report.intercept + report.slope * std::log(report.dims[i]));
    ss_res += r * r;
  }
  if (n > 2) report.slope_ci = 2.0 * std::sqrt(ss_res / static_cast<double>(n - 2) / sxx);
  return report;
}

double decoupling_ratio(const ChaosSchema& schema, int trials, std::uint64_t seed,
                        const MaterializeLimits& limits) {
  if (!same_template(schema))
    throw NotSymmetrizable("chaos coordinates do not share one index-set template");
  double coupled_sum = 0.0, decoupled_sum = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    const std::uint64_t trial_seed = rng::mix(seed, static_cast<std::uint64_t>(trial));
    coupled_sum += spectral_norm(materialize(schema, SampleMode::Coupled, trial_seed, limits)).value;
    decoupled_sum += spectral_norm(materialize_symmetrized(schema, trial_seed, limits)).value;
  }
  if (decoupled_sum == 0.0)
    throw std::runtime_error("decoupling_ratio: decoupled norms vanish");
  return coupled_sum / decoupled_sum;
}

}  // namespace chaosbound
