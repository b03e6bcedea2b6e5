#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace chaosbound {

/// Ordered list of summation-index identifiers (0-based, no duplicates).
/// An empty set denotes a coordinate axis of dimension 1.
using IndexSet = std::vector<int>;

/// Atomic 0/1 weight constraints. The weight is the product of indicators.
struct AllDistinct {
  std::vector<int> indices;
};
struct Less {
  int a = 0, b = 0;  // s_a < s_b
};
struct Greater {
  int a = 0, b = 0;  // s_a > s_b
};
struct NotEqualTuple {
  std::vector<int> left, right;  // (s_left...) != (s_right...)
};
using Constraint = std::variant<AllDistinct, Less, Greater, NotEqualTuple>;

struct WeightSpec {
  std::vector<Constraint> constraints;

  bool trivial() const { return constraints.empty(); }

  /// Evaluates the indicator product at one point of the summation lattice.
  bool evaluate(std::span<const long long> point) const;

  /// Summation indices mentioned by any constraint, sorted and deduplicated.
  std::vector<int> constrained_indices() const;
};

enum class DistributionKind {
  Gaussian,
  Rademacher,
  StandardizedBernoulli,  // standardized Bern(p), zero mean, unit variance
  EdgeRademacher,         // Rademacher indexed by unordered pairs (graph input)
  CenteredChiSq1,         // g^2 - 1 for standard gaussian g; mean 0, variance 2
};

struct DistributionSpec {
  DistributionKind kind = DistributionKind::Gaussian;
  double param = 0.0;  // Bernoulli probability, unused otherwise

  static DistributionSpec gaussian() { return {DistributionKind::Gaussian, 0.0}; }
  static DistributionSpec rademacher() { return {DistributionKind::Rademacher, 0.0}; }
  static DistributionSpec standardized_bernoulli(double p) {
    return {DistributionKind::StandardizedBernoulli, p};
  }
  static DistributionSpec edge_rademacher() { return {DistributionKind::EdgeRademacher, 0.0}; }
  static DistributionSpec centered_chisq1() { return {DistributionKind::CenteredChiSq1, 0.0}; }

  double variance() const { return kind == DistributionKind::CenteredChiSq1 ? 2.0 : 1.0; }
};

std::string to_string(DistributionKind kind);

/// Declarative model of a matrix chaos of (nearly) combinatorial type.
///
/// p summation indices with sizes dims[0..p), q chaos coordinates, one row and
/// one column coordinate, a 0/1 weight and an entry distribution. Coordinate
/// t for t in [0, q) is a chaos coordinate; q and q+1 address the row and
/// column coordinates.
struct ChaosSchema {
  int p = 0;
  std::vector<long long> dims;          // size 0 marks a symbolic-only dimension
  std::vector<std::string> dim_symbols; // same symbol implies same size
  int q = 0;
  std::vector<IndexSet> chaos_coords;
  IndexSet row_coord;
  IndexSet col_coord;
  WeightSpec weight;
  DistributionSpec distribution;
  std::vector<std::string> labels;  // optional summation-index names

  int coordinate_count() const { return q + 2; }

  const IndexSet& coordinate(int t) const {
    if (t < q) return chaos_coords[static_cast<size_t>(t)];
    return t == q ? row_coord : col_coord;
  }

  bool numeric_dims() const;

  long long index_product(const IndexSet& set) const;
  long long row_dim() const { return index_product(row_coord); }   // d_1
  long long col_dim() const { return index_product(col_coord); }   // d_2
  long long max_matrix_dim() const;                                // d
  long long alphabet_size(int t) const;                            // m_t
  long long max_alphabet() const;                                  // m

  std::string label(int u) const;
  std::string dim_symbol(int u) const;
  double size_of_symbol(const std::string& symbol) const;
};

struct ValidationIssue {
  std::string code;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string summary() const;
};

/// Report-style validation: index ranges, duplicates, q >= 1, positive dims,
/// distribution parameters, weight satisfiability at the declared dims.
ValidationReport validate(const ChaosSchema& schema);

/// Decides whether any point of the summation lattice satisfies the weight.
/// Exact for the supported constraint forms (order/equality constraints only
/// depend on the relative order of values, so domains are compressed).
bool weight_satisfiable(const ChaosSchema& schema);

/// Khatri-Rao chaos of order q: p = q+1 indices (j_1..j_q of size d, k of
/// size n), chaos coordinates (j_t, k), matrix coordinates (j_1..j_q) and (k).
ChaosSchema khatri_rao_schema(int q, long long d, long long n);

/// The two chaoses of the tensor-PCA decomposition: the order-1 diagonal part
/// with centered chi-square entries and the order-2 off-diagonal part.
std::pair<ChaosSchema, ChaosSchema> tensor_pca_schemas(long long n, long long d);

/// The two ellipsoid-fitting chaoses: the order-4 gaussian chaos and the
/// order-2 chaos with centered chi-square entries.
std::pair<ChaosSchema, ChaosSchema> ellipsoid_schemas(long long m, long long d);

struct SchemaParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// JSON schema file format. Field names are normative; unknown fields are
/// rejected. dims entries may be positive integers or symbol strings.
ChaosSchema schema_from_json_text(const std::string& text);
std::string schema_to_json_text(const ChaosSchema& schema);

}  // namespace chaosbound
