#pragma once

#include <Eigen/SparseCore>
#include <cstdint>
#include <stdexcept>

#include "chaosbound/flattening.hpp"
#include "chaosbound/rational.hpp"
#include "chaosbound/schema.hpp"
#include "chaosbound/separator.hpp"
#include "chaosbound/shape.hpp"

namespace chaosbound {

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exponents of the norm bound for a shape: the matrix norm grows like
/// n^poly_exponent times log(n)^log_exponent.
struct GraphBoundReport {
  Rational poly_exponent;  // (|V| - |S_min| + |W_iso|) / 2
  Rational log_exponent;   // f / 2
  int f = 0;               // |S_min| - |U cap V| + |W| - |W_iso|
  int k1 = 0, k2 = 0;      // edge-ordering iteration counts, k1 + k2 <= f
  int left_power = 0;      // rows are n^left_power
  int right_power = 0;     // columns are n^right_power
  SeparatorResult separator;
  std::vector<int> isolated_middle;
};

GraphBoundReport norm_exponents(const Shape& shape);

/// The edge ordering that lets the iteration stop after k1 + k2 steps:
/// separator-path edges last, a minimum cover of the remaining non-isolated
/// middle vertices before them, everything else first.
struct EdgeOrdering {
  std::vector<std::pair<int, int>> ordered_edges;
  int k1 = 0;  // edges on the disjoint left-right paths
  int k2 = 0;  // additional covering edges
};

EdgeOrdering edge_ordering(const Shape& shape);

/// Orientation decomposition: one nearly-combinatorial schema per subset of
/// edges (the subset receives the descending orientation). Every schema has
/// one summation index per vertex (all of size n), one chaos coordinate per
/// edge, the left/right tuples as matrix coordinates, and an all-distinct
/// weight for injectivity. Rejects shapes with more than 16 edges.
std::vector<ChaosSchema> shape_to_schemas(const Shape& shape, long long n);

/// Cross-check of the flattening parameters against the separator bound.
struct SigmaBoundReport {
  Rational sigma_exponent;  // exponent of n in sigma, from the flattening table
  Rational poly_exponent;
  bool bound_holds = false;        // sigma_exponent <= poly_exponent
  bool exponents_match = false;    // equality
  FlatteningAssignment maximizer;
  std::vector<int> maximizer_diagonal;  // summation indices on both sides
  bool separator_realized = false;      // diagonal is a min separator
  int orientations_checked = 0;
};

SigmaBoundReport sigma_bound_check(const Shape& shape, long long n = 8);

/// Numerator (over 2) of the sigma exponent, by enumerating the sigma
/// flattenings of the orientation schemas with bitmask unions. Agrees with
/// sigma_bound_check and is cheap enough for exhaustive shape sweeps.
int sigma_exponent_numerator(const Shape& shape);

struct GraphMaterializeLimits {
  long long max_side = 1LL << 21;
  long long max_realizations = 1LL << 27;
};

/// The literal graph matrix at ground-set size n: for every injective map of
/// the shape vertices into [n], the product of edge signs lands at the entry
/// addressed by the images of the left and right tuples. Edge signs are one
/// Rademacher per unordered ground-set pair, derived from the seed.
Eigen::SparseMatrix<double> materialize_graph_matrix(const Shape& shape, long long n,
                                                     std::uint64_t seed,
                                                     const GraphMaterializeLimits& limits = {});

}  // namespace chaosbound
