#include "chaosbound/graph_analysis.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "chaosbound/rng.hpp"

namespace chaosbound {

namespace {

// Maximum matching on <= 20 vertices by subset DP over the vertex mask.
// Returns the full memo table so a witness matching can be walked out.
std::vector<int> matching_table(int count, const std::vector<std::pair<int, int>>& edges) {
  std::vector<int> memo(1u << count, 0);
  std::vector<unsigned> adj(static_cast<size_t>(count), 0);
  for (const auto& e : edges) {
    adj[static_cast<size_t>(e.first)] |= 1u << e.second;
    adj[static_cast<size_t>(e.second)] |= 1u << e.first;
  }
  for (unsigned mask = 1; mask < (1u << count); ++mask) {
    const int v = std::countr_zero(mask);
    int best = memo[mask & (mask - 1)];  // leave v unmatched
    unsigned candidates = adj[static_cast<size_t>(v)] & mask & ~(1u << v);
    while (candidates) {
      const int w = std::countr_zero(candidates);
      candidates &= candidates - 1;
      best = std::max(best, 1 + memo[mask & ~(1u << v) & ~(1u << w)]);
    }
    memo[mask] = best;
  }
  return memo;
}

std::vector<std::pair<int, int>> maximum_matching(int count,
                                                  const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::pair<int, int>> matching;
  if (count == 0) return matching;
  const std::vector<int> memo = matching_table(count, edges);
  std::vector<unsigned> adj(static_cast<size_t>(count), 0);
  for (const auto& e : edges) {
    adj[static_cast<size_t>(e.first)] |= 1u << e.second;
    adj[static_cast<size_t>(e.second)] |= 1u << e.first;
  }
  unsigned mask = (1u << count) - 1;
  while (mask) {
    const int v = std::countr_zero(mask);
    if (memo[mask] == memo[mask & (mask - 1)]) {
      mask &= mask - 1;  // v stays unmatched
      continue;
    }
    unsigned candidates = adj[static_cast<size_t>(v)] & mask & ~(1u << v);
    while (candidates) {
      const int w = std::countr_zero(candidates);
      candidates &= candidates - 1;
      const unsigned rest = mask & ~(1u << v) & ~(1u << w);
      if (memo[mask] == 1 + memo[rest]) {
        matching.emplace_back(v, w);
        mask = rest;
        break;
      }
    }
  }
  return matching;
}

}  // namespace

EdgeOrdering edge_ordering(const Shape& shape) {
  EdgeOrdering out;
  const SeparatorResult sep = min_vertex_separator(shape);

  std::set<std::pair<int, int>> path_edges;
  std::set<int> path_vertices;
  for (const auto& path : sep.disjoint_paths) {
    for (size_t i = 0; i < path.size(); ++i) {
      path_vertices.insert(path[i]);
      if (i + 1 < path.size())
        path_edges.insert({std::min(path[i], path[i + 1]), std::max(path[i], path[i + 1])});
    }
  }
  out.k1 = static_cast<int>(path_edges.size());

  // middle vertices that still need an incident edge
  std::vector<int> uncovered;
  for (int v : shape.middle())
    if (shape.degree(v) > 0 && !path_vertices.count(v)) uncovered.push_back(v);

  // minimum cover of the uncovered middle vertices: a maximum matching among
  // them covers two per edge, every leftover vertex takes one incident edge
  std::set<std::pair<int, int>> cover_edges;
  if (!uncovered.empty()) {
    if (uncovered.size() > 20) throw CapExceeded("edge ordering on a shape with > 20 middle vertices");
    std::map<int, int> local;
    for (size_t i = 0; i < uncovered.size(); ++i) local[uncovered[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> inner;
    for (const auto& e : shape.edges)
      if (local.count(e.first) && local.count(e.second))
        inner.emplace_back(local[e.first], local[e.second]);

    std::vector<bool> covered(uncovered.size(), false);
    for (const auto& m : maximum_matching(static_cast<int>(uncovered.size()), inner)) {
      covered[static_cast<size_t>(m.first)] = covered[static_cast<size_t>(m.second)] = true;
      const int a = uncovered[static_cast<size_t>(m.first)];
      const int b = uncovered[static_cast<size_t>(m.second)];
      cover_edges.insert({std::min(a, b), std::max(a, b)});
    }
    for (size_t i = 0; i < uncovered.size(); ++i) {
      if (covered[i]) continue;
      for (const auto& e : shape.edges) {
        if ((e.first == uncovered[i] || e.second == uncovered[i]) && !path_edges.count(e)) {
          cover_edges.insert(e);
          break;
        }
      }
    }
  }
  out.k2 = static_cast<int>(cover_edges.size());

  for (const auto& e : shape.edges)
    if (!path_edges.count(e) && !cover_edges.count(e)) out.ordered_edges.push_back(e);
  for (const auto& e : shape.edges)
    if (cover_edges.count(e)) out.ordered_edges.push_back(e);
  for (const auto& e : shape.edges)
    if (path_edges.count(e)) out.ordered_edges.push_back(e);
  return out;
}

GraphBoundReport norm_exponents(const Shape& shape) {
  GraphBoundReport report;
  report.separator = min_vertex_separator(shape);
  report.isolated_middle = shape.isolated_middle();
  const int vertices = shape.vertex_count();
  const int s_min = report.separator.size();
  const int w_iso = static_cast<int>(report.isolated_middle.size());
  const int middle = static_cast<int>(shape.middle().size());
  std::set<int> left(shape.left.begin(), shape.left.end());
  int overlap = 0;
  for (int v : shape.right) overlap += left.count(v) ? 1 : 0;

  report.poly_exponent = Rational(vertices - s_min + w_iso, 2);
  report.f = s_min - overlap + middle - w_iso;
  report.log_exponent = Rational(report.f, 2);
  report.left_power = static_cast<int>(shape.left.size());
  report.right_power = static_cast<int>(shape.right.size());

  const EdgeOrdering ordering = edge_ordering(shape);
  report.k1 = ordering.k1;
  report.k2 = ordering.k2;
  if (report.k1 + report.k2 > report.f)
    throw std::logic_error("edge ordering exceeded the f(alpha) budget");
  return report;
}

std::vector<ChaosSchema> shape_to_schemas(const Shape& shape, long long n) {
  if (shape.edges.size() > 16)
    throw CapExceeded("orientation decomposition of a shape with more than 16 edges");
  const int p = shape.vertex_count();
  ChaosSchema base;
  base.p = p;
  base.dims.assign(static_cast<size_t>(p), n);
  base.dim_symbols.assign(static_cast<size_t>(p), "n");
  base.q = static_cast<int>(shape.edges.size());
  for (const auto& e : shape.edges) base.chaos_coords.push_back({e.first, e.second});
  base.row_coord = IndexSet(shape.left.begin(), shape.left.end());
  base.col_coord = IndexSet(shape.right.begin(), shape.right.end());
  base.distribution = DistributionSpec::edge_rademacher();
  for (int v = 0; v < p; ++v) base.labels.push_back(shape.name_of(v));
  AllDistinct injective;
  for (int v = 0; v < p; ++v) injective.indices.push_back(v);
  if (p > 1) base.weight.constraints.push_back(injective);

  std::vector<ChaosSchema> out;
  const size_t orientations = 1u << shape.edges.size();
  out.reserve(orientations);
  for (size_t subset = 0; subset < orientations; ++subset) {
    ChaosSchema schema = base;
    for (size_t e = 0; e < shape.edges.size(); ++e) {
      const auto& edge = shape.edges[e];
      if (subset & (1u << e)) schema.weight.constraints.push_back(Greater{edge.first, edge.second});
      else schema.weight.constraints.push_back(Less{edge.first, edge.second});
    }
    out.push_back(std::move(schema));
  }
  return out;
}

int sigma_exponent_numerator(const Shape& shape) {
  const int p = shape.vertex_count();
  unsigned left_mask = 0, right_mask = 0;
  for (int v : shape.left) left_mask |= 1u << v;
  for (int v : shape.right) right_mask |= 1u << v;
  std::vector<unsigned> edge_mask;
  for (const auto& e : shape.edges) edge_mask.push_back((1u << e.first) | (1u << e.second));

  int best = -1;
  const unsigned subsets = 1u << edge_mask.size();
  for (unsigned subset = 0; subset < subsets; ++subset) {
    unsigned rows = left_mask, cols = right_mask;
    for (size_t e = 0; e < edge_mask.size(); ++e) {
      if (subset & (1u << e)) rows |= edge_mask[e];
      else cols |= edge_mask[e];
    }
    const int exponent = 2 * p - std::popcount(rows) - std::popcount(cols);
    best = std::max(best, exponent);
  }
  return best;
}

SigmaBoundReport sigma_bound_check(const Shape& shape, long long n) {
  SigmaBoundReport report;
  const GraphBoundReport bound = norm_exponents(shape);
  report.poly_exponent = bound.poly_exponent;

  const std::vector<ChaosSchema> schemas = shape_to_schemas(shape, n);
  report.orientations_checked = static_cast<int>(schemas.size());
  bool first = true;
  for (const auto& schema : schemas) {
    if (schema.q == 0) continue;  // deterministic matrix, no chaos parameters
    int best_num = -1;
    FlatteningAssignment best_assignment;
    for (const auto& a : enumerate_assignments(schema, FlatteningClass::Sigma)) {
      const FlatteningRow row = flattening_norm_sq(schema, a);
      const int num = row.norm_sq.exponent("n");
      if (num > best_num) {
        best_num = num;
        best_assignment = a;
      }
    }
    const Rational sigma_exp(best_num, 2);
    if (first) {
      report.sigma_exponent = sigma_exp;
      report.maximizer = best_assignment;
      first = false;
    } else if (report.sigma_exponent != sigma_exp) {
      // orientations share one coordinate structure; diverging exponents
      // would indicate a broken table
      throw std::logic_error("orientation schemas disagree on the sigma exponent");
    }
  }
  if (first) {  // edgeless shape
    report.sigma_exponent = Rational(0);
    report.bound_holds = true;
    report.exponents_match = report.poly_exponent == Rational(0);
    return report;
  }

  report.bound_holds = report.sigma_exponent <= report.poly_exponent;
  report.exponents_match = report.sigma_exponent == report.poly_exponent;
  for (size_t u = 0; u < report.maximizer.index_split.size(); ++u)
    if (report.maximizer.index_split[u] == IndexSide::Both)
      report.maximizer_diagonal.push_back(static_cast<int>(u));
  report.separator_realized =
      static_cast<int>(report.maximizer_diagonal.size()) == bound.separator.size() &&
      is_vertex_separator(shape, report.maximizer_diagonal);
  return report;
}

namespace {

void enumerate_injections(const Shape& shape, long long n, std::vector<long long>& image,
                          std::vector<bool>& used, size_t next,
                          const std::function<void(const std::vector<long long>&)>& emit) {
  if (next == image.size()) {
    emit(image);
    return;
  }
  for (long long value = 0; value < n; ++value) {
    if (used[static_cast<size_t>(value)]) continue;
    used[static_cast<size_t>(value)] = true;
    image[next] = value;
    enumerate_injections(shape, n, image, used, next + 1, emit);
    used[static_cast<size_t>(value)] = false;
  }
}

}  // namespace

Eigen::SparseMatrix<double> materialize_graph_matrix(const Shape& shape, long long n,
                                                     std::uint64_t seed,
                                                     const GraphMaterializeLimits& limits) {
  const int p = shape.vertex_count();
  if (n < p) throw CapExceeded("ground set smaller than the shape");
  long long rows = 1, cols = 1, realizations = 1;
  for (size_t i = 0; i < shape.left.size(); ++i) {
    rows *= n;
    if (rows > limits.max_side) throw CapExceeded("row dimension exceeds cap");
  }
  for (size_t i = 0; i < shape.right.size(); ++i) {
    cols *= n;
    if (cols > limits.max_side) throw CapExceeded("column dimension exceeds cap");
  }
  for (int i = 0; i < p; ++i) {
    realizations *= n;
    if (realizations > limits.max_realizations) throw CapExceeded("too many realizations");
  }

  std::vector<Eigen::Triplet<double>> triplets;
  std::vector<long long> image(static_cast<size_t>(p), 0);
  std::vector<bool> used(static_cast<size_t>(n), false);
  enumerate_injections(shape, n, image, used, 0, [&](const std::vector<long long>& phi) {
    double value = 1.0;
    for (const auto& e : shape.edges)
      value *= rng::edge_rademacher(seed, phi[static_cast<size_t>(e.first)],
                                    phi[static_cast<size_t>(e.second)]);
    long long row = 0, col = 0;
    for (int v : shape.left) row = row * n + phi[static_cast<size_t>(v)];
    for (int v : shape.right) col = col * n + phi[static_cast<size_t>(v)];
    triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
  });

  Eigen::SparseMatrix<double> m(static_cast<int>(rows), static_cast<int>(cols));
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

}  // namespace chaosbound
