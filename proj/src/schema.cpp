#include "chaosbound/schema.hpp"

#include <algorithm>
#include <set>

namespace chaosbound {

bool WeightSpec::evaluate(std::span<const long long> point) const {
  for (const auto& c : constraints) {
    const bool ok = std::visit(
        [&](const auto& constraint) -> bool {
          using T = std::decay_t<decltype(constraint)>;
          if constexpr (std::is_same_v<T, AllDistinct>) {
            for (size_t i = 0; i < constraint.indices.size(); ++i)
              for (size_t j = i + 1; j < constraint.indices.size(); ++j)
                if (point[static_cast<size_t>(constraint.indices[i])] ==
                    point[static_cast<size_t>(constraint.indices[j])])
                  return false;
            return true;
          } else if constexpr (std::is_same_v<T, Less>) {
            return point[static_cast<size_t>(constraint.a)] <
                   point[static_cast<size_t>(constraint.b)];
          } else if constexpr (std::is_same_v<T, Greater>) {
            return point[static_cast<size_t>(constraint.a)] >
                   point[static_cast<size_t>(constraint.b)];
          } else {
            for (size_t i = 0; i < constraint.left.size(); ++i)
              if (point[static_cast<size_t>(constraint.left[i])] !=
                  point[static_cast<size_t>(constraint.right[i])])
                return true;
            return false;
          }
        },
        c);
    if (!ok) return false;
  }
  return true;
}

std::vector<int> WeightSpec::constrained_indices() const {
  std::set<int> out;
  for (const auto& c : constraints) {
    std::visit(
        [&](const auto& constraint) {
          using T = std::decay_t<decltype(constraint)>;
          if constexpr (std::is_same_v<T, AllDistinct>) {
            out.insert(constraint.indices.begin(), constraint.indices.end());
          } else if constexpr (std::is_same_v<T, Less> || std::is_same_v<T, Greater>) {
            out.insert(constraint.a);
            out.insert(constraint.b);
          } else {
            out.insert(constraint.left.begin(), constraint.left.end());
            out.insert(constraint.right.begin(), constraint.right.end());
          }
        },
        c);
  }
  return {out.begin(), out.end()};
}

std::string to_string(DistributionKind kind) {
  switch (kind) {
    case DistributionKind::Gaussian: return "gaussian";
    case DistributionKind::Rademacher: return "rademacher";
    case DistributionKind::StandardizedBernoulli: return "standardized_bernoulli";
    case DistributionKind::EdgeRademacher: return "edge_rademacher";
    case DistributionKind::CenteredChiSq1: return "centered_chisq1";
  }
  return "?";
}

bool ChaosSchema::numeric_dims() const {
  return std::all_of(dims.begin(), dims.end(), [](long long s) { return s >= 1; });
}

long long ChaosSchema::index_product(const IndexSet& set) const {
  long long prod = 1;
  for (int u : set) prod *= dims[static_cast<size_t>(u)];
  return prod;
}

long long ChaosSchema::max_matrix_dim() const { return std::max(row_dim(), col_dim()); }

long long ChaosSchema::alphabet_size(int t) const { return index_product(chaos_coords[static_cast<size_t>(t)]); }

long long ChaosSchema::max_alphabet() const {
  long long m = 1;
  for (int t = 0; t < q; ++t) m = std::max(m, alphabet_size(t));
  return m;
}

std::string ChaosSchema::label(int u) const {
  if (u < static_cast<int>(labels.size()) && !labels[static_cast<size_t>(u)].empty())
    return labels[static_cast<size_t>(u)];
  return "s" + std::to_string(u);
}

std::string ChaosSchema::dim_symbol(int u) const {
  if (u < static_cast<int>(dim_symbols.size()) && !dim_symbols[static_cast<size_t>(u)].empty())
    return dim_symbols[static_cast<size_t>(u)];
  return "S" + std::to_string(u);
}

double ChaosSchema::size_of_symbol(const std::string& symbol) const {
  for (int u = 0; u < p; ++u)
    if (dim_symbol(u) == symbol) return static_cast<double>(dims[static_cast<size_t>(u)]);
  return 0.0;
}

std::string ValidationReport::summary() const {
  if (ok()) return "ok";
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue.code + ": " + issue.detail;
  }
  return out;
}

namespace {

bool index_set_valid(const IndexSet& set, int p, std::string* detail) {
  std::set<int> seen;
  for (int u : set) {
    if (u < 0 || u >= p) {
      *detail = "index " + std::to_string(u) + " out of range [0," + std::to_string(p) + ")";
      return false;
    }
    if (!seen.insert(u).second) {
      *detail = "index " + std::to_string(u) + " repeated";
      return false;
    }
  }
  return true;
}

// Backtracking satisfiability over the constrained indices. Values are
// compressed to min(S_u, K) where K counts constrained indices: the supported
// constraints only see the order/equality pattern, and any satisfying
// assignment compresses rank-preservingly into that range.
bool sat_search(const ChaosSchema& schema, const std::vector<int>& vars, size_t next,
                std::vector<long long>& point) {
  if (next == vars.size()) return schema.weight.evaluate(point);
  const int u = vars[next];
  const long long cap = static_cast<long long>(vars.size());
  long long domain = schema.dims[static_cast<size_t>(u)];
  if (domain <= 0 || domain > cap) domain = cap;
  for (long long v = 0; v < domain; ++v) {
    point[static_cast<size_t>(u)] = v;
    // prune: partial assignments violating a pairwise constraint can only be
    // caught cheaply at the end for these small domains
    if (sat_search(schema, vars, next + 1, point)) return true;
  }
  return false;
}

}  // namespace

bool weight_satisfiable(const ChaosSchema& schema) {
  if (schema.weight.trivial()) return true;
  const std::vector<int> vars = schema.weight.constrained_indices();
  std::vector<long long> point(static_cast<size_t>(schema.p), 0);
  return sat_search(schema, vars, 0, point);
}

ValidationReport validate(const ChaosSchema& schema) {
  ValidationReport report;
  auto add = [&](const std::string& code, const std::string& detail) {
    report.issues.push_back({code, detail});
  };

  if (schema.p < 0) add("bad_p", "p must be nonnegative");
  if (static_cast<int>(schema.dims.size()) != schema.p)
    add("bad_dims", "dims length != p");
  for (size_t u = 0; u < schema.dims.size(); ++u) {
    if (schema.dims[u] < 0)
      add("bad_dims", "dimension " + std::to_string(u) + " negative");
  }
  if (schema.q == 0) add("zero_order", "q = 0: no chaos coordinates");
  if (schema.q < 0) add("bad_q", "q negative");
  if (static_cast<int>(schema.chaos_coords.size()) != schema.q)
    add("bad_chaos_coords", "chaos_coords length != q");

  std::string detail;
  for (size_t t = 0; t < schema.chaos_coords.size(); ++t) {
    if (!index_set_valid(schema.chaos_coords[t], schema.p, &detail))
      add("index_out_of_range", "chaos coordinate " + std::to_string(t + 1) + ": " + detail);
  }
  if (!index_set_valid(schema.row_coord, schema.p, &detail))
    add("index_out_of_range", "row coordinate: " + detail);
  if (!index_set_valid(schema.col_coord, schema.p, &detail))
    add("index_out_of_range", "column coordinate: " + detail);

  for (const auto& c : schema.weight.constraints) {
    std::visit(
        [&](const auto& constraint) {
          using T = std::decay_t<decltype(constraint)>;
          if constexpr (std::is_same_v<T, NotEqualTuple>) {
            if (constraint.left.size() != constraint.right.size())
              add("bad_weight", "not_equal_tuple arms differ in length");
          }
        },
        c);
  }
  for (int u : schema.weight.constrained_indices()) {
    if (u < 0 || u >= schema.p)
      add("index_out_of_range", "weight constraint references index " + std::to_string(u));
  }

  if (schema.distribution.kind == DistributionKind::StandardizedBernoulli &&
      !(schema.distribution.param > 0.0 && schema.distribution.param < 1.0))
    add("bad_distribution", "bernoulli probability must lie in (0,1)");

  // symbol consistency: one symbol, one size
  for (int u = 0; u < schema.p; ++u)
    for (int w = u + 1; w < schema.p; ++w)
      if (schema.dim_symbol(u) == schema.dim_symbol(w) &&
          schema.dims[static_cast<size_t>(u)] != schema.dims[static_cast<size_t>(w)]) {
        add("bad_dims", "symbol " + schema.dim_symbol(u) + " carries two sizes");
      }

  if (report.ok() && schema.numeric_dims() && !weight_satisfiable(schema))
    add("unsatisfiable_weight", "no point of the summation lattice satisfies the weight");

  return report;
}

ChaosSchema khatri_rao_schema(int q, long long d, long long n) {
  if (q < 1) throw std::invalid_argument("khatri_rao_schema: q must be >= 1");
  if (d < 1 || n < 1) throw std::invalid_argument("khatri_rao_schema: d, n must be >= 1");
  ChaosSchema s;
  s.p = q + 1;
  s.dims.assign(static_cast<size_t>(q), d);
  s.dims.push_back(n);
  s.dim_symbols.assign(static_cast<size_t>(q), "d");
  s.dim_symbols.push_back("n");
  s.q = q;
  for (int t = 0; t < q; ++t) s.chaos_coords.push_back({t, q});
  for (int t = 0; t < q; ++t) s.row_coord.push_back(t);
  s.col_coord = {q};
  s.distribution = DistributionSpec::gaussian();
  for (int t = 0; t < q; ++t) s.labels.push_back("j" + std::to_string(t + 1));
  s.labels.push_back("k");
  return s;
}

std::pair<ChaosSchema, ChaosSchema> tensor_pca_schemas(long long n, long long d) {
  if (n < 1 || d < 1) throw std::invalid_argument("tensor_pca_schemas: n, d must be >= 1");
  // order-1 diagonal part: indices (i, j, k), entries g^2 - 1
  ChaosSchema y1;
  y1.p = 3;
  y1.dims = {n, d, d};
  y1.dim_symbols = {"n", "d", "d"};
  y1.q = 1;
  y1.chaos_coords = {{0, 1, 2}};
  y1.row_coord = {1};
  y1.col_coord = {2};
  y1.distribution = DistributionSpec::centered_chisq1();
  y1.labels = {"i", "j", "k"};

  // order-2 off-diagonal part: indices (i, j1, j2, k1, k2)
  ChaosSchema y2;
  y2.p = 5;
  y2.dims = {n, d, d, d, d};
  y2.dim_symbols = {"n", "d", "d", "d", "d"};
  y2.q = 2;
  y2.chaos_coords = {{0, 1, 3}, {0, 2, 4}};
  y2.row_coord = {1, 2};
  y2.col_coord = {3, 4};
  y2.weight.constraints.push_back(NotEqualTuple{{1, 3}, {2, 4}});
  y2.distribution = DistributionSpec::gaussian();
  y2.labels = {"i", "j1", "j2", "k1", "k2"};
  return {y1, y2};
}

std::pair<ChaosSchema, ChaosSchema> ellipsoid_schemas(long long m, long long d) {
  if (m < 1 || d < 1) throw std::invalid_argument("ellipsoid_schemas: m, d must be >= 1");
  // order-4 gaussian chaos: indices (i, j, a, b)
  ChaosSchema phi;
  phi.p = 4;
  phi.dims = {m, m, d, d};
  phi.dim_symbols = {"m", "m", "d", "d"};
  phi.q = 4;
  phi.chaos_coords = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
  phi.row_coord = {0};
  phi.col_coord = {1};
  phi.weight.constraints.push_back(AllDistinct{{0, 1}});
  phi.weight.constraints.push_back(AllDistinct{{2, 3}});
  phi.distribution = DistributionSpec::gaussian();
  phi.labels = {"i", "j", "a", "b"};

  // order-2 chaos with squared-centered-gaussian entries: indices (i, j, a)
  ChaosSchema psi;
  psi.p = 3;
  psi.dims = {m, m, d};
  psi.dim_symbols = {"m", "m", "d"};
  psi.q = 2;
  psi.chaos_coords = {{0, 2}, {1, 2}};
  psi.row_coord = {0};
  psi.col_coord = {1};
  psi.weight.constraints.push_back(AllDistinct{{0, 1}});
  psi.distribution = DistributionSpec::centered_chisq1();
  psi.labels = {"i", "j", "a"};
  return {phi, psi};
}

}  // namespace chaosbound
