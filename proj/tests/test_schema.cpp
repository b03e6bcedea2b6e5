#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chaosbound/builtins.hpp"
#include "chaosbound/schema.hpp"
#include "test_support.hpp"

using namespace chaosbound;

TEST_CASE("khatri-rao schema is well formed") {
  const ChaosSchema s = khatri_rao_schema(2, 5, 7);
  CHECK(validate(s).ok());
  CHECK(s.p == 3);
  CHECK(s.q == 2);
  CHECK(s.chaos_coords[0] == IndexSet{0, 2});
  CHECK(s.chaos_coords[1] == IndexSet{1, 2});
  CHECK(s.row_coord == IndexSet{0, 1});
  CHECK(s.col_coord == IndexSet{2});
  CHECK(s.row_dim() == 25);
  CHECK(s.col_dim() == 7);
  CHECK(s.max_alphabet() == 35);
}

TEST_CASE("khatri-rao order 1 and dimension products") {
  const ChaosSchema s1 = khatri_rao_schema(1, 4, 9);
  CHECK(s1.p == 2);
  CHECK(s1.chaos_coords.size() == 1);
  CHECK(s1.chaos_coords[0] == IndexSet{0, 1});

  const ChaosSchema s3 = khatri_rao_schema(3, 2, 5);
  CHECK(s3.row_dim() == 8);
  CHECK(s3.col_dim() == 5);

  CHECK_THROWS_AS(khatri_rao_schema(0, 2, 2), std::invalid_argument);
}

TEST_CASE("validate reports index range violations") {
  ChaosSchema s = khatri_rao_schema(2, 3, 4);
  s.chaos_coords[0].push_back(s.p);  // out of range
  const ValidationReport report = validate(s);
  CHECK(!report.ok());
  CHECK(report.issues[0].code == "index_out_of_range");
}

TEST_CASE("validate reports duplicates inside an index set") {
  ChaosSchema s = khatri_rao_schema(2, 3, 4);
  s.row_coord = {0, 0};
  CHECK(!validate(s).ok());
}

TEST_CASE("validate rejects q = 0") {
  ChaosSchema s;
  s.p = 1;
  s.dims = {3};
  s.q = 0;
  s.row_coord = {0};
  const ValidationReport report = validate(s);
  CHECK(!report.ok());
  bool found = false;
  for (const auto& issue : report.issues) found = found || issue.code == "zero_order";
  CHECK(found);
}

TEST_CASE("pigeonhole weights are unsatisfiable") {
  ChaosSchema s;
  s.p = 3;
  s.dims = {1, 1, 1};
  s.q = 1;
  s.chaos_coords = {{0, 1, 2}};
  s.row_coord = {0};
  s.col_coord = {1};
  s.weight.constraints.push_back(AllDistinct{{0, 1, 2}});
  const ValidationReport report = validate(s);
  CHECK(!report.ok());
  bool found = false;
  for (const auto& issue : report.issues) found = found || issue.code == "unsatisfiable_weight";
  CHECK(found);
}

TEST_CASE("weight satisfiability handles order constraints with large dims") {
  ChaosSchema s;
  s.p = 2;
  s.dims = {1000000, 1000000};
  s.q = 1;
  s.chaos_coords = {{0, 1}};
  s.row_coord = {0};
  s.col_coord = {1};
  s.weight.constraints.push_back(Less{0, 1});
  CHECK(weight_satisfiable(s));
  s.weight.constraints.push_back(Greater{0, 1});  // contradiction
  CHECK(!weight_satisfiable(s));
}

TEST_CASE("tensor-pca schemas match their coordinate tables") {
  const auto [y1, y2] = tensor_pca_schemas(6, 3);
  CHECK(validate(y1).ok());
  CHECK(validate(y2).ok());

  CHECK(y1.q == 1);
  CHECK(y1.chaos_coords[0] == IndexSet{0, 1, 2});
  CHECK(y1.row_coord == IndexSet{1});
  CHECK(y1.col_coord == IndexSet{2});
  CHECK(y1.distribution.kind == DistributionKind::CenteredChiSq1);
  CHECK(y1.distribution.variance() == 2.0);

  CHECK(y2.q == 2);
  CHECK(y2.chaos_coords[0] == IndexSet{0, 1, 3});
  CHECK(y2.chaos_coords[1] == IndexSet{0, 2, 4});
  CHECK(y2.row_coord == IndexSet{1, 2});
  CHECK(y2.col_coord == IndexSet{3, 4});
  CHECK(y2.weight.constraints.size() == 1);
}

TEST_CASE("tensor-pca at unit dims flags only the weighted part") {
  const auto [y1, y2] = tensor_pca_schemas(1, 1);
  CHECK(validate(y1).ok());
  const ValidationReport r2 = validate(y2);
  CHECK(!r2.ok());
  CHECK(r2.issues[0].code == "unsatisfiable_weight");
}

TEST_CASE("ellipsoid schemas match their coordinate tables") {
  const auto [phi, psi] = ellipsoid_schemas(4, 3);
  CHECK(validate(phi).ok());
  CHECK(validate(psi).ok());

  CHECK(phi.q == 4);
  CHECK(phi.chaos_coords[0] == IndexSet{0, 2});
  CHECK(phi.chaos_coords[1] == IndexSet{0, 3});
  CHECK(phi.chaos_coords[2] == IndexSet{1, 2});
  CHECK(phi.chaos_coords[3] == IndexSet{1, 3});
  CHECK(phi.row_coord == IndexSet{0});
  CHECK(phi.col_coord == IndexSet{1});
  CHECK(phi.weight.constraints.size() == 2);

  CHECK(psi.q == 2);
  CHECK(psi.distribution.kind == DistributionKind::CenteredChiSq1);
}

TEST_CASE("ellipsoid at m = 1 is flagged by pigeonhole") {
  const auto [phi, psi] = ellipsoid_schemas(1, 1);
  CHECK(!validate(phi).ok());
  CHECK(!validate(psi).ok());
}

TEST_CASE("generated schemas validate at dims >= 2") {
  CHECK(validate(khatri_rao_schema(3, 2, 2)).ok());
  CHECK(validate(tensor_pca_schemas(2, 2).first).ok());
  CHECK(validate(tensor_pca_schemas(2, 2).second).ok());
  CHECK(validate(ellipsoid_schemas(2, 2).first).ok());
  CHECK(validate(ellipsoid_schemas(2, 2).second).ok());
}

TEST_CASE("dimension products agree with brute force over random schemas") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    testsupport::SchemaGenOptions opt;
    opt.max_p = 5;
    opt.max_dim = 6;
    opt.oracle_cap = 1 << 20;
    const ChaosSchema s = testsupport::random_schema(i, opt);
    long long d1 = 1;
    for (int u : s.row_coord) d1 *= s.dims[static_cast<size_t>(u)];
    long long d2 = 1;
    for (int u : s.col_coord) d2 *= s.dims[static_cast<size_t>(u)];
    CHECK(s.row_dim() == d1);
    CHECK(s.col_dim() == d2);
    CHECK(s.max_matrix_dim() == std::max(d1, d2));
    long long m = 1;
    for (int t = 0; t < s.q; ++t) {
      long long mt = 1;
      for (int u : s.chaos_coords[static_cast<size_t>(t)]) mt *= s.dims[static_cast<size_t>(u)];
      CHECK(s.alphabet_size(t) == mt);
      m = std::max(m, mt);
    }
    CHECK(s.max_alphabet() == m);
  }
}

TEST_CASE("schema JSON round trip") {
  const ChaosSchema original = ellipsoid_schemas(3, 2).first;
  const std::string text = schema_to_json_text(original);
  const ChaosSchema parsed = schema_from_json_text(text);
  CHECK(parsed.p == original.p);
  CHECK(parsed.q == original.q);
  CHECK(parsed.dims == original.dims);
  CHECK(parsed.chaos_coords == original.chaos_coords);
  CHECK(parsed.row_coord == original.row_coord);
  CHECK(parsed.col_coord == original.col_coord);
  CHECK(parsed.weight.constraints.size() == original.weight.constraints.size());
  CHECK(parsed.distribution.kind == original.distribution.kind);
}

TEST_CASE("schema JSON rejects unknown fields and malformed input") {
  CHECK_THROWS_AS(schema_from_json_text("{"), SchemaParseError);
  CHECK_THROWS_AS(schema_from_json_text(R"({"p":1,"dims":[2],"q":1,"chaos_coords":[[0]],)"
                                        R"("row_coord":[0],"col_coord":[],"extra":1})"),
                  SchemaParseError);
  // symbolic dims parse with unset sizes
  const ChaosSchema s = schema_from_json_text(
      R"({"p":2,"dims":["d","n"],"q":1,"chaos_coords":[[0,1]],"row_coord":[0],"col_coord":[1]})");
  CHECK(!s.numeric_dims());
  CHECK(s.dim_symbol(0) == "d");
}

TEST_CASE("builtin registry resolves names and size overrides") {
  CHECK(builtin_schema("khatri-rao-q2").has_value());
  CHECK(!builtin_schema("no-such").has_value());
  const auto s = builtin_schema("khatri-rao-q2", {{"d", 7}, {"n", 11}});
  CHECK(s->dims == std::vector<long long>{7, 7, 11});
  CHECK(builtin_shape("wigner").has_value());
  CHECK(!builtin_shape("khatri-rao-q2").has_value());
}
