#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chaosbound/monomial.hpp"
#include "chaosbound/schema.hpp"

namespace chaosbound {

/// The three named flattening classes plus a diagnostic bucket for
/// row/column partitions that match none of the definitions.
enum class FlatteningClass { Sigma, V, Rr, Other };

std::string to_string(FlatteningClass cls);

/// Where a coordinate (or summation index) is placed.
enum class CoordSide : unsigned char { Row, Col, Both };
enum class IndexSide : unsigned char { RowOnly, ColOnly, Both, Neither };

const char* side_token(CoordSide side);   // "R", "C", "RC"
const char* side_token(IndexSide side);   // "R", "C", "RC", "."

/// A choice of row/column placement for every coordinate, together with the
/// derived placement of every summation index.
struct FlatteningAssignment {
  FlatteningClass cls = FlatteningClass::Other;
  std::vector<CoordSide> placement;   // q+2 entries: chaos coords, row coord, col coord
  std::vector<IndexSide> index_split; // p entries, derived from the coordinate unions

  std::string placement_string() const;  // e.g. "R,C|R,C"
};

/// Fills index_split from placement.
void derive_index_split(const ChaosSchema& schema, FlatteningAssignment& a);

/// All assignments of the class in lexicographic order over the chaos
/// coordinate placements (Row < Col < Both). Class sizes: 2^q for Sigma,
/// 2^q - 1 for V, 3^q - 2^q for Rr.
std::vector<FlatteningAssignment> enumerate_assignments(const ChaosSchema& schema,
                                                        FlatteningClass cls);

/// One table row: the squared spectral norm of the flattening as a monomial
/// in the dimension symbols, evaluated numerically at the schema's sizes.
/// Exact for trivial weights, an upper bound otherwise.
struct FlatteningRow {
  FlatteningAssignment assignment;
  Monomial norm_sq;
  double norm_sq_numeric = 0.0;  // 0 when some dimension size is unset
  bool is_upper_bound = false;
};

FlatteningRow flattening_norm_sq(const ChaosSchema& schema, const FlatteningAssignment& a);

/// Rows of all three classes in enumeration order, with the dominant rows of
/// each class highlighted. A row is highlighted when its monomial belongs to
/// the antichain of per-class maxima (every row attaining a maximum is
/// marked).
struct FlatteningTable {
  std::vector<FlatteningRow> rows;
  std::vector<bool> highlighted;

  std::vector<size_t> highlights() const;
  std::vector<size_t> class_rows(FlatteningClass cls) const;
};

FlatteningTable build_table(const ChaosSchema& schema);

/// One chaos parameter: the class maximum at squared scale symbolically, and
/// the square root numerically.
struct ChaosParameter {
  MonomialMax norm_sq_max;
  double numeric = 0.0;

  std::string str() const { return norm_sq_max.str(2); }
};

struct ChaosParameters {
  ChaosParameter sigma, v, r;
};

ChaosParameters chaos_parameters(const ChaosSchema& schema);
ChaosParameters parameters_from_table(const ChaosSchema& schema, const FlatteningTable& table);

/// Text table mirroring the usual layout: class, coordinate placements,
/// summation-index placements, squared norm. Dominant rows are starred.
std::string render_table_text(const ChaosSchema& schema, const FlatteningTable& table);

/// CSV with columns class, placement, index placement, exponents, norm_sq.
std::string render_table_csv(const ChaosSchema& schema, const FlatteningTable& table);

}  // namespace chaosbound
