#include "chaosbound/flattening.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace chaosbound {

std::string to_string(FlatteningClass cls) {
  switch (cls) {
    case FlatteningClass::Sigma: return "sigma";
    case FlatteningClass::V: return "v";
    case FlatteningClass::Rr: return "r";
    case FlatteningClass::Other: return "other";
  }
  return "?";
}

const char* side_token(CoordSide side) {
  switch (side) {
    case CoordSide::Row: return "R";
    case CoordSide::Col: return "C";
    case CoordSide::Both: return "RC";
  }
  return "?";
}

const char* side_token(IndexSide side) {
  switch (side) {
    case IndexSide::RowOnly: return "R";
    case IndexSide::ColOnly: return "C";
    case IndexSide::Both: return "RC";
    case IndexSide::Neither: return ".";
  }
  return "?";
}

std::string FlatteningAssignment::placement_string() const {
  std::string out;
  const size_t chaos = placement.size() >= 2 ? placement.size() - 2 : 0;
  for (size_t t = 0; t < placement.size(); ++t) {
    if (t == chaos) out += "|";
    else if (t > 0) out += ",";
    out += side_token(placement[t]);
  }
  return out;
}

void derive_index_split(const ChaosSchema& schema, FlatteningAssignment& a) {
  std::vector<bool> in_row(static_cast<size_t>(schema.p), false);
  std::vector<bool> in_col(static_cast<size_t>(schema.p), false);
  for (int t = 0; t < schema.coordinate_count(); ++t) {
    const CoordSide side = a.placement[static_cast<size_t>(t)];
    for (int u : schema.coordinate(t)) {
      if (side != CoordSide::Col) in_row[static_cast<size_t>(u)] = true;
      if (side != CoordSide::Row) in_col[static_cast<size_t>(u)] = true;
    }
  }
  a.index_split.resize(static_cast<size_t>(schema.p));
  for (int u = 0; u < schema.p; ++u) {
    const size_t i = static_cast<size_t>(u);
    if (in_row[i] && in_col[i]) a.index_split[i] = IndexSide::Both;
    else if (in_row[i]) a.index_split[i] = IndexSide::RowOnly;
    else if (in_col[i]) a.index_split[i] = IndexSide::ColOnly;
    else a.index_split[i] = IndexSide::Neither;
  }
}

namespace {

// Odometer over the chaos-coordinate placements with digit order
// Row < Col (< Both when diagonalization is allowed).
void enumerate_chaos_placements(int q, bool allow_both,
                                const std::function<void(const std::vector<CoordSide>&)>& emit) {
  std::vector<CoordSide> digits(static_cast<size_t>(q), CoordSide::Row);
  const int radix = allow_both ? 3 : 2;
  const long long total = static_cast<long long>(std::pow(radix, q));
  for (long long code = 0; code < total; ++code) {
    long long rest = code;
    for (int t = q - 1; t >= 0; --t) {
      digits[static_cast<size_t>(t)] = static_cast<CoordSide>(rest % radix);
      rest /= radix;
    }
    emit(digits);
  }
}

}  // namespace

std::vector<FlatteningAssignment> enumerate_assignments(const ChaosSchema& schema,
                                                        FlatteningClass cls) {
  std::vector<FlatteningAssignment> out;
  const int q = schema.q;
  auto push = [&](const std::vector<CoordSide>& chaos, CoordSide row, CoordSide col) {
    FlatteningAssignment a;
    a.cls = cls;
    a.placement = chaos;
    a.placement.push_back(row);
    a.placement.push_back(col);
    derive_index_split(schema, a);
    out.push_back(std::move(a));
  };

  switch (cls) {
    case FlatteningClass::Sigma:
      enumerate_chaos_placements(q, false, [&](const std::vector<CoordSide>& chaos) {
        push(chaos, CoordSide::Row, CoordSide::Col);
      });
      break;
    case FlatteningClass::V:
      enumerate_chaos_placements(q, false, [&](const std::vector<CoordSide>& chaos) {
        if (std::none_of(chaos.begin(), chaos.end(),
                         [](CoordSide s) { return s == CoordSide::Row; }))
          return;  // R must be nonempty
        push(chaos, CoordSide::Col, CoordSide::Col);
      });
      break;
    case FlatteningClass::Rr:
      enumerate_chaos_placements(q, true, [&](const std::vector<CoordSide>& chaos) {
        if (std::none_of(chaos.begin(), chaos.end(),
                         [](CoordSide s) { return s == CoordSide::Both; }))
          return;  // at least one diagonalized chaos coordinate
        push(chaos, CoordSide::Row, CoordSide::Col);
      });
      break;
    case FlatteningClass::Other:
      // diagnostic bucket: the remaining row/column partitions of the
      // coordinates (no diagonalization)
      enumerate_chaos_placements(q + 2, false, [&](const std::vector<CoordSide>& all) {
        const CoordSide row = all[static_cast<size_t>(q)];
        const CoordSide col = all[static_cast<size_t>(q + 1)];
        const bool is_sigma = row == CoordSide::Row && col == CoordSide::Col;
        const bool is_v = row == CoordSide::Col && col == CoordSide::Col &&
                          std::any_of(all.begin(), all.begin() + q,
                                      [](CoordSide s) { return s == CoordSide::Row; });
        if (is_sigma || is_v) return;
        std::vector<CoordSide> chaos(all.begin(), all.begin() + q);
        push(chaos, row, col);
      });
      break;
  }
  return out;
}

FlatteningRow flattening_norm_sq(const ChaosSchema& schema, const FlatteningAssignment& a) {
  FlatteningRow row;
  row.assignment = a;
  if (row.assignment.index_split.empty()) derive_index_split(schema, row.assignment);
  row.is_upper_bound = !schema.weight.trivial();

  bool numeric = true;
  double value = 1.0;
  for (int u = 0; u < schema.p; ++u) {
    const IndexSide side = row.assignment.index_split[static_cast<size_t>(u)];
    // exponent = [u not in R-union] + [u not in C-union]
    int e = 0;
    if (side == IndexSide::ColOnly || side == IndexSide::Neither) ++e;
    if (side == IndexSide::RowOnly || side == IndexSide::Neither) ++e;
    if (e == 0) continue;
    row.norm_sq.multiply(schema.dim_symbol(u), e);
    const long long s = schema.dims[static_cast<size_t>(u)];
    if (s < 1) numeric = false;
    for (int i = 0; i < e && numeric; ++i) value *= static_cast<double>(s);
  }
  row.norm_sq_numeric = numeric ? value : 0.0;
  return row;
}

FlatteningTable build_table(const ChaosSchema& schema) {
  FlatteningTable table;
  for (FlatteningClass cls : {FlatteningClass::Sigma, FlatteningClass::V, FlatteningClass::Rr}) {
    MonomialMax best;
    const size_t first = table.rows.size();
    for (const auto& a : enumerate_assignments(schema, cls)) {
      table.rows.push_back(flattening_norm_sq(schema, a));
      best.insert(table.rows.back().norm_sq);
    }
    table.highlighted.resize(table.rows.size(), false);
    for (size_t i = first; i < table.rows.size(); ++i)
      table.highlighted[i] = best.contains(table.rows[i].norm_sq);
  }
  return table;
}

std::vector<size_t> FlatteningTable::highlights() const {
  std::vector<size_t> out;
  for (size_t i = 0; i < highlighted.size(); ++i)
    if (highlighted[i]) out.push_back(i);
  return out;
}

std::vector<size_t> FlatteningTable::class_rows(FlatteningClass cls) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < rows.size(); ++i)
    if (rows[i].assignment.cls == cls) out.push_back(i);
  return out;
}

ChaosParameters parameters_from_table(const ChaosSchema& schema, const FlatteningTable& table) {
  ChaosParameters params;
  auto pick = [&](FlatteningClass cls) -> ChaosParameter& {
    if (cls == FlatteningClass::Sigma) return params.sigma;
    if (cls == FlatteningClass::V) return params.v;
    return params.r;
  };
  for (const auto& row : table.rows) {
    ChaosParameter& p = pick(row.assignment.cls);
    p.norm_sq_max.insert(row.norm_sq);
    p.numeric = std::max(p.numeric, row.norm_sq_numeric);
  }
  params.sigma.numeric = std::sqrt(params.sigma.numeric);
  params.v.numeric = std::sqrt(params.v.numeric);
  params.r.numeric = std::sqrt(params.r.numeric);
  (void)schema;
  return params;
}

ChaosParameters chaos_parameters(const ChaosSchema& schema) {
  return parameters_from_table(schema, build_table(schema));
}

namespace {

std::string format_numeric(double v) {
  if (v <= 0.0) return "-";
  char buf[64];
  if (v == std::floor(v) && v < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.0f", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%.6g", v);
  }
  return buf;
}

}  // namespace

std::string render_table_text(const ChaosSchema& schema, const FlatteningTable& table) {
  const int q = schema.q;
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header1, header2;

  header1.push_back("type");
  header2.push_back("");
  for (int t = 0; t < q; ++t) {
    std::string name;
    for (int u : schema.coordinate(t)) name += schema.label(u);
    header1.push_back(t == 0 ? "chaos" : "");
    header2.push_back(name);
  }
  for (int t = q; t < q + 2; ++t) {
    std::string name;
    for (int u : schema.coordinate(t)) name += schema.label(u);
    if (name.empty()) name = "()";
    header1.push_back(t == q ? "matrix" : "");
    header2.push_back(name);
  }
  for (int u = 0; u < schema.p; ++u) {
    header1.push_back(u == 0 ? "indices" : "");
    header2.push_back(schema.label(u));
  }
  header1.push_back("norm^2");
  header2.push_back("");
  header1.push_back("value");
  header2.push_back("");
  header1.push_back("");
  header2.push_back("");

  for (size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    std::vector<std::string> line;
    line.push_back(to_string(row.assignment.cls));
    for (int t = 0; t < q + 2; ++t)
      line.push_back(side_token(row.assignment.placement[static_cast<size_t>(t)]));
    for (int u = 0; u < schema.p; ++u)
      line.push_back(side_token(row.assignment.index_split[static_cast<size_t>(u)]));
    std::string sym = row.norm_sq.str();
    if (row.is_upper_bound) sym = "<= " + sym;
    line.push_back(sym);
    line.push_back(format_numeric(row.norm_sq_numeric));
    line.push_back(table.highlighted[i] ? "*" : "");
    cells.push_back(std::move(line));
  }

  std::vector<size_t> width(header1.size(), 0);
  auto grow = [&](const std::vector<std::string>& line) {
    for (size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  };
  grow(header1);
  grow(header2);
  for (const auto& line : cells) grow(line);

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& line) {
    for (size_t c = 0; c < line.size(); ++c) {
      out << line[c];
      if (c + 1 < line.size()) out << std::string(width[c] - line[c].size() + 2, ' ');
    }
    out << "\n";
  };
  emit(header1);
  emit(header2);
  out << std::string(std::accumulate(width.begin(), width.end(), size_t{0}) + 2 * (width.size() - 1), '-')
      << "\n";
  FlatteningClass last = FlatteningClass::Sigma;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i > 0 && table.rows[i].assignment.cls != last) out << "\n";
    last = table.rows[i].assignment.cls;
    emit(cells[i]);
  }
  return out.str();
}

std::string render_table_csv(const ChaosSchema& schema, const FlatteningTable& table) {
  std::ostringstream out;
  out << "class,placement,index_placement,exponents,norm_sq_symbolic,norm_sq,highlight\n";
  for (size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    out << to_string(row.assignment.cls) << ",";
    out << row.assignment.placement_string() << ",";
    std::string split;
    for (int u = 0; u < schema.p; ++u) {
      if (u) split += ";";
      split += side_token(row.assignment.index_split[static_cast<size_t>(u)]);
    }
    out << split << ",";
    std::string exps;
    for (int u = 0; u < schema.p; ++u) {
      const IndexSide side = row.assignment.index_split[static_cast<size_t>(u)];
      int e = 0;
      if (side == IndexSide::ColOnly || side == IndexSide::Neither) ++e;
      if (side == IndexSide::RowOnly || side == IndexSide::Neither) ++e;
      if (u) exps += ";";
      exps += std::to_string(e);
    }
    out << exps << ",";
    out << row.norm_sq.str() << ",";
    out << format_numeric(row.norm_sq_numeric) << ",";
    out << (table.highlighted[i] ? 1 : 0) << "\n";
  }
  return out.str();
}

}  // namespace chaosbound
