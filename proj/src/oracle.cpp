#include "chaosbound/oracle.hpp"

#include <cmath>

namespace chaosbound {

namespace {

struct AxisLayout {
  std::vector<int> digits;        // summation indices in row/col order, last fastest
  long long extent = 1;
};

AxisLayout axis_layout(const ChaosSchema& schema, const FlatteningAssignment& a, bool row_side) {
  AxisLayout layout;
  for (int t = 0; t < schema.coordinate_count(); ++t) {
    const CoordSide side = a.placement[static_cast<size_t>(t)];
    const bool on_axis = row_side ? side != CoordSide::Col : side != CoordSide::Row;
    if (!on_axis) continue;
    for (int u : schema.coordinate(t)) {
      layout.digits.push_back(u);
      layout.extent *= schema.dims[static_cast<size_t>(u)];
    }
  }
  return layout;
}

long long linearize(const AxisLayout& layout, const std::vector<long long>& point,
                    const ChaosSchema& schema) {
  long long idx = 0;
  for (int u : layout.digits) idx = idx * schema.dims[static_cast<size_t>(u)] + point[static_cast<size_t>(u)];
  return idx;
}

}  // namespace

Eigen::MatrixXd explicit_flattening(const ChaosSchema& schema, const FlatteningAssignment& a,
                                    const OracleLimits& limits) {
  if (!schema.numeric_dims())
    throw OracleTooLarge("explicit flattening requires numeric dimension sizes");
  FlatteningAssignment assignment = a;
  if (assignment.index_split.empty()) derive_index_split(schema, assignment);

  const AxisLayout rows = axis_layout(schema, assignment, true);
  const AxisLayout cols = axis_layout(schema, assignment, false);
  if (rows.extent > limits.max_side || cols.extent > limits.max_side)
    throw OracleTooLarge("flattening is " + std::to_string(rows.extent) + "x" +
                         std::to_string(cols.extent) + ", cap " + std::to_string(limits.max_side));
  long long lattice = 1;
  for (long long s : schema.dims) {
    lattice *= s;
    if (lattice > limits.max_lattice)
      throw OracleTooLarge("summation lattice exceeds cap");
  }

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows.extent, cols.extent);
  std::vector<long long> point(static_cast<size_t>(schema.p), 0);
  for (long long step = 0; step < lattice; ++step) {
    if (schema.weight.evaluate(point))
      m(linearize(rows, point, schema), linearize(cols, point, schema)) += 1.0;
    for (int u = schema.p - 1; u >= 0; --u) {
      if (++point[static_cast<size_t>(u)] < schema.dims[static_cast<size_t>(u)]) break;
      point[static_cast<size_t>(u)] = 0;
    }
  }
  return m;
}

double dense_spectral_norm(const Eigen::MatrixXd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() == 1 && m.cols() == 1) return std::abs(m(0, 0));
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

Eigen::MatrixXd compact_support(const Eigen::MatrixXd& m) {
  std::vector<Eigen::Index> rows, cols;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    if ((m.row(r).array() != 0.0).any()) rows.push_back(r);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if ((m.col(c).array() != 0.0).any()) cols.push_back(c);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < cols.size(); ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(rows[r], cols[c]);
  return out;
}

OracleReport oracle_check(const ChaosSchema& schema, const OracleLimits& limits,
                          double tolerance) {
  OracleReport report;
  report.tolerance = tolerance;
  for (FlatteningClass cls : {FlatteningClass::Sigma, FlatteningClass::V, FlatteningClass::Rr}) {
    for (const auto& a : enumerate_assignments(schema, cls)) {
      OracleRowResult row;
      row.assignment = a;
      row.exact = schema.weight.trivial();
      const FlatteningRow formula = flattening_norm_sq(schema, a);
      row.formula_norm = std::sqrt(formula.norm_sq_numeric);
      row.explicit_norm = dense_spectral_norm(compact_support(explicit_flattening(schema, a, limits)));
      const double scale = std::max(1.0, row.formula_norm);
      if (row.exact) {
        row.pass = std::abs(row.formula_norm - row.explicit_norm) <= tolerance * scale;
      } else {
        row.pass = row.explicit_norm <= row.formula_norm + tolerance * scale;
      }
      report.all_pass = report.all_pass && row.pass;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace chaosbound
