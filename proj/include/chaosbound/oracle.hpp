#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

#include "chaosbound/flattening.hpp"
#include "chaosbound/schema.hpp"

namespace chaosbound {

struct OracleTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleLimits {
  long long max_side = 4096;          // rows/cols of the explicit matrix
  long long max_lattice = 1 << 26;    // summation lattice points
};

/// Builds the flattening as a literal dense matrix. Rows are indexed by the
/// coordinates assigned to the row side in listed order (each coordinate in
/// its own index order), mixed-radix with the last index fastest; columns
/// likewise. A coordinate placed on both sides is diagonalized: its value is
/// written into both axes.
Eigen::MatrixXd explicit_flattening(const ChaosSchema& schema, const FlatteningAssignment& a,
                                    const OracleLimits& limits = {});

/// Spectral norm by dense SVD; the independent reference for all formula
/// checks.
double dense_spectral_norm(const Eigen::MatrixXd& m);

/// Drops all-zero rows and columns; the nonzero singular values are
/// unchanged. Flattenings carry at most one nonzero per lattice point, so
/// this keeps the oracle SVD proportional to the support.
Eigen::MatrixXd compact_support(const Eigen::MatrixXd& m);

struct OracleRowResult {
  FlatteningAssignment assignment;
  double formula_norm = 0.0;   // sqrt of the closed-form squared norm
  double explicit_norm = 0.0;  // dense SVD of the explicit matrix
  bool exact = false;          // trivial weight: equality expected
  bool pass = false;
};

struct OracleReport {
  std::vector<OracleRowResult> rows;
  bool all_pass = true;
  double tolerance = 1e-9;
};

/// Compares the closed-form norm of every flattening in all three classes
/// against the explicit matrix: equality within the relative tolerance for
/// trivial weights, formula >= explicit otherwise.
OracleReport oracle_check(const ChaosSchema& schema, const OracleLimits& limits = {},
                          double tolerance = 1e-9);

}  // namespace chaosbound
