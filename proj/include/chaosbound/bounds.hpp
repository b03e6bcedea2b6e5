#pragma once

#include <string>
#include <vector>

#include "chaosbound/flattening.hpp"
#include "chaosbound/rational.hpp"
#include "chaosbound/schema.hpp"

namespace chaosbound {

/// Scalar statistics of the entry distribution that enter the bound
/// profiles. alpha is the L^k norm at k = max(2, floor(log(d+m))); l_log_m
/// the analogue at k = max(2, floor(log m)) used by the alternative
/// subgaussian-free upper bound.
struct DistributionParams {
  double l1 = 0.0;
  double psi2 = 0.0;  // inf{t > 0 : E exp(h^2/t^2) <= 2}; infinity when h is not subgaussian
  double alpha = 0.0;
  double l_log_m = 0.0;
  double variance = 1.0;
};

/// Requires d, m >= 2. Closed forms where available, quadrature otherwise.
DistributionParams distribution_params(const DistributionSpec& dist, long long d, long long m);

/// Moment helpers, exposed for testing.
double lp_norm(const DistributionSpec& dist, double k);
double psi2_norm(const DistributionSpec& dist);

enum class BoundTheorem {
  NckUpper,
  NckLower,
  StrongNck,
  RosenthalUpper,
  RosenthalLower,
  StrongRosenthal,
};

std::string to_string(BoundTheorem theorem);

enum class ParamRef { Sigma, V, R };

/// One additive term: sign * constant_tag * factor^power * log(d+m)^exp * parameter.
struct BoundTerm {
  int sign = 1;
  std::string constant_tag;   // "C_q" or "c_q"; evaluates to 1 numerically
  std::string factor_name;    // "psi2", "L1", "alpha" or empty
  int factor_power = 0;
  double factor_value = 1.0;
  Rational log_exponent;
  ParamRef parameter = ParamRef::Sigma;
  double parameter_value = 0.0;

  double value(double log_dm) const;
};

struct BoundProfile {
  BoundTheorem theorem = BoundTheorem::NckUpper;
  int q = 0;
  long long d = 0, m = 0;
  std::vector<BoundTerm> terms;
  double numeric_value = 0.0;  // all unknown constants set to 1

  /// Term list with concrete exponents, e.g. "C_q*psi2^2*log(d+m)^{3/2}*v".
  std::string str() const;
};

/// Evaluates one theorem's bound expression for the given parameters.
/// d and m are the larger matrix dimension and the largest chaos alphabet.
BoundProfile bound_profile(BoundTheorem theorem, const DistributionParams& params,
                           const ChaosParameters& cp, int q, long long d, long long m);

/// Variant of the NCK upper bound with the subgaussian factor replaced by
/// the L^{log m} norm (useful for heavy-tailed entries).
BoundProfile nck_upper_logm_profile(const DistributionParams& params, const ChaosParameters& cp,
                                    int q, long long d, long long m);

/// Generic-q display of the theorem's bound, stable for golden-file tests.
std::string canonical_form(BoundTheorem theorem);

struct BestBound {
  BoundProfile profile;
  std::string note;  // which regime condition holds numerically
};

/// Minimizer over the four upper profiles at the schema's dimensions with
/// all constants set to 1.
BestBound best_bound(const ChaosSchema& schema);

/// Log power of the partially iterated inequality after k of q iterations.
Rational partial_nck_log_power(int k, int q);

}  // namespace chaosbound
