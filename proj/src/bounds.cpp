#include "chaosbound/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace chaosbound {

namespace {

constexpr double kPi = 3.14159265358979323846;

double gaussian_abs_moment(double k) {
  // E|g|^k = 2^{k/2} Gamma((k+1)/2) / sqrt(pi)
  return std::exp(0.5 * k * std::log(2.0) + std::lgamma(0.5 * (k + 1.0)) - 0.5 * std::log(kPi));
}

// E |g^2 - 1|^k by composite Simpson over the gaussian density.
double chisq_abs_moment(double k) {
  const double radius = std::sqrt(2.0 * k + 1.0) + 12.0;
  const int intervals = 4000;
  const double h = radius / intervals;
  auto f = [&](double x) {
    const double dev = std::abs(x * x - 1.0);
    if (dev == 0.0) return 0.0;
    return std::exp(k * std::log(dev) - 0.5 * x * x) / std::sqrt(2.0 * kPi);
  };
  double sum = f(0.0) + f(radius);
  for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return 2.0 * sum * h / 3.0;  // both tails
}

// E exp(h^2/t^2), used by the psi2 bisection. Returns +inf when divergent.
double exp_square_moment(const DistributionSpec& dist, double t) {
  const double t2 = t * t;
  switch (dist.kind) {
    case DistributionKind::Gaussian:
      if (t2 <= 2.0) return std::numeric_limits<double>::infinity();
      return 1.0 / std::sqrt(1.0 - 2.0 / t2);
    case DistributionKind::Rademacher:
    case DistributionKind::EdgeRademacher:
      return std::exp(1.0 / t2);
    case DistributionKind::StandardizedBernoulli: {
      const double p = dist.param;
      const double a2 = (1.0 - p) / p;      // value on success, squared
      const double b2 = p / (1.0 - p);      // value on failure, squared
      return p * std::exp(a2 / t2) + (1.0 - p) * std::exp(b2 / t2);
    }
    case DistributionKind::CenteredChiSq1:
      // (g^2-1)^2 grows like g^4: the exponential moment diverges for all t
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

double lp_norm(const DistributionSpec& dist, double k) {
  switch (dist.kind) {
    case DistributionKind::Gaussian:
      return std::pow(gaussian_abs_moment(k), 1.0 / k);
    case DistributionKind::Rademacher:
    case DistributionKind::EdgeRademacher:
      return 1.0;
    case DistributionKind::StandardizedBernoulli: {
      const double p = dist.param;
      if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("bernoulli probability must lie in (0,1)");
      const double a = std::sqrt((1.0 - p) / p);
      const double b = std::sqrt(p / (1.0 - p));
      return std::pow(p * std::pow(a, k) + (1.0 - p) * std::pow(b, k), 1.0 / k);
    }
    case DistributionKind::CenteredChiSq1:
      return std::pow(chisq_abs_moment(k), 1.0 / k);
  }
  return 0.0;
}

double psi2_norm(const DistributionSpec& dist) {
  if (dist.kind == DistributionKind::CenteredChiSq1)
    return std::numeric_limits<double>::infinity();
  double lo = 1e-6, hi = 1.0;
  while (exp_square_moment(dist, hi) > 2.0) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (exp_square_moment(dist, mid) > 2.0) lo = mid;
    else hi = mid;
  }
  return hi;
}

DistributionParams distribution_params(const DistributionSpec& dist, long long d, long long m) {
  if (d < 2 || m < 2) throw std::invalid_argument("distribution_params: d, m must be >= 2");
  if (dist.kind == DistributionKind::StandardizedBernoulli &&
      !(dist.param > 0.0 && dist.param < 1.0))
    throw std::invalid_argument("bernoulli probability must lie in (0,1)");

  DistributionParams out;
  out.variance = dist.variance();
  out.l1 = lp_norm(dist, 1.0);
  out.psi2 = psi2_norm(dist);
  const double k_dm = std::max(2.0, std::floor(std::log(static_cast<double>(d + m))));
  const double k_m = std::max(2.0, std::floor(std::log(static_cast<double>(m))));
  out.alpha = lp_norm(dist, k_dm);
  out.l_log_m = lp_norm(dist, k_m);
  return out;
}

std::string to_string(BoundTheorem theorem) {
  switch (theorem) {
    case BoundTheorem::NckUpper: return "NCK_upper";
    case BoundTheorem::NckLower: return "NCK_lower";
    case BoundTheorem::StrongNck: return "StrongNCK";
    case BoundTheorem::RosenthalUpper: return "Rosenthal_upper";
    case BoundTheorem::RosenthalLower: return "Rosenthal_lower";
    case BoundTheorem::StrongRosenthal: return "StrongRosenthal";
  }
  return "?";
}

double BoundTerm::value(double log_dm) const {
  double v = parameter_value;
  for (int i = 0; i < factor_power; ++i) v *= factor_value;
  v *= std::pow(log_dm, log_exponent.value());
  return sign * v;
}

namespace {

const char* param_name(ParamRef p) {
  switch (p) {
    case ParamRef::Sigma: return "sigma";
    case ParamRef::V: return "v";
    case ParamRef::R: return "r";
  }
  return "?";
}

double param_value(const ChaosParameters& cp, ParamRef p) {
  switch (p) {
    case ParamRef::Sigma: return cp.sigma.numeric;
    case ParamRef::V: return cp.v.numeric;
    case ParamRef::R: return cp.r.numeric;
  }
  return 0.0;
}

BoundTerm make_term(int sign, const char* tag, const char* factor, int power,
                    double factor_value, Rational log_exp, ParamRef param,
                    const ChaosParameters& cp) {
  BoundTerm t;
  t.sign = sign;
  t.constant_tag = tag;
  t.factor_name = factor ? factor : "";
  t.factor_power = power;
  t.factor_value = factor_value;
  t.log_exponent = log_exp;
  t.parameter = param;
  t.parameter_value = param_value(cp, param);
  return t;
}

}  // namespace

BoundProfile bound_profile(BoundTheorem theorem, const DistributionParams& params,
                           const ChaosParameters& cp, int q, long long d, long long m) {
  if (q < 1) throw std::invalid_argument("bound_profile: q must be >= 1");
  BoundProfile profile;
  profile.theorem = theorem;
  profile.q = q;
  profile.d = d;
  profile.m = m;
  auto add = [&](BoundTerm t) { profile.terms.push_back(std::move(t)); };

  switch (theorem) {
    case BoundTheorem::NckUpper:
      add(make_term(1, "C_q", "psi2", q, params.psi2, Rational(q, 2), ParamRef::Sigma, cp));
      break;
    case BoundTheorem::NckLower:
      add(make_term(1, "c_q", "L1", q, params.l1, Rational(0), ParamRef::Sigma, cp));
      break;
    case BoundTheorem::StrongNck:
      add(make_term(1, "C_q", "psi2", q, params.psi2, Rational(0), ParamRef::Sigma, cp));
      add(make_term(1, "C_q", "psi2", q, params.psi2, Rational(q + 2, 2), ParamRef::V, cp));
      break;
    case BoundTheorem::RosenthalUpper:
      add(make_term(1, "C_q", nullptr, 0, 1.0, Rational(q, 2), ParamRef::Sigma, cp));
      add(make_term(1, "C_q", "alpha", q, params.alpha, Rational(q + 1, 2), ParamRef::R, cp));
      break;
    case BoundTheorem::RosenthalLower:
      add(make_term(1, "c_q", nullptr, 0, 1.0, Rational(0), ParamRef::Sigma, cp));
      add(make_term(-1, "C_q", "alpha", q, params.alpha, Rational(q, 2), ParamRef::R, cp));
      break;
    case BoundTheorem::StrongRosenthal:
      add(make_term(1, "C_q", nullptr, 0, 1.0, Rational(0), ParamRef::Sigma, cp));
      add(make_term(1, "C_q", "alpha", q, params.alpha, Rational(q + 3, 2), ParamRef::V, cp));
      break;
  }

  const double log_dm = std::log(static_cast<double>(d + m));
  profile.numeric_value = 0.0;
  for (const auto& t : profile.terms) profile.numeric_value += t.value(log_dm);
  return profile;
}

BoundProfile nck_upper_logm_profile(const DistributionParams& params, const ChaosParameters& cp,
                                    int q, long long d, long long m) {
  BoundProfile profile;
  profile.theorem = BoundTheorem::NckUpper;
  profile.q = q;
  profile.d = d;
  profile.m = m;
  profile.terms.push_back(
      make_term(1, "C_q", "L_logm", q, params.l_log_m, Rational(q, 2), ParamRef::Sigma, cp));
  profile.numeric_value = profile.terms[0].value(std::log(static_cast<double>(d + m)));
  return profile;
}

std::string BoundProfile::str() const {
  std::ostringstream out;
  for (size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    if (i == 0) {
      if (t.sign < 0) out << "-";
    } else {
      out << (t.sign < 0 ? " - " : " + ");
    }
    out << t.constant_tag;
    if (!t.factor_name.empty()) out << "*" << t.factor_name << "^" << t.factor_power;
    if (t.log_exponent != Rational(0)) out << "*log(d+m)^{" << t.log_exponent.str() << "}";
    out << "*" << param_name(t.parameter);
  }
  return out.str();
}

std::string canonical_form(BoundTheorem theorem) {
  switch (theorem) {
    case BoundTheorem::NckUpper:
      return "C_q*psi2^q*log(d+m)^{q/2}*sigma";
    case BoundTheorem::NckLower:
      return "c_q*L1^q*sigma";
    case BoundTheorem::StrongNck:
      return "C_q*psi2^q*sigma + C_q*psi2^q*log(d+m)^{(q+2)/2}*v";
    case BoundTheorem::RosenthalUpper:
      return "C_q*log(d+m)^{q/2}*sigma + C_q*alpha^q*log(d+m)^{(q+1)/2}*r";
    case BoundTheorem::RosenthalLower:
      return "c_q*sigma - C_q*alpha^q*log(d+m)^{q/2}*r";
    case BoundTheorem::StrongRosenthal:
      return "C_q*sigma + C_q*alpha^q*log(d+m)^{(q+3)/2}*v";
  }
  return "?";
}

BestBound best_bound(const ChaosSchema& schema) {
  const ChaosParameters cp = chaos_parameters(schema);
  const long long d = schema.max_matrix_dim();
  const long long m = schema.max_alphabet();
  const DistributionParams params = distribution_params(schema.distribution, std::max<long long>(d, 2),
                                                        std::max<long long>(m, 2));

  BestBound best;
  bool first = true;
  for (BoundTheorem theorem : {BoundTheorem::NckUpper, BoundTheorem::StrongNck,
                               BoundTheorem::RosenthalUpper, BoundTheorem::StrongRosenthal}) {
    BoundProfile profile = bound_profile(theorem, params, cp, schema.q, d, m);
    if (first || profile.numeric_value < best.profile.numeric_value) {
      best.profile = profile;
      first = false;
    }
  }

  // regime notes, evaluated numerically at the schema's sizes
  std::ostringstream note;
  const double log_dm = std::log(static_cast<double>(d + m));
  double alpha_q = 1.0;
  for (int i = 0; i < schema.q; ++i) alpha_q *= params.alpha;
  if (alpha_q * cp.v.numeric < 0.1 * cp.sigma.numeric)
    note << "alpha^q v << sigma holds (" << alpha_q * cp.v.numeric << " vs " << cp.sigma.numeric
         << "); sigma controls the norm without a log factor";
  else if (cp.v.numeric < 0.1 * cp.sigma.numeric)
    note << "v << sigma holds; the strong inequalities remove the log factor asymptotically";
  else if (cp.r.numeric < 0.1 * cp.sigma.numeric)
    note << "r << sigma holds; sigma controls the norm up to one log factor";
  else
    note << "no separation between sigma and v/r at these sizes";
  note << " [constants set to 1, log(d+m) = " << log_dm << "]";
  best.note = note.str();
  return best;
}

Rational partial_nck_log_power(int k, int q) {
  if (k < 0 || k > q) throw std::invalid_argument("partial_nck_log_power: need 0 <= k <= q");
  return Rational(k, 2);
}

}  // namespace chaosbound
