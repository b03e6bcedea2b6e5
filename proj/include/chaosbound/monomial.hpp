#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "chaosbound/rational.hpp"

namespace chaosbound {

/// Product of named dimension sizes raised to integer powers.
///
/// Flattening norms of combinatorial chaoses are monomials in the dimension
/// sizes. Exponents are kept at the squared-norm scale; str(2) renders the
/// square root.
class Monomial {
 public:
  Monomial() = default;

  /// Multiplies in symbol^exponent. Symbols keep first-insertion order.
  void multiply(const std::string& symbol, int exponent) {
    if (exponent == 0) return;
    for (auto& f : factors_) {
      if (f.first == symbol) {
        f.second += exponent;
        if (f.second == 0) {
          factors_.erase(std::find_if(factors_.begin(), factors_.end(),
                                      [&](const auto& g) { return g.first == symbol; }));
        }
        return;
      }
    }
    factors_.emplace_back(symbol, exponent);
  }

  bool is_one() const { return factors_.empty(); }

  int exponent(const std::string& symbol) const {
    for (const auto& f : factors_)
      if (f.first == symbol) return f.second;
    return 0;
  }

  const std::vector<std::pair<std::string, int>>& factors() const { return factors_; }

  /// Evaluates against per-symbol sizes.
  double value(const std::function<double(const std::string&)>& size_of) const {
    double v = 1.0;
    for (const auto& f : factors_) {
      double s = size_of(f.first);
      for (int i = 0; i < f.second; ++i) v *= s;
    }
    return v;
  }

  /// True iff this >= other for every choice of sizes >= 1 (exponent-wise).
  bool dominates(const Monomial& other) const {
    for (const auto& f : other.factors_)
      if (exponent(f.first) < f.second) return false;
    for (const auto& f : factors_)
      if (f.second < other.exponent(f.first)) return false;
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.dominates(b) && b.dominates(a);
  }
  friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

  /// Renders the monomial with every exponent divided by `root`.
  /// Exponent 1 prints bare, integers as d^2, halves as d^{3/2}.
  std::string str(int root = 1) const {
    if (factors_.empty()) return "1";
    std::string out;
    for (const auto& f : factors_) {
      if (!out.empty()) out += " ";
      Rational e(f.second, root);
      if (e == Rational(1)) {
        out += f.first;
      } else if (e.den == 1) {
        out += f.first + "^" + e.str();
      } else {
        out += f.first + "^{" + e.str() + "}";
      }
    }
    return out;
  }

 private:
  std::vector<std::pair<std::string, int>> factors_;
};

/// Maximum of a set of monomials, stored as the antichain of dominant ones.
class MonomialMax {
 public:
  void insert(const Monomial& m) {
    for (const auto& e : elements_)
      if (e.dominates(m)) return;
    elements_.erase(std::remove_if(elements_.begin(), elements_.end(),
                                   [&](const Monomial& e) { return m.dominates(e); }),
                    elements_.end());
    elements_.push_back(m);
  }

  bool contains(const Monomial& m) const {
    return std::any_of(elements_.begin(), elements_.end(),
                       [&](const Monomial& e) { return e == m; });
  }

  const std::vector<Monomial>& elements() const { return elements_; }
  bool empty() const { return elements_.empty(); }

  double value(const std::function<double(const std::string&)>& size_of) const {
    double v = 0.0;
    for (const auto& e : elements_) v = std::max(v, e.value(size_of));
    return v;
  }

  std::string str(int root = 1) const {
    if (elements_.empty()) return "0";
    if (elements_.size() == 1) return elements_[0].str(root);
    std::string out = "max{";
    for (size_t i = 0; i < elements_.size(); ++i) {
      if (i) out += ", ";
      out += elements_[i].str(root);
    }
    return out + "}";
  }

 private:
  std::vector<Monomial> elements_;
};

}  // namespace chaosbound
