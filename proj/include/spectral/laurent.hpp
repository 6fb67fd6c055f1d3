#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spectral/errors.hpp"
#include "spectral/rational.hpp"

namespace spectral {

using Exponents = std::vector<int>;

inline int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

/// Canonical term order: higher total degree first, ties broken by
/// lexicographically larger exponent vector first.
struct GradedLexOrder {
  bool operator()(const Exponents& a, const Exponents& b) const {
    const int da = total_degree(a);
    const int db = total_degree(b);
    if (da != db) return da > db;
    return a > b;
  }
};

/// Sparse multivariate Laurent polynomial over the rationals.
///
/// Terms are kept in a map keyed by exponent vector under GradedLexOrder, so
/// iteration order is canonical and no zero coefficient is ever stored.
class LaurentPolynomial {
 public:
  using TermMap = std::map<Exponents, Rational, GradedLexOrder>;

  explicit LaurentPolynomial(std::size_t arity = 0) : arity_(arity) {}

  static LaurentPolynomial constant(std::size_t arity, const Rational& c) {
    LaurentPolynomial p(arity);
    p.add_term(Exponents(arity, 0), c);
    return p;
  }

  static LaurentPolynomial monomial(Exponents e, const Rational& c = Rational(1)) {
    LaurentPolynomial p(e.size());
    p.add_term(std::move(e), c);
    return p;
  }

  /// x_i^power in `arity` variables.
  static LaurentPolynomial variable(std::size_t arity, std::size_t i, int power = 1) {
    if (i >= arity) throw ArityError("variable index out of range");
    Exponents e(arity, 0);
    e[i] = power;
    return monomial(std::move(e));
  }

  /// Builds a univariate polynomial from (exponent, coefficient) pairs.
  static LaurentPolynomial univariate(std::initializer_list<std::pair<int, Rational>> terms) {
    LaurentPolynomial p(1);
    for (const auto& [e, c] : terms) p.add_term({e}, c);
    return p;
  }

  [[nodiscard]] std::size_t arity() const { return arity_; }
  [[nodiscard]] const TermMap& terms() const { return terms_; }
  [[nodiscard]] std::size_t size() const { return terms_.size(); }
  [[nodiscard]] bool is_zero() const { return terms_.empty(); }

  [[nodiscard]] Rational coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(Exponents e, const Rational& c) {
    if (e.size() != arity_) throw ArityError("exponent vector length does not match arity");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
    check_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  LaurentPolynomial& operator-=(const LaurentPolynomial& o) {
    check_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }

  LaurentPolynomial& operator*=(const Rational& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) { return a += b; }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) { return a -= b; }
  friend LaurentPolynomial operator*(LaurentPolynomial a, const Rational& s) { return a *= s; }
  friend LaurentPolynomial operator*(const Rational& s, LaurentPolynomial a) { return a *= s; }
  friend LaurentPolynomial operator-(LaurentPolynomial a) { return a *= Rational(-1); }

  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    a.check_arity(b);
    LaurentPolynomial r(a.arity_);
    Exponents e(a.arity_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }
  LaurentPolynomial& operator*=(const LaurentPolynomial& o) { return *this = *this * o; }

  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

  [[nodiscard]] int min_exponent(std::size_t var) const {
    check_var(var);
    int m = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (first || e[var] < m) m = e[var];
      first = false;
    }
    return m;
  }

  [[nodiscard]] int max_exponent(std::size_t var) const {
    check_var(var);
    int m = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (first || e[var] > m) m = e[var];
      first = false;
    }
    return m;
  }

  /// Groups terms by the exponent of `var`; each coefficient keeps full arity
  /// with that slot zeroed.
  [[nodiscard]] std::map<int, LaurentPolynomial> split_by(std::size_t var) const {
    check_var(var);
    std::map<int, LaurentPolynomial> out;
    for (const auto& [e, c] : terms_) {
      Exponents f = e;
      f[var] = 0;
      auto [it, _] = out.try_emplace(e[var], LaurentPolynomial(arity_));
      it->second.add_term(std::move(f), c);
    }
    return out;
  }

  [[nodiscard]] Rational evaluate(std::span<const Rational> point) const {
    if (point.size() != arity_) throw ArityError("evaluation point has wrong length");
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (std::size_t i = 0; i < arity_; ++i)
        if (e[i] != 0) t *= point[i].pow(e[i]);
      sum += t;
    }
    return sum;
  }

  /// Only valid when the polynomial is a single term; used for exact
  /// inversion of leading coefficients.
  [[nodiscard]] bool is_monomial() const { return terms_.size() == 1; }

  [[nodiscard]] LaurentPolynomial monomial_inverse() const {
    if (!is_monomial()) throw NonExpandableError("coefficient is not a single term");
    const auto& [e, c] = *terms_.begin();
    Exponents f(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) f[i] = -e[i];
    return monomial(std::move(f), c.inverse());
  }

  void check_arity(const LaurentPolynomial& o) const {
    if (o.arity_ != arity_)
      throw ArityError("arity mismatch: " + std::to_string(arity_) + " vs " + std::to_string(o.arity_));
  }

  void check_var(std::size_t var) const {
    if (var >= arity_) throw ArityError("variable index " + std::to_string(var) + " out of range");
  }

 private:
  std::size_t arity_;
  TermMap terms_;
};

enum class ArithOp { add, sub, mul };

inline LaurentPolynomial lp_arith(const LaurentPolynomial& p, const LaurentPolynomial& q, ArithOp op) {
  switch (op) {
    case ArithOp::add: return p + q;
    case ArithOp::sub: return p - q;
    case ArithOp::mul: return p * q;
  }
  return p;
}

inline LaurentPolynomial lp_scale(const LaurentPolynomial& p, const Rational& s) { return p * s; }

inline LaurentPolynomial lp_diff(const LaurentPolynomial& p, std::size_t var) {
  p.check_var(var);
  LaurentPolynomial r(p.arity());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == 0) continue;
    Exponents f = e;
    f[var] -= 1;
    r.add_term(std::move(f), c * Rational(e[var]));
  }
  return r;
}

/// Term-wise z^k -> z^(k+1)/(k+1) with zero constant of integration.
inline LaurentPolynomial lp_antideriv(const LaurentPolynomial& p, std::size_t var) {
  p.check_var(var);
  LaurentPolynomial r(p.arity());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == -1)
      throw LogTermError("antiderivative of a term with exponent -1 in variable " + std::to_string(var));
    Exponents f = e;
    f[var] += 1;
    r.add_term(std::move(f), c / Rational(e[var] + 1));
  }
  return r;
}

/// Definite integral from `lower` to the variable itself:
/// z^k -> (z^(k+1) - lower^(k+1))/(k+1).
inline LaurentPolynomial lp_integrate_from(const LaurentPolynomial& p, std::size_t var, const Rational& lower) {
  p.check_var(var);
  LaurentPolynomial r(p.arity());
  for (const auto& [e, c] : p.terms()) {
    if (e[var] == -1)
      throw LogTermError("integral of a term with exponent -1 in variable " + std::to_string(var));
    const Rational scale = c / Rational(e[var] + 1);
    Exponents f = e;
    f[var] += 1;
    r.add_term(f, scale);
    f[var] = 0;
    r.add_term(std::move(f), -scale * lower.pow(e[var] + 1));
  }
  return r;
}

/// Multiplies by var^shift.
inline LaurentPolynomial lp_shift(const LaurentPolynomial& p, std::size_t var, int shift) {
  p.check_var(var);
  LaurentPolynomial r(p.arity());
  for (const auto& [e, c] : p.terms()) {
    Exponents f = e;
    f[var] += shift;
    r.add_term(std::move(f), c);
  }
  return r;
}

/// Substitutes var -> 1/var.
inline LaurentPolynomial lp_invert_variable(const LaurentPolynomial& p, std::size_t var) {
  p.check_var(var);
  LaurentPolynomial r(p.arity());
  for (const auto& [e, c] : p.terms()) {
    Exponents f = e;
    f[var] = -f[var];
    r.add_term(std::move(f), c);
  }
  return r;
}

/// Substitutes var -> -var.
inline LaurentPolynomial lp_negate_variable(const LaurentPolynomial& p, std::size_t var) {
  p.check_var(var);
  LaurentPolynomial r(p.arity());
  for (const auto& [e, c] : p.terms()) r.add_term(e, (e[var] % 2 != 0) ? -c : c);
  return r;
}

/// Relabels variables: variable i of `p` becomes variable `target[i]` of a
/// polynomial with `new_arity` variables. Several sources may share a target
/// (their exponents add), which is how diagonal restrictions are formed.
inline LaurentPolynomial lp_remap(const LaurentPolynomial& p, std::size_t new_arity,
                                  std::span<const std::size_t> target) {
  if (target.size() != p.arity()) throw ArityError("remap table has wrong length");
  for (auto t : target)
    if (t >= new_arity) throw ArityError("remap target out of range");
  LaurentPolynomial r(new_arity);
  Exponents f(new_arity);
  for (const auto& [e, c] : p.terms()) {
    std::fill(f.begin(), f.end(), 0);
    for (std::size_t i = 0; i < e.size(); ++i) f[target[i]] += e[i];
    r.add_term(f, c);
  }
  return r;
}

inline LaurentPolynomial lp_remap(const LaurentPolynomial& p, std::size_t new_arity,
                                  std::initializer_list<std::size_t> target) {
  return lp_remap(p, new_arity, std::span<const std::size_t>(target.begin(), target.size()));
}

/// Principal specialization: every variable set equal to one variable z.
inline LaurentPolynomial lp_specialize(const LaurentPolynomial& p) {
  std::vector<std::size_t> target(p.arity(), 0);
  return lp_remap(p, 1, target);
}

inline LaurentPolynomial lp_pow(const LaurentPolynomial& p, unsigned n) {
  LaurentPolynomial r = LaurentPolynomial::constant(p.arity(), Rational(1));
  for (unsigned i = 0; i < n; ++i) r = r * p;
  return r;
}

/// Exact division of p by d, where d is a polynomial in `var` whose leading
/// coefficient (in `var`) is a single term. Throws RemainderError when the
/// division leaves a remainder.
inline LaurentPolynomial lp_exact_div(const LaurentPolynomial& p, const LaurentPolynomial& d, std::size_t var) {
  p.check_arity(d);
  p.check_var(var);
  if (d.is_zero()) throw Error("division by the zero polynomial");
  if (p.is_zero()) return LaurentPolynomial(p.arity());

  // Strip the lowest power of var from the divisor; what remains has a
  // nonzero constant term in var.
  const int d_low = d.min_exponent(var);
  const LaurentPolynomial divisor = lp_shift(d, var, -d_low);
  const auto d_parts = divisor.split_by(var);
  const int d_deg = d_parts.rbegin()->first;
  const LaurentPolynomial lead_inv = d_parts.rbegin()->second.monomial_inverse();

  const int p_low = p.min_exponent(var);
  auto rem = lp_shift(p, var, -p_low).split_by(var);
  LaurentPolynomial quotient(p.arity());
  while (!rem.empty() && rem.rbegin()->first >= d_deg) {
    const int top = rem.rbegin()->first;
    LaurentPolynomial q_coef = rem.rbegin()->second * lead_inv;
    const int shift = top - d_deg;
    for (const auto& [k, coef] : d_parts) {
      auto [it, _] = rem.try_emplace(k + shift, LaurentPolynomial(p.arity()));
      it->second -= q_coef * coef;
      if (it->second.is_zero()) rem.erase(it);
    }
    quotient += lp_shift(q_coef, var, shift);
  }
  if (!rem.empty()) throw RemainderError("polynomial division is not exact");
  return lp_shift(quotient, var, p_low - d_low);
}

}  // namespace spectral
