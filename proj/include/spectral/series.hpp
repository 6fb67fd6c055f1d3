#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "spectral/errors.hpp"
#include "spectral/laurent.hpp"

namespace spectral {

/// A quotient of Laurent polynomials. Never reduced to lowest terms; every
/// operation on it must be correct for any representative.
struct RationalExpression {
  LaurentPolynomial numerator;
  LaurentPolynomial denominator;

  RationalExpression(LaurentPolynomial num, LaurentPolynomial den)
      : numerator(std::move(num)), denominator(std::move(den)) {
    numerator.check_arity(denominator);
    if (denominator.is_zero()) throw Error("rational expression with zero denominator");
  }

  explicit RationalExpression(LaurentPolynomial p)
      : numerator(std::move(p)), denominator(LaurentPolynomial::constant(numerator.arity(), Rational(1))) {}

  [[nodiscard]] std::size_t arity() const { return numerator.arity(); }

  [[nodiscard]] Rational evaluate(std::span<const Rational> point) const {
    const Rational d = denominator.evaluate(point);
    if (d.is_zero()) throw Error("rational expression evaluated at a pole");
    return numerator.evaluate(point) / d;
  }

  friend RationalExpression operator*(const RationalExpression& a, const RationalExpression& b) {
    return {a.numerator * b.numerator, a.denominator * b.denominator};
  }
  friend RationalExpression operator+(const RationalExpression& a, const RationalExpression& b) {
    return {a.numerator * b.denominator + b.numerator * a.denominator, a.denominator * b.denominator};
  }
  friend RationalExpression operator-(const RationalExpression& a, const RationalExpression& b) {
    return {a.numerator * b.denominator - b.numerator * a.denominator, a.denominator * b.denominator};
  }
  friend RationalExpression operator*(const RationalExpression& a, const Rational& s) {
    return {a.numerator * s, a.denominator};
  }

  /// Cross-multiplied equality; needs no normal form.
  [[nodiscard]] bool equivalent(const RationalExpression& o) const {
    return numerator * o.denominator == o.numerator * denominator;
  }

  /// Returns the quotient when the expression is a Laurent polynomial in
  /// `var` (exact division), otherwise throws RemainderError.
  [[nodiscard]] LaurentPolynomial as_polynomial(std::size_t var = 0) const {
    return lp_exact_div(numerator, denominator, var);
  }
};

enum class ExpansionPoint { zero, infinity };

/// Leading part of a Laurent expansion in one variable: coefficient[i] is the
/// coefficient of t^(leading + i), t the local parameter. Coefficients keep
/// the full arity with the expansion slot at exponent zero.
struct LocalSeries {
  int leading = 0;
  std::vector<LaurentPolynomial> coefficients;

  [[nodiscard]] LaurentPolynomial coefficient(int exponent, std::size_t arity) const {
    const int idx = exponent - leading;
    if (idx < 0 || idx >= static_cast<int>(coefficients.size())) return LaurentPolynomial(arity);
    return coefficients[static_cast<std::size_t>(idx)];
  }
};

/// Expands e in the local parameter of `point` (var itself at zero, 1/var at
/// infinity) through exponent `max_exponent`. The number of computed orders
/// is fixed by the pole order of e at the point and the requested exponent.
inline LocalSeries expand(const RationalExpression& e, std::size_t var, ExpansionPoint point, int max_exponent) {
  LaurentPolynomial num = e.numerator;
  LaurentPolynomial den = e.denominator;
  num.check_var(var);
  if (point == ExpansionPoint::infinity) {
    num = lp_invert_variable(num, var);
    den = lp_invert_variable(den, var);
  }
  LocalSeries out;
  const auto den_parts = den.split_by(var);
  const int d_low = den_parts.begin()->first;
  const LaurentPolynomial& d_lead = den_parts.begin()->second;
  if (!d_lead.is_monomial())
    throw NonExpandableError("leading denominator coefficient is not invertible: " + std::to_string(d_lead.size()) +
                             " terms");
  const LaurentPolynomial d_lead_inv = d_lead.monomial_inverse();
  if (num.is_zero()) {
    out.leading = max_exponent + 1;
    return out;
  }
  const auto num_parts = num.split_by(var);
  const int n_low = num_parts.begin()->first;
  out.leading = n_low - d_low;
  const int count = max_exponent - out.leading + 1;
  if (count <= 0) return out;
  out.coefficients.reserve(static_cast<std::size_t>(count));
  const std::size_t arity = num.arity();
  for (int j = 0; j < count; ++j) {
    LaurentPolynomial acc(arity);
    if (auto it = num_parts.find(n_low + j); it != num_parts.end()) acc = it->second;
    for (int i = 1; i <= j; ++i) {
      auto it = den_parts.find(d_low + i);
      if (it == den_parts.end()) continue;
      acc -= it->second * out.coefficients[static_cast<std::size_t>(j - i)];
    }
    out.coefficients.push_back(acc * d_lead_inv);
  }
  return out;
}

/// Coefficient of t^target_exponent in the Laurent expansion of e at the
/// point, t = var at zero and t = 1/var at infinity.
inline LaurentPolynomial series_coefficient(const RationalExpression& e, std::size_t var, ExpansionPoint point,
                                            int target_exponent) {
  return expand(e, var, point, target_exponent).coefficient(target_exponent, e.arity());
}

/// Res_{var=0} of e * d(var).
inline LaurentPolynomial residue_at_zero(const RationalExpression& e, std::size_t var) {
  return series_coefficient(e, var, ExpansionPoint::zero, -1);
}

/// Res_{var=infinity} of e * d(var) = -(coefficient of u^1 of e(1/u)).
inline LaurentPolynomial residue_at_infinity(const RationalExpression& e, std::size_t var) {
  return -series_coefficient(e, var, ExpansionPoint::infinity, 1);
}

/// Binomial series of sqrt(e) in the local parameter at the point, truncated
/// after t^order. The expansion of e must start with the constant 1.
inline LaurentPolynomial sqrt_series(const RationalExpression& e, std::size_t var, ExpansionPoint point, int order) {
  const std::size_t arity = e.arity();
  const LocalSeries s = expand(e, var, point, order);
  if (s.leading < 0) throw ShapeError("sqrt_series: expansion has a pole");
  if (s.coefficient(0, arity) != LaurentPolynomial::constant(arity, Rational(1)))
    throw ShapeError("sqrt_series: constant term is not 1");

  // w = e - 1 as a truncated series in t (slot `var` carries t).
  LaurentPolynomial w(arity);
  for (int k = 1; k <= order; ++k) w += lp_shift(s.coefficient(k, arity), var, k);

  auto truncate = [&](const LaurentPolynomial& p) {
    LaurentPolynomial r(arity);
    for (const auto& [ex, c] : p.terms())
      if (ex[var] <= order) r.add_term(ex, c);
    return r;
  };

  LaurentPolynomial result = LaurentPolynomial::constant(arity, Rational(1));
  LaurentPolynomial power = LaurentPolynomial::constant(arity, Rational(1));
  Rational binom(1);  // binomial(1/2, k)
  for (int k = 1; k <= order; ++k) {
    binom *= (Rational(1, 2) - Rational(k - 1)) / Rational(k);
    power = truncate(power * w);
    if (power.is_zero()) break;
    result += power * binom;
  }
  return result;
}

}  // namespace spectral
