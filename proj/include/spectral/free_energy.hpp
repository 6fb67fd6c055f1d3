#pragma once

#include <utility>

#include "spectral/recursion.hpp"

namespace spectral {

struct FreeEnergy {
  int g = 0;
  int n = 0;
  CurveSpec curve;
  LaurentPolynomial poly;

  void validate() const {
    const std::string tag = "F(" + std::to_string(g) + "," + std::to_string(n) + "): ";
    for (const auto& [e, c] : poly.terms())
      for (int k : e)
        if (k % 2 == 0) throw InvariantViolation(tag + "even exponent present");
    if (!is_symmetric(poly)) throw InvariantViolation(tag + "permutation symmetry");
  }
};

/// Antiderivative in every variable with zero constants: z^(2a) -> z^(2a+1)/(2a+1).
inline FreeEnergy integrate_symmetric(const MultiDifferential& w) {
  require_stable(w.g, w.n);
  LaurentPolynomial p = w.poly;
  for (std::size_t i = 0; i < p.arity(); ++i) p = lp_antideriv(p, i);
  FreeEnergy f{w.g, w.n, w.curve, std::move(p)};
  f.validate();
  return f;
}

/// S_m = sum over 2g + n - 2 = m - 1 of F_{g,n}(z, ..., z) / n!.
inline LaurentPolynomial s_coefficient(RecursionEngine& engine, int m) {
  if (m < 2) throw StabilityError("S_m from free energies needs m >= 2");
  LaurentPolynomial s(1);
  for (auto [g, n] : level_pairs(m - 1)) {
    const FreeEnergy f = integrate_symmetric(*engine.compute(g, n));
    s += lp_specialize(f.poly) * factorial(n).inverse();
  }
  return s;
}

inline LaurentPolynomial s_coefficient(const CurveSpec& curve, int m, std::shared_ptr<MemoStore> store = nullptr) {
  RecursionEngine engine(curve, std::move(store));
  return s_coefficient(engine, m);
}

/// Rational functions of the curve coordinates, arity 2 with slots (x, y).
struct CurveFunctions {
  RationalExpression s0_prime;
  RationalExpression s1_prime;
};

/// S0' and S1' (derivatives in x). The logarithms in S0, S1 themselves are
/// not represented.
inline CurveFunctions s01_prime(const CurveSpec& curve) {
  const auto x = LaurentPolynomial::variable(2, 0);
  const auto y = LaurentPolynomial::variable(2, 1);
  const auto one = LaurentPolynomial::constant(2, Rational(1));
  if (curve.is_airy()) return {RationalExpression(-y), RationalExpression(-one, x * Rational(4))};
  const auto y2 = x * x - one * curve.c_squared;
  return {RationalExpression(-y), RationalExpression(-x, y2 * Rational(2))};
}

/// Replaces y^2 by x^2 - c^2 (HO) or x (Airy) in a polynomial in (x, y).
/// Only nonnegative powers of y are accepted.
inline LaurentPolynomial reduce_on_curve(const LaurentPolynomial& p, const CurveSpec& curve) {
  if (p.arity() != 2) throw ArityError("reduce_on_curve expects slots (x, y)");
  const auto x = LaurentPolynomial::variable(2, 0);
  const LaurentPolynomial y2 =
      curve.is_airy() ? x : x * x - LaurentPolynomial::constant(2, curve.c_squared);
  LaurentPolynomial out(2);
  for (const auto& [e, c] : p.terms()) {
    if (e[1] < 0) throw Error("reduce_on_curve: negative power of y");
    Exponents base{e[0], e[1] % 2};
    out += LaurentPolynomial::monomial(std::move(base), c) * lp_pow(y2, static_cast<unsigned>(e[1] / 2));
  }
  return out;
}

inline RationalExpression reduce_on_curve(const RationalExpression& r, const CurveSpec& curve) {
  return {reduce_on_curve(r.numerator, curve), reduce_on_curve(r.denominator, curve)};
}

}  // namespace spectral
