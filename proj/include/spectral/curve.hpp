#pragma once

#include <string>

#include "spectral/errors.hpp"
#include "spectral/laurent.hpp"
#include "spectral/series.hpp"

namespace spectral {

enum class CurveKind { airy, harmonic_oscillator };

/// Spectral curve selector. Only c^2 is ever represented: every quantity the
/// engine produces depends on c through c^2.
struct CurveSpec {
  CurveKind kind = CurveKind::harmonic_oscillator;
  Rational c_squared{2};
  int epsilon = -1;

  static CurveSpec airy() { return {CurveKind::airy, Rational(0), 1}; }

  static CurveSpec harmonic_oscillator(Rational c2 = Rational(2), int eps = -1) {
    CurveSpec c{CurveKind::harmonic_oscillator, std::move(c2), eps};
    c.validate();
    return c;
  }

  void validate() const {
    if (kind != CurveKind::harmonic_oscillator) return;
    if (c_squared.is_zero()) throw Error("harmonic oscillator curve needs c^2 != 0");
    if (epsilon != 1 && epsilon != -1) throw Error("epsilon must be +1 or -1");
  }

  [[nodiscard]] bool is_airy() const { return kind == CurveKind::airy; }

  /// Name of the local coordinate used in output.
  [[nodiscard]] const char* variable_name() const { return is_airy() ? "y" : "z"; }

  [[nodiscard]] std::string name() const { return is_airy() ? "airy" : "ho"; }

  friend bool operator==(const CurveSpec& a, const CurveSpec& b) {
    if (a.kind != b.kind) return false;
    if (a.is_airy()) return true;
    return a.c_squared == b.c_squared && a.epsilon == b.epsilon;
  }
};

/// The HO uniformization x = -c(z^2+1)/(z^2-1), y = eps 2cz/(z^2-1),
/// dx = 4cz/(z^2-1)^2 dz. Each field carries exactly one factor of c, which
/// is stripped: x = c * x_over_c and so on.
struct CoordinateMap {
  RationalExpression x_over_c;
  RationalExpression y_over_c;
  RationalExpression dx_over_c;
};

namespace detail {

inline LaurentPolynomial z2_minus_1() { return LaurentPolynomial::univariate({{2, 1}, {0, -1}}); }
inline LaurentPolynomial z2_plus_1() { return LaurentPolynomial::univariate({{2, 1}, {0, 1}}); }

}  // namespace detail

inline CoordinateMap coordinate_map(const CurveSpec& curve) {
  if (curve.is_airy()) throw Error("coordinate_map: Airy curve uses x = y^2 directly");
  using detail::z2_minus_1;
  using detail::z2_plus_1;
  return {
      RationalExpression(-z2_plus_1(), z2_minus_1()),
      RationalExpression(LaurentPolynomial::univariate({{1, 2 * curve.epsilon}}), z2_minus_1()),
      RationalExpression(LaurentPolynomial::univariate({{1, 4}}), lp_pow(z2_minus_1(), 2)),
  };
}

/// w_{0,1} = y dx as the coefficient of dz (HO) or dy (Airy).
inline RationalExpression initial_w01(const CurveSpec& curve) {
  if (curve.is_airy()) return RationalExpression(LaurentPolynomial::univariate({{2, 2}}));
  const Rational lead = Rational(8 * curve.epsilon) * curve.c_squared;
  return {LaurentPolynomial::univariate({{2, lead}}), lp_pow(detail::z2_minus_1(), 3)};
}

/// Bergman kernel 1/(z1 - z2)^2, coefficient of dz1 dz2.
inline RationalExpression initial_w02() {
  LaurentPolynomial diff = LaurentPolynomial::variable(2, 0) - LaurentPolynomial::variable(2, 1);
  return {LaurentPolynomial::constant(2, Rational(1)), diff * diff};
}

/// Recursion kernel K(z, z1) in variables (z, z1), coefficient of dz1/dz.
inline RationalExpression kernel(const CurveSpec& curve) {
  const auto z = LaurentPolynomial::variable(2, 0);
  const auto z2 = LaurentPolynomial::variable(2, 0, 2);
  const auto z1sq = LaurentPolynomial::variable(2, 1, 2);
  const auto one = LaurentPolynomial::constant(2, Rational(1));
  if (curve.is_airy()) {
    return {one * Rational(1, 4), (z2 - z1sq) * z};
  }
  const Rational pre = Rational(curve.epsilon) / (Rational(16) * curve.c_squared);
  return {lp_pow(one - z2, 3) * pre, (z1sq - z2) * z};
}

/// The kernel assembled from its definition
///   K = (1/2) int_{z}^{-z} w02(., z1) / ((y(z) - y(-z)) dx(z)),
/// using only w02, the involution z -> -z and the coordinate map. Used as an
/// independent check of kernel().
inline RationalExpression kernel_from_initial_data(const CurveSpec& curve) {
  // int_{z}^{-z} d xi/(xi - z1)^2 = 2z/(z^2 - z1^2) in variables (z, z1).
  const auto z = LaurentPolynomial::variable(2, 0);
  const RationalExpression half_integral(z, LaurentPolynomial::variable(2, 0, 2) - LaurentPolynomial::variable(2, 1, 2));
  if (curve.is_airy()) {
    // y(q) - y(q*) = 2y and dx = 2y dy.
    const auto four_y2 = LaurentPolynomial::variable(2, 0, 2) * Rational(4);
    return half_integral * RationalExpression(LaurentPolynomial::constant(2, Rational(1)), four_y2);
  }
  const CoordinateMap m = coordinate_map(curve);
  // (y(z) - y(-z)) dx = 2 y dx = 2 c^2 (y/c)(dx/c); lift both factors to two variables.
  const RationalExpression ydx = m.y_over_c * m.dx_over_c;
  const std::size_t slot0[] = {0};
  RationalExpression lifted(lp_remap(ydx.numerator, 2, slot0), lp_remap(ydx.denominator, 2, slot0));
  lifted = lifted * (Rational(2) * curve.c_squared);
  return {half_integral.numerator * lifted.denominator, half_integral.denominator * lifted.numerator};
}

/// Rewrites a rational function of x in the HO local parameter z. Inputs must
/// have numerator and denominator each homogeneous in the parity of x with
/// matching parity, so that only c^2 appears; otherwise OddPowerOfCError.
inline RationalExpression to_z_coordinates(const RationalExpression& f_of_x, const CurveSpec& curve) {
  if (curve.is_airy()) throw Error("to_z_coordinates applies to the harmonic oscillator curve");
  if (f_of_x.arity() != 1) throw ArityError("to_z_coordinates expects a function of x alone");
  if (f_of_x.numerator.is_zero())
    return RationalExpression(LaurentPolynomial(1));

  auto parity = [](const LaurentPolynomial& p) {
    int par = -1;
    for (const auto& [e, c] : p.terms()) {
      const int q = ((e[0] % 2) + 2) % 2;
      if (par == -1) par = q;
      if (par != q) throw OddPowerOfCError("mixed parity in x: the image would contain odd powers of c");
    }
    return par;
  };
  LaurentPolynomial num = f_of_x.numerator;
  LaurentPolynomial den = f_of_x.denominator;
  const int pn = parity(num);
  const int pd = parity(den);
  if (pn != pd) throw OddPowerOfCError("numerator and denominator differ in parity: odd power of c");
  if (pn == 1) {
    num = lp_shift(num, 0, -1);
    den = lp_shift(den, 0, -1);
  }
  // x^2 = c^2 P / Q with P = (z^2+1)^2, Q = (z^2-1)^2.
  int kmin = 0;
  int kmax = 0;
  bool first = true;
  for (const auto* p : {&num, &den}) {
    for (const auto& [e, c] : p->terms()) {
      const int k = e[0] / 2;
      if (first || k < kmin) kmin = k;
      if (first || k > kmax) kmax = k;
      first = false;
    }
  }
  const LaurentPolynomial P = lp_pow(detail::z2_plus_1(), 2);
  const LaurentPolynomial Q = lp_pow(detail::z2_minus_1(), 2);
  auto image = [&](const LaurentPolynomial& p) {
    LaurentPolynomial out(1);
    for (const auto& [e, c] : p.terms()) {
      const int k = e[0] / 2;
      out += lp_pow(P, static_cast<unsigned>(k - kmin)) * lp_pow(Q, static_cast<unsigned>(kmax - k)) *
             (c * curve.c_squared.pow(k));
    }
    return out;
  };
  return {image(num), image(den)};
}

}  // namespace spectral
