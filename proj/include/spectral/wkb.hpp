#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spectral/free_energy.hpp"

namespace spectral {

/// S_2, S_3, ... in the local coordinate of the curve, with S0', S1' as
/// functions of (x, y). derivatives[i] is dS/dz exactly as produced by the
/// differential recursion, before antidifferentiation.
struct WkbSeries {
  CurveSpec curve;
  std::vector<LaurentPolynomial> coefficients;  // coefficients[0] = S_2
  std::vector<LaurentPolynomial> derivatives;
  CurveFunctions s01;

  [[nodiscard]] int max_m() const { return static_cast<int>(coefficients.size()) + 1; }

  [[nodiscard]] const LaurentPolynomial& s(int m) const {
    if (m < 2 || m > max_m()) throw Error("S_" + std::to_string(m) + " not in the series");
    return coefficients[static_cast<std::size_t>(m - 2)];
  }
};

namespace detail {

inline LaurentPolynomial z2_minus_1_cubed() { return lp_pow(z2_minus_1(), 3); }

/// A f = (z^2 - 1)^3 z^-2 f'.
inline LaurentPolynomial apply_A(const LaurentPolynomial& f) {
  return lp_shift(z2_minus_1_cubed() * lp_diff(f, 0), 0, -2);
}

}  // namespace detail

/// Right-hand side of the differential recursion for dS_m/dz, given
/// S_2 .. S_{m-1} in `lower` (lower[0] = S_2).
///   HO:   eps [ z^2/(16c^2 (z^2-1)^3) A^2 S_{m-1} + (z^2-1)^3/(16c^2 z^2) sum S_i' S_j' ]
///   Airy: S''_{m-1}/(4y^2) - S'_{m-1}/(2y^3) + (1/(4y^2)) sum S_i' S_j'
/// with i + j = m and i, j >= 2.
inline LaurentPolynomial wkb_rhs(const CurveSpec& curve, const std::vector<LaurentPolynomial>& lower, int m) {
  if (m < 3 || static_cast<int>(lower.size()) < m - 2) throw Error("wkb_rhs needs S_2 .. S_{m-1}");
  auto S = [&](int i) -> const LaurentPolynomial& { return lower[static_cast<std::size_t>(i - 2)]; };
  LaurentPolynomial quad(1);
  for (int i = 2; i <= m - 2; ++i) quad += lp_diff(S(i), 0) * lp_diff(S(m - i), 0);

  if (curve.is_airy()) {
    const auto& prev = S(m - 1);
    return (lp_shift(lp_diff(lp_diff(prev, 0), 0), 0, -2) + lp_shift(quad, 0, -2)) * Rational(1, 4) -
           lp_shift(lp_diff(prev, 0), 0, -3) * Rational(1, 2);
  }
  const LaurentPolynomial a2 = detail::apply_A(detail::apply_A(S(m - 1)));
  const LaurentPolynomial linear = lp_shift(lp_exact_div(a2, detail::z2_minus_1_cubed(), 0), 0, 2);
  const LaurentPolynomial nonlinear = lp_shift(detail::z2_minus_1_cubed() * quad, 0, -2);
  return (linear + nonlinear) * (Rational(curve.epsilon) / (Rational(16) * curve.c_squared));
}

/// The series holding S_2 only.
inline WkbSeries wkb_initial(const CurveSpec& curve) {
  WkbSeries w{curve, {}, {}, s01_prime(curve)};
  if (curve.is_airy()) {
    w.coefficients.push_back(LaurentPolynomial::univariate({{-3, Rational(-5, 48)}}));
  } else {
    const Rational d = Rational(192 * curve.epsilon) * curve.c_squared;
    w.coefficients.push_back(
        LaurentPolynomial::univariate({{-3, Rational(5) / d}, {-1, Rational(-9) / d}, {1, Rational(-9) / d}, {3, Rational(5) / d}}));
  }
  w.derivatives.push_back(lp_diff(w.coefficients.back(), 0));
  return w;
}

/// Extends the series through S_target. On the HO curve even S_m carry no
/// constant (they are odd in z); odd S_m are normalized to vanish at z = 1,
/// i.e. at x = infinity. Airy S_m are pure monomials.
inline WkbSeries wkb_extend(WkbSeries series, int target_m) {
  if (target_m < 3) throw Error("wkb_extend targets m >= 3");
  for (int m = series.max_m() + 1; m <= target_m; ++m) {
    const LaurentPolynomial rhs = wkb_rhs(series.curve, series.coefficients, m);
    if (!rhs.coefficient({-1}).is_zero())
      throw LogTermError("dS_" + std::to_string(m) + "/dz has a residue");
    LaurentPolynomial s = lp_antideriv(rhs, 0);
    if (!series.curve.is_airy() && m % 2 == 1) {
      const Rational at_one = s.evaluate(std::vector<Rational>{Rational(1)});
      s -= LaurentPolynomial::constant(1, at_one);
    }
    series.derivatives.push_back(rhs);
    series.coefficients.push_back(std::move(s));
  }
  return series;
}

struct AssemblyComparison {
  int m = 0;
  bool exact = false;
  Rational constant;  // S_m(wkb) - S_m(free energies)
  LaurentPolynomial wkb;
  LaurentPolynomial assembly;
};

/// Compares the recursion's S_m with the free-energy assembly. Throws
/// MismatchError when they differ by more than a constant.
inline AssemblyComparison compare_with_assembly(RecursionEngine& engine, const WkbSeries& series, int m) {
  AssemblyComparison r;
  r.m = m;
  r.wkb = series.s(m);
  r.assembly = s_coefficient(engine, m);
  const LaurentPolynomial diff = r.wkb - r.assembly;
  for (const auto& [e, c] : diff.terms())
    if (e[0] != 0) throw MismatchError("S_" + std::to_string(m) + ": recursion and assembly differ by a non-constant");
  r.constant = diff.coefficient({0});
  r.exact = diff.is_zero();
  return r;
}

inline AssemblyComparison compare_with_assembly(RecursionEngine& engine, int m) {
  const WkbSeries series = m > 2 ? wkb_extend(wkb_initial(engine.curve()), m) : wkb_initial(engine.curve());
  return compare_with_assembly(engine, series, m);
}

/// (Res y dx, Res x dx / y^2) at the point at infinity where y ~ x.
inline std::pair<Rational, Rational> energy_residues(const CurveSpec& curve) {
  if (curve.is_airy()) throw Error("energy residues are defined for the harmonic oscillator curve");
  const auto x2 = LaurentPolynomial::univariate({{2, 1}});
  const auto c2 = LaurentPolynomial::constant(1, curve.c_squared);
  // y = x sqrt(1 - c^2 u^2), u = 1/x; y dx = -u^-3 sqrt(...) du.
  const LaurentPolynomial root = sqrt_series(RationalExpression(x2 - c2, x2), 0, ExpansionPoint::infinity, 2);
  const Rational first = -root.coefficient({2});
  const RationalExpression x_over_y2(LaurentPolynomial::univariate({{1, 1}}), x2 - c2);
  const Rational second = residue_at_infinity(x_over_y2, 0).coefficient({0});
  return {first, second};
}

/// Contribution of S1' to the contour integral around infinity: minus the
/// residue of S1' dx there.
inline Rational s1_contour_contribution(const CurveSpec& curve) {
  const RationalExpression& s1 = s01_prime(curve).s1_prime;
  // S1' depends on x alone: drop the y slot.
  const RationalExpression in_x(lp_remap(s1.numerator, 1, {0, 0}), lp_remap(s1.denominator, 1, {0, 0}));
  for (const auto* p : {&s1.numerator, &s1.denominator})
    for (const auto& [e, c] : p->terms())
      if (e[1] != 0) throw Error("S1' is expected to be a function of x");
  return -residue_at_infinity(in_x, 0).coefficient({0});
}

/// The level n solving c^2/2 = (n + 1/2) hbar.
inline Rational quantized_level(const Rational& c2, const Rational& hbar) {
  if (hbar.sign() <= 0) throw Error("hbar must be positive");
  return c2 / (Rational(2) * hbar) - Rational(1, 2);
}

/// E_n = (n + 1/2) hbar omega.
inline Rational energy_level(const Rational& n, const Rational& hbar, const Rational& omega = Rational(1)) {
  return (n + Rational(1, 2)) * hbar * omega;
}

/// Both sides of the specialized recursion for the HO free energies:
///   d_s F_{g,n}(s, z..z)|_{s=z}
///     = -eps/(16c^2) (1-z^2)^3/z^2 [ d_s d_t F_{g-1,n+1} + sum (n-1)!/(n1! n2!) d F_{g1,n1+1} d F_{g2,n2+1} ]
///       + eps/(16c^2) z^2/(z^2-1)^3 (n-1) A_s^2 F_{g,n-1}(s, z..z)|_{s=z}
/// Splittings with an unstable factor are dropped; the neighbours
/// (g-1, n+1) and (g, n-1) must be stable, see specialized_recursion_applies().
inline bool specialized_recursion_applies(int g, int n) {
  return is_stable(g, n) && (g == 0 || is_stable(g - 1, n + 1)) && (n == 1 || is_stable(g, n - 1));
}

inline std::pair<LaurentPolynomial, LaurentPolynomial> specialized_recursion_sides(RecursionEngine& engine, int g,
                                                                                      int n) {
  const CurveSpec& curve = engine.curve();
  if (curve.is_airy()) throw Error("specialized recursion is stated on the harmonic oscillator curve");
  if (!specialized_recursion_applies(g, n)) throw StabilityError("specialized recursion needs stable neighbours");
  auto F = [&](int gg, int nn) { return integrate_symmetric(*engine.compute(gg, nn)).poly; };

  const LaurentPolynomial lhs = lp_specialize(lp_diff(F(g, n), 0));

  LaurentPolynomial bracket(1);
  if (g >= 1) bracket += lp_specialize(lp_diff(lp_diff(F(g - 1, n + 1), 0), 1));
  for (int g1 = 0; g1 <= g; ++g1) {
    for (int n1 = 0; n1 <= n - 1; ++n1) {
      const int g2 = g - g1;
      const int n2 = n - 1 - n1;
      if (!is_stable(g1, n1 + 1) || !is_stable(g2, n2 + 1)) continue;
      const Rational w = factorial(n - 1) / (factorial(n1) * factorial(n2));
      bracket += lp_specialize(lp_diff(F(g1, n1 + 1), 0)) * lp_specialize(lp_diff(F(g2, n2 + 1), 0)) * w;
    }
  }
  const Rational pre = Rational(curve.epsilon) / (Rational(16) * curve.c_squared);
  const LaurentPolynomial one_minus_z2_cubed = -detail::z2_minus_1_cubed();
  LaurentPolynomial rhs = lp_shift(one_minus_z2_cubed * bracket, 0, -2) * (-pre);

  if (n >= 2) {
    const LaurentPolynomial lower = F(g, n - 1);
    std::vector<std::size_t> target(lower.arity(), 1);
    target[0] = 0;
    const LaurentPolynomial in_s = lp_remap(lower, 2, target);  // slots (s, z)
    const auto s_cubed = lp_remap(detail::z2_minus_1_cubed(), 2, {0});
    auto apply_A_s = [&](const LaurentPolynomial& f) { return lp_shift(s_cubed * lp_diff(f, 0), 0, -2); };
    const LaurentPolynomial a2 = apply_A_s(apply_A_s(in_s));
    const LaurentPolynomial term = lp_shift(lp_exact_div(a2, s_cubed, 0), 0, 2);
    rhs += lp_specialize(term) * (pre * Rational(n - 1));
  }
  return {lhs, rhs};
}

}  // namespace spectral
