#pragma once

#include <map>
#include <mutex>
#include <shared_mutex>

#include "spectral/curve.hpp"
#include "spectral/laurent.hpp"
#include "spectral/series.hpp"

namespace spectral {

/// How the kernel residues of the recursion are evaluated.
///   series      - Laurent expansion of the full integrand at each
///                 ramification point (reference implementation)
///   closed_form - closed-form kernel residues (fast path)
///   both        - run both and abort on any disagreement
enum class Backend { series, closed_form, both };

// ---------------------------------------------------------------------------
// Closed forms (harmonic oscillator)

/// (Res_0 + Res_inf) K(z,z1) dz^2 / z^(2k) as a polynomial in z1 (coefficient of dz1).
/// Airy: Res_0 only, which is -1/(4 y1^(2k+2)) for k >= 0 and zero otherwise.
inline LaurentPolynomial residue_basic_closed(const CurveSpec& curve, int k) {
  if (curve.is_airy()) {
    if (k < 0) return LaurentPolynomial(1);
    return LaurentPolynomial::univariate({{-2 * k - 2, Rational(-1, 4)}});
  }
  const Rational pre = Rational(curve.epsilon) / (Rational(16) * curve.c_squared);
  // (1 - z1^2)^3 / z1^(2k+2)
  return LaurentPolynomial::univariate({{-2 * k - 2, pre}, {-2 * k, -3 * pre}, {-2 * k + 2, 3 * pre}, {-2 * k + 4, -pre}});
}

/// The three-part bracket of the unstable residue, in variables (z1, zj):
///   (1-z1^2)^3/z1^6 sum_{s=0}^{1-k} (2s+1) zj^(2s) z1^(2(1-k-s))
/// + (1-z1^2)^3/(zj^2 z1^2) sum_{t=0}^{k-3} (2t+1)/(zj^(2t) z1^(2(k-t)))
/// + (2k-3)(1-3z1^2+3z1^4)/(zj^(2k-2) z1^6) + (2k-1)(1-3z1^2)/(zj^(2k) z1^4) + (2k+1)/(zj^(2k+2) z1^2)
/// Empty ranges contribute nothing.
inline LaurentPolynomial unstable_operator_D(int k) {
  LaurentPolynomial out(2);
  auto add = [&](int e1, int ej, const Rational& c) { out.add_term({e1, ej}, c); };
  // (1 - z1^2)^3 = 1 - 3 z1^2 + 3 z1^4 - z1^6
  const int cube[4] = {1, -3, 3, -1};
  for (int s = 0; s <= 1 - k; ++s)
    for (int i = 0; i < 4; ++i) add(2 * i - 6 + 2 * (1 - k - s), 2 * s, Rational(cube[i] * (2 * s + 1)));
  for (int t = 0; t <= k - 3; ++t)
    for (int i = 0; i < 4; ++i) add(2 * i - 2 - 2 * (k - t), -2 - 2 * t, Rational(cube[i] * (2 * t + 1)));
  const int quad[3] = {1, -3, 3};
  for (int i = 0; i < 3; ++i) add(2 * i - 6, -2 * k + 2, Rational((2 * k - 3) * quad[i]));
  add(-4, -2 * k, Rational(2 * k - 1));
  add(-2, -2 * k, Rational(-3 * (2 * k - 1)));
  add(-2, -2 * k - 2, Rational(2 * k + 1));
  return out;
}

/// (Res_0 + Res_inf) K(z,z1) (-(2z^2+2zj^2)/(z^2-zj^2)^2) dz^2/z^(2k) in (z1, zj).
inline LaurentPolynomial residue_unstable_closed(const CurveSpec& curve, int k) {
  if (curve.is_airy()) throw Error("no closed form for the Airy unstable residue; use the series backend");
  return unstable_operator_D(k) * (Rational(-curve.epsilon) / (Rational(8) * curve.c_squared));
}

/// Heaviside step with H(n) = 1 for n >= 0.
inline int heaviside(int n) { return n >= 0 ? 1 : 0; }

/// The z = 0 half of the unstable residue, in Heaviside form.
inline LaurentPolynomial residue_unstable_half_at_zero(const CurveSpec& curve, int k) {
  LaurentPolynomial b(2);
  auto add = [&](int e1, int ej, const Rational& c) { b.add_term({e1, ej}, c); };
  const int cube[4] = {1, -3, 3, -1};
  for (int p = 0; p <= k - 3; ++p)
    for (int i = 0; i < 4; ++i) add(2 * i - 2 - (2 * k - 2 * p), -2 - 2 * p, Rational(cube[i] * (2 * p + 1)));
  add(-2, -2 * k - 2, Rational((2 * k + 1) * heaviside(k)));
  add(-4, -2 * k, Rational((2 * k - 1) * heaviside(k - 1)));
  add(-2, -2 * k, Rational(-3 * (2 * k - 1) * heaviside(k - 1)));
  const int quad[3] = {1, -3, 3};
  for (int i = 0; i < 3; ++i) add(2 * i - 6, -2 * k + 2, Rational((2 * k - 3) * quad[i] * heaviside(k - 2)));
  return b * (Rational(-curve.epsilon) / (Rational(8) * curve.c_squared));
}

/// The z = infinity half of the unstable residue, in Heaviside form.
inline LaurentPolynomial residue_unstable_half_at_infinity(const CurveSpec& curve, int k) {
  LaurentPolynomial b(2);
  auto add = [&](int e1, int ej, const Rational& c) { b.add_term({e1, ej}, c); };
  const int cube[4] = {1, -3, 3, -1};
  for (int p = 0; p <= 1 - k; ++p)
    for (int i = 0; i < 4; ++i) add(2 * i - 4 - 2 * p - 2 * k, 2 * p, Rational(cube[i] * (2 * p + 1)));
  add(-2, -2 * k - 2, Rational((2 * k + 1) * heaviside(-1 - k)));
  add(-4, -2 * k, Rational((2 * k - 1) * heaviside(-k)));
  add(-2, -2 * k, Rational(-3 * (2 * k - 1) * heaviside(-k)));
  const int quad[3] = {1, -3, 3};
  for (int i = 0; i < 3; ++i) add(2 * i - 6, -2 * k + 2, Rational((2 * k - 3) * quad[i] * heaviside(1 - k)));
  return b * (Rational(-curve.epsilon) / (Rational(8) * curve.c_squared));
}

/// One-half of the zj-integral over [-zj, zj] of the D-action on s^(-2k),
/// i.e. the zj-antiderivative of unstable_operator_D(k).
inline LaurentPolynomial curlyD_action(int k) { return lp_antideriv(unstable_operator_D(k), 1); }

// ---------------------------------------------------------------------------
// Series route

/// Residues summed over the ramification points of the curve, in `var`:
/// z = 0 and z = infinity for the HO curve, y = 0 for Airy.
inline LaurentPolynomial ramification_residue(const CurveSpec& curve, const RationalExpression& integrand,
                                              std::size_t var) {
  LaurentPolynomial r = residue_at_zero(integrand, var);
  if (!curve.is_airy()) r += residue_at_infinity(integrand, var);
  return r;
}

/// Kernel K(z, z1) lifted into `arity` variables with z in slot 0, z1 in slot 1.
inline RationalExpression lifted_kernel(const CurveSpec& curve, std::size_t arity) {
  const RationalExpression k = kernel(curve);
  std::vector<std::size_t> target = {0, 1};
  return {lp_remap(k.numerator, arity, target), lp_remap(k.denominator, arity, target)};
}

inline LaurentPolynomial residue_basic_series(const CurveSpec& curve, int k) {
  RationalExpression f = lifted_kernel(curve, 2);
  f.numerator = lp_shift(f.numerator, 0, -2 * k);
  const LaurentPolynomial r = ramification_residue(curve, f, 0);
  return lp_remap(r, 1, {0, 0});
}

/// The factor w02(-z, zj) - w02(z, zj) = -2(z^2 + zj^2)/(z^2 - zj^2)^2 in
/// `arity` variables, z in slot 0, zj in slot `j`.
inline RationalExpression unstable_factor(std::size_t arity, std::size_t j) {
  const auto z2 = LaurentPolynomial::variable(arity, 0, 2);
  const auto zj2 = LaurentPolynomial::variable(arity, j, 2);
  const auto diff = z2 - zj2;
  return {(z2 + zj2) * Rational(-2), diff * diff};
}

inline LaurentPolynomial residue_unstable_series(const CurveSpec& curve, int k) {
  RationalExpression f = lifted_kernel(curve, 3) * unstable_factor(3, 2);
  f.numerator = lp_shift(f.numerator, 0, -2 * k);
  const LaurentPolynomial r = ramification_residue(curve, f, 0);
  return lp_remap(r, 2, {0, 0, 1});
}

/// Per-k memo of kernel residues for one curve and one evaluation route.
/// Safe for concurrent use.
class ResidueTable {
 public:
  ResidueTable(CurveSpec curve, Backend backend) : curve_(std::move(curve)), backend_(backend) {
    if (backend_ == Backend::both) throw Error("ResidueTable needs a single backend");
  }

  [[nodiscard]] const CurveSpec& curve() const { return curve_; }
  [[nodiscard]] Backend backend() const { return backend_; }

  LaurentPolynomial basic(int k) {
    return lookup(basic_, k, [&] {
      return backend_ == Backend::closed_form ? residue_basic_closed(curve_, k) : residue_basic_series(curve_, k);
    });
  }

  LaurentPolynomial unstable(int k) {
    return lookup(unstable_, k, [&] {
      if (backend_ == Backend::closed_form && !curve_.is_airy()) return residue_unstable_closed(curve_, k);
      return residue_unstable_series(curve_, k);
    });
  }

 private:
  template <typename F>
  LaurentPolynomial lookup(std::map<int, LaurentPolynomial>& table, int k, F&& compute) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = table.find(k); it != table.end()) return it->second;
    }
    LaurentPolynomial value = compute();
    std::unique_lock lock(mutex_);
    return table.try_emplace(k, std::move(value)).first->second;
  }

  CurveSpec curve_;
  Backend backend_;
  std::shared_mutex mutex_;
  std::map<int, LaurentPolynomial> basic_;
  std::map<int, LaurentPolynomial> unstable_;
};

}  // namespace spectral
