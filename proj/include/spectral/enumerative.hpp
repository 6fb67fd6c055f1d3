#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "spectral/free_energy.hpp"

namespace spectral {

/// <tau_{a_1} ... tau_{a_n}>_g keyed by (a_1, ..., a_n).
struct TauTable {
  int g = 0;
  int n = 0;
  std::map<std::vector<int>, Rational> entries;

  friend bool operator==(const TauTable&, const TauTable&) = default;
};

/// All n-tuples of nonnegative integers with the given sum.
inline std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(parts), 0);
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == parts - 1) {
      cur[static_cast<std::size_t>(slot)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[static_cast<std::size_t>(slot)] = v;
      rec(slot + 1, left - v);
    }
  };
  if (parts > 0 && total >= 0) rec(0, total);
  return out;
}

inline Exponents leading_pole(const std::vector<int>& a) {
  Exponents e(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) e[i] = -2 * a[i] - 2;
  return e;
}

namespace detail {

inline Rational odd_double_factorials(const std::vector<int>& a) {
  Rational p(1);
  for (int ai : a) p *= double_factorial_odd(ai);
  return p;
}

/// Reads the leading pole coefficients and divides by `scale` * prod (2a+1)!!.
inline TauTable extract_tau(const MultiDifferential& w, const Rational& scale) {
  TauTable t{w.g, w.n, {}};
  for (const auto& a : compositions(3 * w.g - 3 + w.n, w.n)) {
    const Rational c = w.poly.coefficient(leading_pole(a));
    if (c.is_zero())
      throw IncompleteError("w(" + std::to_string(w.g) + "," + std::to_string(w.n) + ") lacks a leading pole term");
    t.entries.emplace(a, c / (scale * odd_double_factorials(a)));
  }
  return t;
}

}  // namespace detail

/// From the Airy differentials: coefficient * 2^(2g-2+n) / prod (2a_i+1)!!.
inline TauTable tau_from_airy(RecursionEngine& airy, int g, int n) {
  if (!airy.curve().is_airy()) throw Error("tau_from_airy needs an Airy engine");
  require_stable(g, n);
  const auto w = airy.compute(g, n);
  const int degree = 3 * g - 3 + n;
  for (const auto& [e, c] : w->poly.terms()) {
    int sum = 0;
    for (int k : e) {
      if (k > -2 || k % 2 != 0) throw IncompleteError("Airy differential has a term outside the pole set");
      sum += (-k - 2) / 2;
    }
    if (sum != degree) throw IncompleteError("Airy differential has a term outside the pole set");
  }
  return detail::extract_tau(*w, Rational(2).pow(-(2 * g - 2 + n)));
}

/// From the leading poles of the HO differentials, whose prefactor is
/// (-eps/(8c^2))^(2g-2+n). No cross-check.
inline TauTable tau_from_ho_unchecked(RecursionEngine& ho, int g, int n) {
  const CurveSpec& cv = ho.curve();
  if (cv.is_airy()) throw Error("tau_from_ho needs a harmonic oscillator engine");
  require_stable(g, n);
  const Rational base = Rational(-cv.epsilon) / (Rational(8) * cv.c_squared);
  return detail::extract_tau(*ho.compute(g, n), base.pow(2 * g - 2 + n));
}

/// HO route, checked against the Airy route; MismatchError on disagreement.
inline TauTable tau_from_ho(RecursionEngine& ho, RecursionEngine& airy, int g, int n) {
  TauTable t = tau_from_ho_unchecked(ho, g, n);
  if (!(t == tau_from_airy(airy, g, n)))
    throw MismatchError("intersection numbers from the HO and Airy curves differ at (" + std::to_string(g) + "," +
                        std::to_string(n) + ")");
  return t;
}

/// coeff_HO(-2a-2) == (-eps/(4c^2))^(2g-2+n) coeff_Airy(-2a-2) for every
/// leading pole exponent.
inline bool leading_pole_correspondence(const MultiDifferential& ho, const MultiDifferential& airy) {
  if (ho.g != airy.g || ho.n != airy.n) throw Error("leading pole correspondence needs matching (g,n)");
  const Rational ratio = (Rational(-ho.curve.epsilon) / (Rational(4) * ho.curve.c_squared)).pow(2 * ho.g - 2 + ho.n);
  for (const auto& a : compositions(3 * ho.g - 3 + ho.n, ho.n)) {
    const Exponents e = leading_pole(a);
    if (ho.poly.coefficient(e) != ratio * airy.poly.coefficient(e)) return false;
  }
  return true;
}

struct PoincarePolynomial {
  int g = 0;
  int n = 0;
  LaurentPolynomial poly;
};

/// (-c^2/(2 eps))^(2g-2+n) times the integral from -1 in every variable.
inline PoincarePolynomial poincare_from_ho(RecursionEngine& ho, int g, int n) {
  const CurveSpec& cv = ho.curve();
  if (cv.is_airy()) throw Error("poincare_from_ho needs a harmonic oscillator engine");
  require_stable(g, n);
  LaurentPolynomial p = ho.compute(g, n)->poly;
  for (std::size_t i = 0; i < p.arity(); ++i) p = lp_integrate_from(p, i, Rational(-1));
  const Rational pre = (-cv.c_squared / Rational(2 * cv.epsilon)).pow(2 * g - 2 + n);
  return {g, n, p * pre};
}

/// -(1+z)^4 (z - 4 + 1/z) / (384 z^2)
inline LaurentPolynomial omega_1_1() {
  const auto one_plus_z = LaurentPolynomial::univariate({{1, 1}, {0, 1}});
  const auto inner = LaurentPolynomial::univariate({{1, 1}, {0, -4}, {-1, 1}});
  return lp_shift(lp_pow(one_plus_z, 4) * inner, 0, -2) * Rational(-1, 384);
}

/// -(1+z1)(1+z2)(1+z3)(1 + 1/(z1 z2 z3)) / 16
inline LaurentPolynomial omega_0_3() {
  const auto one = LaurentPolynomial::constant(3, Rational(1));
  LaurentPolynomial p = one + LaurentPolynomial::monomial({-1, -1, -1});
  for (std::size_t i = 0; i < 3; ++i) p = p * (one + LaurentPolynomial::variable(3, i));
  return p * Rational(-1, 16);
}

/// The integrated recursion for the Poincare polynomials, seeded with
/// Omega_{1,1} and Omega_{0,3}. Independent of the residue engine.
class PoincareRecursion {
 public:
  LaurentPolynomial compute(int g, int n) {
    require_stable(g, n);
    {
      std::shared_lock lock(mutex_);
      if (auto it = memo_.find({g, n}); it != memo_.end()) return it->second;
    }
    LaurentPolynomial p(static_cast<std::size_t>(n));
    if (g == 1 && n == 1)
      p = omega_1_1();
    else if (g == 0 && n == 3)
      p = omega_0_3();
    else
      p = step(g, n);
    std::unique_lock lock(mutex_);
    return memo_.try_emplace({g, n}, std::move(p)).first->second;
  }

 private:
  LaurentPolynomial step(int g, int n) {
    const auto arity = static_cast<std::size_t>(n);
    // (1 - x^2)^3 / x^2 and (1 - x^2)^2 / x^2 in slot 0.
    const auto one_minus_x2 = LaurentPolynomial::univariate({{0, 1}, {2, -1}});
    const auto cube_1 = lp_shift(lp_pow(one_minus_x2, 3), 0, -2);
    const auto cube = lp_remap(cube_1, arity, {0});
    const auto square = lp_remap(lp_shift(lp_pow(one_minus_x2, 2), 0, -2), arity, {0});

    LaurentPolynomial quadratic(arity);
    if (g >= 1 && is_stable(g - 1, n + 1)) {
      std::vector<std::size_t> target(arity + 1);
      for (std::size_t i = 1; i <= arity; ++i) target[i] = i - 1;
      quadratic += lp_remap(lp_diff(lp_diff(compute(g - 1, n + 1), 0), 1), arity, target);
    }
    const unsigned others = static_cast<unsigned>(n - 1);
    for (int g1 = 0; g1 <= g; ++g1) {
      for (unsigned mask = 0; mask < (1u << others); ++mask) {
        std::vector<std::size_t> ti{0}, tj{0};
        for (unsigned b = 0; b < others; ++b) (mask >> b & 1u ? ti : tj).push_back(b + 1);
        const int n1 = static_cast<int>(ti.size());
        const int n2 = static_cast<int>(tj.size());
        if (!is_stable(g1, n1) || !is_stable(g - g1, n2)) continue;
        quadratic += lp_remap(lp_diff(compute(g1, n1), 0), arity, ti) *
                     lp_remap(lp_diff(compute(g - g1, n2), 0), arity, tj);
      }
    }
    LaurentPolynomial integrand = cube * quadratic * Rational(1, 32);

    if (n >= 2 && is_stable(g, n - 1)) {
      const LaurentPolynomial f = lp_diff(compute(g, n - 1), 0);
      for (std::size_t j = 1; j < arity; ++j) {
        std::vector<std::size_t> at_x{0};
        std::vector<std::size_t> at_zj{j};
        for (std::size_t i = 1; i < arity; ++i) {
          if (i == j) continue;
          at_x.push_back(i);
          at_zj.push_back(i);
        }
        const auto fx = lp_remap(f, arity, at_x);
        const auto fz = lp_remap(f, arity, at_zj);
        const auto cube_zj = lp_remap(cube_1, arity, {j});
        const auto x2_minus_zj2 = LaurentPolynomial::variable(arity, 0, 2) - LaurentPolynomial::variable(arity, j, 2);
        const auto quotient = lp_exact_div(cube * fx - cube_zj * fz, x2_minus_zj2, 0);
        integrand -= square * fx * Rational(1, 16);
        integrand += LaurentPolynomial::variable(arity, j) * quotient * Rational(1, 16);
      }
    }
    return lp_integrate_from(integrand, 0, Rational(-1));
  }

  std::shared_mutex mutex_;
  std::map<std::pair<int, int>, LaurentPolynomial> memo_;
};

inline PoincarePolynomial poincare_by_recursion(PoincareRecursion& rec, int g, int n) {
  return {g, n, rec.compute(g, n)};
}

inline PoincarePolynomial poincare_by_recursion(int g, int n) {
  PoincareRecursion rec;
  return poincare_by_recursion(rec, g, n);
}

}  // namespace spectral
