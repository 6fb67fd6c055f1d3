#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "spectral/enumerative.hpp"
#include "spectral/wkb.hpp"

namespace spectral {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Ordered list of named identity checks. Serialized deterministically:
/// no timings, no addresses, fixed RNG seed.
class VerifyReport {
 public:
  VerifyReport(std::string suite, int level) : suite_(std::move(suite)), level_(level) {}

  /// Runs `body`; a false return or any engine error marks a failure.
  void check(const std::string& suite, const std::string& name, const std::function<bool(std::string&)>& body) {
    CheckResult r{suite, name, false, {}};
    try {
      r.passed = body(r.detail);
    } catch (const Error& ex) {
      r.passed = false;
      r.detail = ex.what();
    }
    results_.push_back(std::move(r));
  }

  [[nodiscard]] bool passed() const {
    for (const auto& r : results_)
      if (!r.passed) return false;
    return true;
  }

  [[nodiscard]] const std::vector<CheckResult>& results() const { return results_; }

  [[nodiscard]] ordered_json to_json() const {
    ordered_json checks = ordered_json::array();
    std::size_t failed = 0;
    for (const auto& r : results_) {
      ordered_json c;
      c["suite"] = r.suite;
      c["check"] = r.name;
      c["status"] = r.passed ? "pass" : "fail";
      if (!r.detail.empty()) c["detail"] = r.detail;
      checks.push_back(std::move(c));
      if (!r.passed) ++failed;
    }
    ordered_json j;
    j["suite"] = suite_;
    j["level"] = level_;
    j["total"] = results_.size();
    j["failed"] = failed;
    j["result"] = failed == 0 ? "pass" : "fail";
    j["checks"] = std::move(checks);
    return j;
  }

 private:
  std::string suite_;
  int level_;
  std::vector<CheckResult> results_;
};

namespace detail {

/// Reproducible rationals straight from mt19937 output (whose sequence is
/// fixed by the standard, unlike the distributions).
class RationalSampler {
 public:
  explicit RationalSampler(std::uint32_t seed) : rng_(seed) {}

  Rational nonzero(int max_num, int max_den) {
    for (;;) {
      const int num = static_cast<int>(rng_() % static_cast<std::uint32_t>(2 * max_num + 1)) - max_num;
      const int den = static_cast<int>(rng_() % static_cast<std::uint32_t>(max_den)) + 1;
      if (num != 0) return Rational(num, den);
    }
  }

 private:
  std::mt19937 rng_;
};

inline std::string pair_name(int g, int n) { return "(" + std::to_string(g) + "," + std::to_string(n) + ")"; }

}  // namespace detail

inline constexpr std::uint32_t kVerifySeed = 20240917u;

/// Closed-form kernel residues against the series expansion at random
/// rational points, and the split of the unstable residue into its z = 0
/// and z = infinity halves.
inline void verify_residues(VerifyReport& report) {
  const std::string suite = "lemma51";
  detail::RationalSampler sampler(kVerifySeed);
  struct Point {
    Rational z1, zj, c2;
    int eps;
  };
  std::vector<Point> points;
  while (points.size() < 20) {
    Point p{sampler.nonzero(9, 7), sampler.nonzero(9, 7), sampler.nonzero(12, 5), points.size() % 2 ? 1 : -1};
    if (p.z1 * p.z1 == p.zj * p.zj) continue;
    points.push_back(p);
  }
  for (int k = -6; k <= 8; ++k) {
    report.check(suite, "basic kernel residue, closed form = series, k=" + std::to_string(k), [&](std::string& d) {
      for (const auto& p : points) {
        const CurveSpec cv = CurveSpec::harmonic_oscillator(p.c2, p.eps);
        const std::vector<Rational> at{p.z1};
        if (residue_basic_closed(cv, k).evaluate(at) != residue_basic_series(cv, k).evaluate(at)) {
          d = "differs at z1=" + p.z1.str() + " c2=" + p.c2.str();
          return false;
        }
      }
      return true;
    });
    report.check(suite, "unstable kernel residue, closed form = series, k=" + std::to_string(k), [&](std::string& d) {
      for (const auto& p : points) {
        const CurveSpec cv = CurveSpec::harmonic_oscillator(p.c2, p.eps);
        const std::vector<Rational> at{p.z1, p.zj};
        if (residue_unstable_closed(cv, k).evaluate(at) != residue_unstable_series(cv, k).evaluate(at)) {
          d = "differs at z1=" + p.z1.str() + " zj=" + p.zj.str() + " c2=" + p.c2.str();
          return false;
        }
      }
      return true;
    });
  }
  report.check(suite, "Airy basic kernel residue, closed form = series, k in [-6,8]", [&](std::string&) {
    for (int k = -6; k <= 8; ++k)
      if (!(residue_basic_closed(CurveSpec::airy(), k) == residue_basic_series(CurveSpec::airy(), k))) return false;
    return true;
  });
  const CurveSpec ho = CurveSpec::harmonic_oscillator();
  for (int k = -2; k <= 4; ++k) {
    report.check(suite, "unstable residue halves recombine, k=" + std::to_string(k), [&](std::string&) {
      RationalExpression f = lifted_kernel(ho, 3) * unstable_factor(3, 2);
      f.numerator = lp_shift(f.numerator, 0, -2 * k);
      const auto at_zero = lp_remap(residue_at_zero(f, 0), 2, {0, 0, 1});
      const auto at_inf = lp_remap(residue_at_infinity(f, 0), 2, {0, 0, 1});
      return residue_unstable_half_at_zero(ho, k) == at_zero && residue_unstable_half_at_infinity(ho, k) == at_inf &&
             at_zero + at_inf == residue_unstable_closed(ho, k);
    });
  }
}

/// Permutation symmetry, even exponents, pairing or pole set, and backend
/// agreement for every (g,n) through the level.
inline void verify_structure(VerifyReport& report, RecursionEngine& ho, RecursionEngine& airy, int level) {
  const std::string suite = "structure";
  RecursionEngine both(ho.curve(), std::make_shared<MemoStore>(), Backend::both);
  RecursionEngine both_airy(airy.curve(), std::make_shared<MemoStore>(), Backend::both);
  for (int l = 1; l <= level; ++l) {
    for (auto [g, n] : level_pairs(l)) {
      const std::string tag = detail::pair_name(g, n);
      report.check(suite, "HO differential invariants " + tag, [&](std::string&) {
        ho.compute(g, n)->validate();
        return true;
      });
      report.check(suite, "Airy differential invariants " + tag, [&](std::string&) {
        airy.compute(g, n)->validate();
        return true;
      });
      report.check(suite, "series and closed-form backends agree " + tag, [&](std::string&) {
        return both.compute(g, n)->poly == ho.compute(g, n)->poly &&
               both_airy.compute(g, n)->poly == airy.compute(g, n)->poly;
      });
      report.check(suite, "leading poles match Airy up to (-eps/4c^2)^(2g-2+n) " + tag,
                   [&](std::string&) { return leading_pole_correspondence(*ho.compute(g, n), *airy.compute(g, n)); });
    }
  }
}

/// WKB recursion against the free-energy assembly for m <= level.
inline void verify_wkb(VerifyReport& report, RecursionEngine& ho, RecursionEngine& airy, int level) {
  const std::string suite = "theorem41";
  const int top = std::max(level, 2);
  for (RecursionEngine* e : {&ho, &airy}) {
    const CurveSpec& cv = e->curve();
    const WkbSeries series = top > 2 ? wkb_extend(wkb_initial(cv), top) : wkb_initial(cv);
    for (int m = 2; m <= top; ++m) {
      const bool odd = !cv.is_airy() && m % 2 == 1;
      const std::string name = cv.name() + " S_" + std::to_string(m) + (odd ? " equals assembly up to a constant"
                                                                         : " equals assembly exactly");
      report.check(suite, name, [&, m](std::string& d) {
        const AssemblyComparison c = compare_with_assembly(*e, series, m);
        d = "constant " + c.constant.str();
        if (!odd) return c.exact;
        if (m == 3) return c.constant == -(cv.c_squared * cv.c_squared * Rational(32)).inverse();
        return true;
      });
    }
    for (int m = 3; m <= top; ++m) {
      report.check(suite, cv.name() + " dS_" + std::to_string(m) + "/dz has no residue", [&, m](std::string&) {
        return series.derivatives[static_cast<std::size_t>(m - 2)].coefficient({-1}).is_zero();
      });
      report.check(suite, cv.name() + " assembled S_" + std::to_string(m) + " solves the WKB recursion",
                   [&, m](std::string&) {
                     std::vector<LaurentPolynomial> lower;
                     for (int i = 2; i < m; ++i) lower.push_back(s_coefficient(*e, i));
                     return lp_diff(s_coefficient(*e, m), 0) == wkb_rhs(cv, lower, m);
                   });
    }
  }
  for (int l = 2; l <= level; ++l)
    for (auto [g, n] : level_pairs(l)) {
      if (!specialized_recursion_applies(g, n)) continue;
      report.check(suite, "specialized free-energy recursion " + detail::pair_name(g, n), [&, g = g, n = n](std::string&) {
        auto [lhs, rhs] = specialized_recursion_sides(ho, g, n);
        return lhs == rhs;
      });
    }
  report.check(suite, "energy residues (c^2/2, -1)", [&](std::string& d) {
    auto [a, b] = energy_residues(ho.curve());
    d = a.str() + ", " + b.str();
    return a == ho.curve().c_squared / Rational(2) && b == Rational(-1);
  });
  report.check(suite, "S1' contour contribution is -1/2",
               [&](std::string&) { return s1_contour_contribution(ho.curve()) == Rational(-1, 2); });
}

/// Integrated HO differentials against the stand-alone Poincare recursion.
inline void verify_poincare(VerifyReport& report, RecursionEngine& ho, int level) {
  const std::string suite = "theorem61";
  PoincareRecursion rec;
  const CurveSpec& cv = ho.curve();
  const bool unit = cv.c_squared == Rational(2) && cv.epsilon == -1;
  report.check(suite, "P(1,1) equals Omega(1,1)",
               [&](std::string&) { return poincare_from_ho(ho, 1, 1).poly == omega_1_1(); });
  report.check(suite, "P(0,3) equals Omega(0,3)",
               [&](std::string&) { return poincare_from_ho(ho, 0, 3).poly == omega_0_3(); });
  for (int l = 2; l <= level; ++l)
    for (auto [g, n] : level_pairs(l)) {
      const std::string tag = detail::pair_name(g, n);
      report.check(suite, "integrated differential equals Poincare recursion " + tag, [&, g = g, n = n](std::string&) {
        return poincare_from_ho(ho, g, n).poly == poincare_by_recursion(rec, g, n).poly;
      });
    }
  if (!unit) return;
  for (int l = 1; l <= level; ++l)
    for (auto [g, n] : level_pairs(l)) {
      report.check(suite, "derivative of P recovers w " + detail::pair_name(g, n), [&, g = g, n = n](std::string&) {
        LaurentPolynomial p = poincare_from_ho(ho, g, n).poly;
        for (std::size_t i = 0; i < p.arity(); ++i) p = lp_diff(p, i);
        return p == ho.compute(g, n)->poly;
      });
    }
}

inline void verify_tau(VerifyReport& report, RecursionEngine& ho, RecursionEngine& airy, int level) {
  const std::string suite = "tau";
  struct Known {
    int g, n;
    std::vector<int> a;
    Rational value;
  };
  const std::vector<Known> known = {
      {0, 3, {0, 0, 0}, Rational(1)}, {1, 1, {1}, Rational(1, 24)}, {2, 1, {4}, Rational(1, 1152)}};
  for (const auto& k : known) {
    if (2 * k.g - 2 + k.n > std::max(level, 3)) continue;
    std::string name = "<";
    for (int a : k.a) name += "tau" + std::to_string(a);
    name += ">_" + std::to_string(k.g) + " = " + k.value.str() + " from both curves";
    report.check(suite, name, [&](std::string& d) {
      const Rational x = tau_from_airy(airy, k.g, k.n).entries.at(k.a);
      const Rational y = tau_from_ho_unchecked(ho, k.g, k.n).entries.at(k.a);
      d = x.str() + ", " + y.str();
      return x == k.value && y == k.value;
    });
  }
  for (int l = 1; l <= level; ++l)
    for (auto [g, n] : level_pairs(l)) {
      report.check(suite, "HO and Airy intersection tables agree " + detail::pair_name(g, n),
                   [&, g = g, n = n](std::string&) {
                     const TauTable t = tau_from_ho(ho, airy, g, n);
                     for (const auto& [a, v] : t.entries)
                       if (v.sign() <= 0) return false;
                     return true;
                   });
    }
}

inline const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = {"lemma51", "structure", "theorem41", "theorem61", "tau", "all"};
  return names;
}

/// Runs a suite through `level` on the HO curve `curve` and the Airy curve,
/// sharing `store` between them.
inline VerifyReport run_verify(const std::string& suite, int level, const CurveSpec& curve,
                               std::shared_ptr<MemoStore> store, unsigned threads = 0) {
  if (level < 1) throw StabilityError("level bound must be at least 1");
  if (curve.is_airy()) throw Error("verification runs on a harmonic oscillator curve");
  bool known = false;
  for (const auto& s : verify_suites()) known = known || s == suite;
  if (!known) throw Error("unknown suite '" + suite + "'");

  VerifyReport report(suite, level);
  RecursionEngine ho(curve, store);
  RecursionEngine airy(CurveSpec::airy(), store);
  const bool all = suite == "all";
  if (all || suite != "lemma51") {
    const int need = suite == "tau" ? std::max(level, 3) : level;
    ho.compute_through_level(need, threads);
    airy.compute_through_level(need, threads);
  }
  if (all || suite == "lemma51") verify_residues(report);
  if (all || suite == "structure") verify_structure(report, ho, airy, level);
  if (all || suite == "theorem41") verify_wkb(report, ho, airy, level);
  if (all || suite == "theorem61") verify_poincare(report, ho, level);
  if (all || suite == "tau") verify_tau(report, ho, airy, level);
  return report;
}

}  // namespace spectral
