#include "support.hpp"

namespace {

using namespace spectral;
using spectral::testing::poly;
using spectral::testing::q;
using spectral::testing::symmetrized;

LaurentPolynomial uni(std::initializer_list<std::pair<int, Rational>> t) { return LaurentPolynomial::univariate(t); }

TEST(FreeEnergy, HoFirstLevel) {
  for (const auto& cv : {CurveSpec::harmonic_oscillator(q(2), -1), CurveSpec::harmonic_oscillator(q(9, 4), 1)}) {
    RecursionEngine e(cv);
    const Rational pre = Rational(cv.epsilon) / cv.c_squared;
    EXPECT_EQ(integrate_symmetric(*e.compute(0, 3)).poly,
              poly(3, {{{1, 1, 1}, q(1)}, {{-1, -1, -1}, q(1)}}) * (pre * q(1, 8)));
    EXPECT_EQ(integrate_symmetric(*e.compute(1, 1)).poly,
              uni({{3, q(1, 3)}, {1, q(-3)}, {-1, q(-3)}, {-3, q(1, 3)}}) * (pre * q(1, 64)));
  }
}

TEST(FreeEnergy, AiryValues) {
  RecursionEngine e(CurveSpec::airy());
  EXPECT_EQ(integrate_symmetric(*e.compute(0, 3)).poly, poly(3, {{{-1, -1, -1}, q(-1, 2)}}));
  EXPECT_EQ(integrate_symmetric(*e.compute(1, 1)).poly, uni({{-3, q(-1, 48)}}));
  EXPECT_EQ(integrate_symmetric(*e.compute(0, 4)).poly, symmetrized({-3, -1, -1, -1}, q(1, 4)));
  EXPECT_EQ(integrate_symmetric(*e.compute(1, 2)).poly,
            symmetrized({-1, -5}, q(1, 32)) + symmetrized({-3, -3}, q(1, 96)));
}

TEST(FreeEnergy, DifferentiationRecoversW) {
  for (const auto& cv : {CurveSpec::harmonic_oscillator(), CurveSpec::airy()}) {
    RecursionEngine e(cv);
    for (int l = 1; l <= 4; ++l)
      for (auto [g, n] : level_pairs(l)) {
        const auto w = e.compute(g, n);
        const FreeEnergy f = integrate_symmetric(*w);
        EXPECT_NO_THROW(f.validate());
        LaurentPolynomial d = f.poly;
        for (std::size_t i = 0; i < d.arity(); ++i) d = lp_diff(d, i);
        EXPECT_EQ(d, w->poly) << g << "," << n;
      }
  }
}

TEST(FreeEnergy, HoIsOddUnderZToMinusZ) {
  RecursionEngine e(CurveSpec::harmonic_oscillator(q(5, 3)));
  for (auto [g, n] : level_pairs(3)) {
    const LaurentPolynomial f = integrate_symmetric(*e.compute(g, n)).poly;
    for (std::size_t i = 0; i < f.arity(); ++i) EXPECT_EQ(lp_negate_variable(f, i), -f);
  }
}

TEST(FreeEnergy, ValidationRejectsEvenExponent) {
  FreeEnergy f{0, 3, CurveSpec::airy(), symmetrized({-2, -1, -1}, q(1))};
  EXPECT_THROW(f.validate(), InvariantViolation);
  EXPECT_THROW(integrate_symmetric(MultiDifferential{0, 2, CurveSpec::airy(), LaurentPolynomial(2)}),
               StabilityError);
}

TEST(SCoefficient, AiryAssembly) {
  EXPECT_EQ(s_coefficient(CurveSpec::airy(), 2), uni({{-3, q(-5, 48)}}));
  EXPECT_EQ(s_coefficient(CurveSpec::airy(), 3), uni({{-6, q(5, 64)}}));
  EXPECT_EQ(s_coefficient(CurveSpec::airy(), 4), uni({{-9, q(-1105, 9216)}}));
  EXPECT_THROW(s_coefficient(CurveSpec::airy(), 1), StabilityError);
}

TEST(SCoefficient, HoSecond) {
  for (int eps : {-1, 1}) {
    const CurveSpec cv = CurveSpec::harmonic_oscillator(q(7, 2), eps);
    const Rational pre = Rational(eps) / (cv.c_squared * q(192));
    EXPECT_EQ(s_coefficient(cv, 2), uni({{3, q(5)}, {1, q(-9)}, {-1, q(-9)}, {-3, q(5)}}) * pre);
  }
}

TEST(CurveFunctions, SolveLowestWkbOrders) {
  // Rational points on the curves: (2, 1) on y^2 = x^2 - 3 and (4, 2) on y^2 = x.
  const CurveSpec ho = CurveSpec::harmonic_oscillator(q(3));
  const std::vector<Rational> p_ho{q(2), q(1)};
  const CurveFunctions h = s01_prime(ho);
  EXPECT_EQ(h.s0_prime.evaluate(p_ho) * h.s0_prime.evaluate(p_ho), q(1));
  // 2 S0' S1' + S0'' = 0 with S0'' = -x / y.
  EXPECT_EQ(q(2) * h.s0_prime.evaluate(p_ho) * h.s1_prime.evaluate(p_ho) - q(2), q(0));

  const std::vector<Rational> p_airy{q(4), q(2)};
  const CurveFunctions a = s01_prime(CurveSpec::airy());
  EXPECT_EQ(a.s0_prime.evaluate(p_airy) * a.s0_prime.evaluate(p_airy), q(4));
  // S0'' = -1 / (2y).
  EXPECT_EQ(q(2) * a.s0_prime.evaluate(p_airy) * a.s1_prime.evaluate(p_airy) - q(1, 4), q(0));
}

TEST(CurveFunctions, ReduceOnCurve) {
  const CurveSpec ho = CurveSpec::harmonic_oscillator(q(3));
  const CurveFunctions h = s01_prime(ho);
  const RationalExpression sq = reduce_on_curve(h.s0_prime * h.s0_prime, ho);
  EXPECT_TRUE(sq.equivalent(RationalExpression(poly(2, {{{2, 0}, q(1)}, {{0, 0}, q(-3)}}))));
  EXPECT_EQ(reduce_on_curve(poly(2, {{{0, 3}, q(1)}}), CurveSpec::airy()), poly(2, {{{1, 1}, q(1)}}));
  EXPECT_THROW(reduce_on_curve(poly(2, {{{0, -1}, q(1)}}), ho), Error);
}

}  // namespace
