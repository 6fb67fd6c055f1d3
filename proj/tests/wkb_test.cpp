#include <chrono>

#include "support.hpp"

namespace {

using namespace spectral;
using spectral::testing::q;

LaurentPolynomial uni(std::initializer_list<std::pair<int, Rational>> t) { return LaurentPolynomial::univariate(t); }

TEST(Wkb, AiryCoefficients) {
  const WkbSeries s = wkb_extend(wkb_initial(CurveSpec::airy()), 6);
  EXPECT_EQ(s.s(2), uni({{-3, q(-5, 48)}}));
  EXPECT_EQ(s.s(3), uni({{-6, q(5, 64)}}));
  EXPECT_EQ(s.s(4), uni({{-9, q(-1105, 9216)}}));
  EXPECT_THROW((void)s.s(7), Error);
  EXPECT_THROW((void)s.s(1), Error);
}

TEST(Wkb, HoSecondMatchesAssembly) {
  for (int eps : {-1, 1})
    for (const Rational& c2 : {q(2), q(3, 5)}) {
      const CurveSpec cv = CurveSpec::harmonic_oscillator(c2, eps);
      EXPECT_EQ(wkb_initial(cv).s(2), s_coefficient(cv, 2));
    }
}

TEST(Wkb, HoThirdMatchesXSpaceFormula) {
  for (int eps : {-1, 1})
    for (const Rational& c2 : {q(2), q(5, 3)}) {
      const CurveSpec cv = CurveSpec::harmonic_oscillator(c2, eps);
      const WkbSeries s = wkb_extend(wkb_initial(cv), 3);
      // (3x^2 + 2c^2) / (16 (x^2 - c^2)^3)
      const RationalExpression s3x(uni({{2, 3}, {0, c2 * q(2)}}), lp_pow(uni({{2, 1}, {0, -c2}}), 3) * q(16));
      const RationalExpression z = to_z_coordinates(s3x, cv);
      const RationalExpression diff = RationalExpression(s.s(3)) - z;
      // A constant difference has a vanishing derivative numerator.
      const RationalExpression d(lp_diff(diff.numerator, 0) * diff.denominator - diff.numerator * lp_diff(diff.denominator, 0),
                                 diff.denominator * diff.denominator);
      EXPECT_TRUE(d.numerator.is_zero()) << c2.str() << " eps=" << eps;
    }
}

TEST(Wkb, RightHandSidesAreExactAndResidueFree) {
  for (const auto& cv : {CurveSpec::harmonic_oscillator(), CurveSpec::harmonic_oscillator(q(4, 9), 1),
                         CurveSpec::airy()}) {
    const WkbSeries s = wkb_extend(wkb_initial(cv), 8);
    for (const auto& d : s.derivatives) EXPECT_TRUE(d.coefficient({-1}).is_zero());
    for (int m = 2; m <= 8; ++m) EXPECT_EQ(lp_diff(s.s(m), 0), s.derivatives[static_cast<std::size_t>(m - 2)]);
  }
}

TEST(Wkb, OddHoCoefficientsVanishAtOne) {
  const WkbSeries s = wkb_extend(wkb_initial(CurveSpec::harmonic_oscillator(q(3))), 7);
  const std::vector<Rational> one{q(1)};
  for (int m : {3, 5, 7}) EXPECT_TRUE(s.s(m).evaluate(one).is_zero()) << m;
  for (int m : {2, 4, 6}) EXPECT_EQ(lp_negate_variable(s.s(m), 0), -s.s(m)) << m;
}

TEST(Wkb, AssembledCoefficientsSolveTheRecursion) {
  for (const auto& cv : {CurveSpec::harmonic_oscillator(q(6), 1), CurveSpec::airy()}) {
    RecursionEngine e(cv);
    std::vector<LaurentPolynomial> lower;
    for (int m = 2; m <= 5; ++m) {
      const LaurentPolynomial s = s_coefficient(e, m);
      if (m >= 3) {
        EXPECT_EQ(lp_diff(s, 0), wkb_rhs(cv, lower, m)) << m;
      }
      lower.push_back(s);
    }
  }
}

class AssemblyTest : public ::testing::TestWithParam<int> {};

TEST_P(AssemblyTest, AgreesUpToConstant) {
  const int m = GetParam();
  for (const auto& cv : {CurveSpec::harmonic_oscillator(), CurveSpec::harmonic_oscillator(q(3, 5), 1)}) {
    RecursionEngine e(cv);
    const AssemblyComparison r = compare_with_assembly(e, m);
    if (m % 2 == 0) {
      EXPECT_TRUE(r.exact);
    }
    if (m == 3) {
      EXPECT_EQ(r.constant, -(q(32) * cv.c_squared * cv.c_squared).inverse());
    }
  }
  RecursionEngine airy(CurveSpec::airy());
  EXPECT_TRUE(compare_with_assembly(airy, m).exact);
}

INSTANTIATE_TEST_SUITE_P(Orders, AssemblyTest, ::testing::Values(2, 3, 4, 5));

TEST(Wkb, SpecializedRecursion) {
  for (const auto& cv : {CurveSpec::harmonic_oscillator(), CurveSpec::harmonic_oscillator(q(7, 5), 1)}) {
    RecursionEngine e(cv);
    int checked = 0;
    for (int l = 1; l <= 4; ++l)
      for (auto [g, n] : level_pairs(l)) {
        if (!specialized_recursion_applies(g, n)) continue;
        const auto [lhs, rhs] = specialized_recursion_sides(e, g, n);
        EXPECT_EQ(lhs, rhs) << g << "," << n;
        ++checked;
      }
    EXPECT_GT(checked, 3);
  }
  EXPECT_FALSE(specialized_recursion_applies(0, 3));
  RecursionEngine airy(CurveSpec::airy());
  EXPECT_THROW(specialized_recursion_sides(airy, 1, 2), Error);
}

TEST(Energy, Residues) {
  for (const Rational& c2 : {q(2), q(5, 7), q(-3)}) {
    const auto [first, second] = energy_residues(CurveSpec::harmonic_oscillator(c2));
    EXPECT_EQ(first, c2 / q(2));
    EXPECT_EQ(second, q(-1));
  }
  EXPECT_THROW(energy_residues(CurveSpec::airy()), Error);
}

TEST(Energy, Quantization) {
  for (int n = 0; n <= 3; ++n) EXPECT_EQ(quantized_level(q(2 * n + 1), q(1)), q(n));
  EXPECT_EQ(quantized_level(q(5, 2), q(1, 2)), q(2));
  EXPECT_THROW(quantized_level(q(1), q(0)), Error);
  EXPECT_EQ(energy_level(q(1), q(1)), q(3, 2));
  EXPECT_EQ(energy_level(q(0), q(1, 3), q(6)), q(1));
  EXPECT_EQ(s1_contour_contribution(CurveSpec::harmonic_oscillator()), q(-1, 2));
  EXPECT_EQ(s1_contour_contribution(CurveSpec::harmonic_oscillator(q(11, 3), 1)), q(-1, 2));
}

TEST(Wkb, LevelSixWithinBudget) {
  const auto start = std::chrono::steady_clock::now();
  const CurveSpec cv = CurveSpec::harmonic_oscillator();
  RecursionEngine e(cv);
  e.compute_through_level(5, 4);
  const WkbSeries s = wkb_extend(wkb_initial(cv), 6);
  for (int m = 2; m <= 6; ++m) EXPECT_NO_THROW(compare_with_assembly(e, s, m));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(secs, 30.0);
}

}  // namespace
