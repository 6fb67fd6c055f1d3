#include <filesystem>
#include <fstream>

#include "support.hpp"

namespace {

using namespace spectral;
using spectral::testing::poly;
using spectral::testing::q;
using spectral::testing::symmetrized;

LaurentPolynomial uni(std::initializer_list<std::pair<int, Rational>> t) { return LaurentPolynomial::univariate(t); }

std::vector<CurveSpec> ho_variants() {
  return {CurveSpec::harmonic_oscillator(q(2), -1), CurveSpec::harmonic_oscillator(q(2), 1),
          CurveSpec::harmonic_oscillator(q(3, 7), -1), CurveSpec::harmonic_oscillator(q(-5), 1)};
}

TEST(Residues, BasicExamples) {
  const CurveSpec ho = CurveSpec::harmonic_oscillator();
  // -(1 - z1^2)^3 / (32 z1^4)
  const auto expected = lp_shift(lp_pow(uni({{0, 1}, {2, -1}}), 3), 0, -4) * q(-1, 32);
  EXPECT_EQ(residue_basic_closed(ho, 1), expected);
  EXPECT_EQ(residue_basic_closed(CurveSpec::airy(), 1), uni({{-4, q(-1, 4)}}));
  EXPECT_TRUE(residue_basic_closed(CurveSpec::airy(), -2).is_zero());
  for (const auto& cv : ho_variants())
    for (int k = -3; k <= 4; ++k) EXPECT_EQ(residue_basic_closed(cv, k), residue_basic_series(cv, k)) << k;
}

TEST(Residues, UnstableClosedFormMatchesSeries) {
  for (const auto& cv : ho_variants())
    for (int k : {0, 3, -2, 5}) EXPECT_EQ(residue_unstable_closed(cv, k), residue_unstable_series(cv, k)) << k;
}

TEST(Residues, HalvesRecombine) {
  for (const auto& cv : ho_variants()) {
    for (int k = -2; k <= 4; ++k) {
      EXPECT_EQ(residue_unstable_half_at_zero(cv, k) + residue_unstable_half_at_infinity(cv, k),
                residue_unstable_closed(cv, k))
          << k;
    }
  }
}

TEST(Residues, CurlyDSpecialization) {
  const auto z2m1 = uni({{2, 1}, {0, -1}});
  for (int a = 1; a <= 6; ++a) {
    const LaurentPolynomial lhs = lp_specialize(curlyD_action(a)) * q(-(2 * a - 1));
    const LaurentPolynomial closed =
        lp_shift(z2m1 * z2m1 * uni({{2, a - 2}, {0, -a - 1}}), 0, -2 * a - 3) * q(-(2 * a - 1));
    EXPECT_EQ(lhs, closed) << a;
    // -z^2/(2 (z^2-1)^3) A^2 z^-(2a-1) with A = (z^2-1)^3 z^-2 d/dz.
    auto A = [&](const LaurentPolynomial& f) { return lp_shift(lp_pow(z2m1, 3) * lp_diff(f, 0), 0, -2); };
    const auto a2 = A(A(uni({{-(2 * a - 1), 1}})));
    EXPECT_EQ(lhs, lp_shift(lp_exact_div(a2, lp_pow(z2m1, 3), 0), 0, 2) * q(-1, 2)) << a;
  }
  const std::vector<Rational> at{q(3, 2)};
  const Rational spot = (lp_specialize(curlyD_action(1)) * q(-1)).evaluate(at);
  // -(z^2-1)^2 (-z^2 - 2) / z^5 at z = 3/2
  EXPECT_EQ(spot, q(-1) * q(5, 4) * q(5, 4) * (q(-9, 4) - q(2)) / q(243, 32));
}

TEST(Recursion, HoFirstLevel) {
  for (const auto& cv : ho_variants()) {
    RecursionEngine e(cv);
    const Rational eps(cv.epsilon);
    const LaurentPolynomial w03 = poly(3, {{{0, 0, 0}, q(1)}, {{-2, -2, -2}, q(-1)}}) * (eps / (q(8) * cv.c_squared));
    EXPECT_EQ(e.compute(0, 3)->poly, w03);
    const LaurentPolynomial w11 =
        lp_shift(lp_pow(uni({{2, 1}, {0, -1}}), 3), 0, -4) * (eps / (q(64) * cv.c_squared));
    EXPECT_EQ(e.compute(1, 1)->poly, w11);
  }
}

TEST(Recursion, HoSecondLevel) {
  for (const auto& cv : ho_variants()) {
    RecursionEngine e(cv, nullptr, Backend::both);
    const Rational c4 = cv.c_squared * cv.c_squared;
    LaurentPolynomial w04 = symmetrized({-4, -2, -2, -2}, q(3)) + symmetrized({-2, -2, -2, -2}, q(-9)) +
                            symmetrized({-2, -2, 0, 0}, q(-1)) + symmetrized({0, 0, 0, 0}, q(-9)) +
                            symmetrized({2, 0, 0, 0}, q(3));
    EXPECT_EQ(e.compute(0, 4)->poly, w04 * (q(64) * c4).inverse());
    LaurentPolynomial w12 = symmetrized({-2, -6}, q(5)) + symmetrized({-4, -4}, q(3)) +
                            symmetrized({-2, -4}, q(-18)) + symmetrized({-2, -2}, q(27)) +
                            symmetrized({-2, 0}, q(-4)) + symmetrized({0, 0}, q(27)) + symmetrized({2, 0}, q(-18)) +
                            symmetrized({4, 0}, q(5)) + symmetrized({2, 2}, q(3));
    EXPECT_EQ(w12.size(), 14u);
    EXPECT_EQ(e.compute(1, 2)->poly, w12 * (q(512) * c4).inverse());
  }
}

TEST(Recursion, AiryValues) {
  RecursionEngine e(CurveSpec::airy(), nullptr, Backend::both);
  EXPECT_EQ(e.compute(0, 3)->poly, poly(3, {{{-2, -2, -2}, q(1, 2)}}));
  EXPECT_EQ(e.compute(1, 1)->poly, uni({{-4, q(1, 16)}}));
  EXPECT_EQ(e.compute(0, 4)->poly, symmetrized({-4, -2, -2, -2}, q(3, 4)));
  EXPECT_EQ(e.compute(1, 2)->poly, symmetrized({-2, -6}, q(5, 32)) + symmetrized({-4, -4}, q(3, 32)));
  EXPECT_EQ(e.compute(0, 5)->poly,
            symmetrized({-6, -2, -2, -2, -2}, q(15, 8)) + symmetrized({-4, -4, -2, -2, -2}, q(18, 8)));
  EXPECT_EQ(e.compute(1, 3)->poly, symmetrized({-8, -2, -2}, q(35, 64)) + symmetrized({-6, -4, -2}, q(15, 32)) +
                                       symmetrized({-4, -4, -4}, q(9, 32)));
  EXPECT_EQ(e.compute(2, 1)->poly, uni({{-10, q(105, 1024)}}));
}

TEST(Recursion, BackendsAgreeAtGenusTwo) {
  const CurveSpec cv = CurveSpec::harmonic_oscillator();
  RecursionEngine closed(cv, nullptr, Backend::closed_form);
  RecursionEngine series(cv, nullptr, Backend::series);
  EXPECT_EQ(serialize(closed.compute(2, 1)->poly), serialize(series.compute(2, 1)->poly));
  RecursionEngine both(cv, nullptr, Backend::both);
  EXPECT_NO_THROW(both.compute(2, 2));
}

TEST(Recursion, RejectsUnstable) {
  RecursionEngine e(CurveSpec::harmonic_oscillator());
  EXPECT_THROW(e.compute(0, 2), StabilityError);
  EXPECT_THROW(e.compute(0, 1), StabilityError);
  EXPECT_THROW(e.compute(1, 0), StabilityError);
  EXPECT_THROW(compute_w(CurveSpec::airy(), -1, 5), StabilityError);
}

TEST(Recursion, InvariantsThroughLevelFive) {
  for (const auto& cv : {CurveSpec::harmonic_oscillator(), CurveSpec::harmonic_oscillator(q(5, 2), 1),
                         CurveSpec::airy()}) {
    RecursionEngine e(cv);
    e.compute_through_level(5);
    for (int l = 1; l <= 5; ++l)
      for (auto [g, n] : level_pairs(l)) {
        const auto w = e.compute(g, n);
        EXPECT_NO_THROW(w->validate()) << g << "," << n;
        EXPECT_TRUE(is_symmetric(w->poly));
      }
  }
}

TEST(MultiDifferential, ValidationCatchesDefects) {
  const CurveSpec cv = CurveSpec::harmonic_oscillator();
  const LaurentPolynomial good = compute_w(cv, 0, 3).poly;
  MultiDifferential asym{0, 3, cv, good + poly(3, {{{2, 0, 0}, q(1)}, {{-4, -2, -2}, q(-1)}})};
  EXPECT_THROW(asym.validate(), InvariantViolation);
  MultiDifferential odd{0, 3, cv, good + symmetrized({1, 1, 1}, q(1))};
  EXPECT_THROW(odd.validate(), InvariantViolation);
  MultiDifferential unpaired{0, 3, cv, good + symmetrized({2, 2, 2}, q(1))};
  EXPECT_THROW(unpaired.validate(), InvariantViolation);
  MultiDifferential airy{0, 3, CurveSpec::airy(), symmetrized({-2, -2, 0}, q(1))};
  EXPECT_THROW(airy.validate(), InvariantViolation);
}

TEST(Recursion, ParallelLevelsMatchSequential) {
  const CurveSpec cv = CurveSpec::harmonic_oscillator(q(3));
  RecursionEngine seq(cv);
  RecursionEngine par(cv);
  seq.compute_through_level(5, 1);
  par.compute_through_level(5, 8);
  for (int l = 1; l <= 5; ++l)
    for (auto [g, n] : level_pairs(l))
      EXPECT_EQ(serialize(seq.compute(g, n)->poly), serialize(par.compute(g, n)->poly));
}

class MemoStoreDisk : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("spectral_cache_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

TEST_F(MemoStoreDisk, RoundTripIsByteIdentical) {
  const CurveSpec cv = CurveSpec::harmonic_oscillator(q(7, 3), 1);
  RecursionEngine cold(cv, std::make_shared<MemoStore>(dir_));
  cold.compute_through_level(3);
  const auto path = cold.store().file_for(cv, 1, 2);
  ASSERT_TRUE(std::filesystem::exists(path));

  auto warm_store = std::make_shared<MemoStore>(dir_);
  RecursionEngine warm(cv, warm_store);
  const auto loaded = warm_store->load(cv, 1, 2);
  ASSERT_NE(loaded, nullptr);
  EXPECT_EQ(serialize(loaded->poly), serialize(cold.compute(1, 2)->poly));
  EXPECT_EQ(serialize(warm.compute(2, 1)->poly), serialize(compute_w(cv, 2, 1).poly));

  std::ifstream in(path);
  const auto j = ordered_json::parse(in);
  EXPECT_EQ(j["meta"]["curve"], "ho");
  EXPECT_EQ(j["meta"]["c2"], "7/3");
  EXPECT_EQ(j["meta"]["eps"], 1);
  EXPECT_EQ(j["meta"]["g"], 1);
  EXPECT_EQ(j["meta"]["n"], 2);
}

TEST_F(MemoStoreDisk, KeyIncludesParameters) {
  RecursionEngine a(CurveSpec::harmonic_oscillator(q(2), -1), std::make_shared<MemoStore>(dir_));
  RecursionEngine b(CurveSpec::harmonic_oscillator(q(2), 1), std::make_shared<MemoStore>(dir_));
  EXPECT_EQ(a.compute(1, 1)->poly, -b.compute(1, 1)->poly);
}

TEST_F(MemoStoreDisk, TamperedEntryIsDetected) {
  const CurveSpec cv = CurveSpec::harmonic_oscillator();
  {
    RecursionEngine e(cv, std::make_shared<MemoStore>(dir_));
    e.compute(1, 1);
  }
  // Doubling every coefficient keeps symmetry and pairing intact, so only
  // the recomputation can notice.
  const auto path = MemoStore(dir_).file_for(cv, 1, 1);
  std::ifstream in(path);
  auto j = ordered_json::parse(in);
  in.close();
  for (auto& t : j["terms"]) t["coef"] = (Rational::parse(t["coef"].get<std::string>()) * q(2)).str();
  std::ofstream(path) << j.dump() << '\n';

  RecursionEngine e(cv, std::make_shared<MemoStore>(dir_));
  EXPECT_THROW(e.compute(1, 1), InvariantViolation);
}

}  // namespace
