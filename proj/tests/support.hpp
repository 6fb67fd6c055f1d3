#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "spectral/spectral.hpp"

namespace spectral::testing {

inline Rational q(long p, long d = 1) { return Rational(p, d); }

/// Sum of c * prod z_i^{e_i} over all distinct permutations of `e`.
inline LaurentPolynomial symmetrized(Exponents e, const Rational& c) {
  LaurentPolynomial p(e.size());
  std::sort(e.begin(), e.end());
  do {
    p.add_term(e, c);
  } while (std::next_permutation(e.begin(), e.end()));
  return p;
}

inline LaurentPolynomial poly(std::size_t arity, std::initializer_list<std::pair<Exponents, Rational>> terms) {
  LaurentPolynomial p(arity);
  for (const auto& [e, c] : terms) p.add_term(e, c);
  return p;
}

/// Random sparse polynomial with small exponents and coefficients.
inline LaurentPolynomial random_poly(std::mt19937& rng, std::size_t arity, int terms, int span = 4) {
  LaurentPolynomial p(arity);
  for (int t = 0; t < terms; ++t) {
    Exponents e(arity);
    for (auto& k : e) k = static_cast<int>(rng() % static_cast<unsigned>(2 * span + 1)) - span;
    const long num = static_cast<long>(rng() % 19) - 9;
    const long den = static_cast<long>(rng() % 5) + 1;
    p.add_term(e, Rational(num, den));
  }
  return p;
}

}  // namespace spectral::testing
