#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "spectral/errors.hpp"

namespace spectral {

/// Exact rational number, always in lowest terms with a positive denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : value_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(int v) : value_(v) {}   // NOLINT(google-explicit-constructor)
  Rational(long num, long den) : value_(num, den) {
    if (den == 0) throw Error("Rational: zero denominator");
    value_.canonicalize();
  }
  explicit Rational(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }

  /// Parses "p/q" or "p" (optional sign on p).
  static Rational parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw ParseError("empty rational");
    auto slash = s.find('/');
    auto valid_int = [](const std::string& t, bool allow_sign) {
      if (t.empty()) return false;
      std::size_t i = 0;
      if (allow_sign && (t[0] == '-' || t[0] == '+')) i = 1;
      if (i == t.size()) return false;
      for (; i < t.size(); ++i)
        if (t[i] < '0' || t[i] > '9') return false;
      return true;
    };
    std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!valid_int(num, true) || !valid_int(den, false))
      throw ParseError("malformed rational '" + s + "'");
    if (num[0] == '+') num.erase(0, 1);
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw ParseError("zero denominator in '" + s + "'");
    return Rational(mpq_class(n, d));
  }

  [[nodiscard]] std::string str() const {
    if (value_.get_den() == 1) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
  }

  [[nodiscard]] bool is_zero() const { return sgn(value_) == 0; }
  [[nodiscard]] bool is_one() const { return value_ == 1; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] const mpq_class& raw() const { return value_; }
  [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }

  [[nodiscard]] Rational inverse() const {
    if (is_zero()) throw Error("Rational: inverse of zero");
    return Rational(mpq_class(1) / value_);
  }

  /// Integer power; negative exponents invert.
  [[nodiscard]] Rational pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    mpz_class n, d;
    mpz_pow_ui(n.get_mpz_t(), value_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), value_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return Rational(mpq_class(n, d));
  }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw Error("Rational: division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  mpq_class value_{0};
};

/// (2a+1)!! for a >= -1, i.e. 1*3*...*(2a+1); (-1)!! = 1.
inline Rational double_factorial_odd(int a) {
  Rational r(1);
  for (int k = 1; k <= 2 * a + 1; k += 2) r *= Rational(k);
  return r;
}

inline Rational factorial(int n) {
  Rational r(1);
  for (int k = 2; k <= n; ++k) r *= Rational(k);
  return r;
}

}  // namespace spectral
