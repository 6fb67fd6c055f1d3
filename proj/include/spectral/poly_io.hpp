#pragma once

#include <json.hpp>

#include <sstream>
#include <string>
#include <string_view>

#include "spectral/laurent.hpp"

namespace spectral {

using ordered_json = nlohmann::ordered_json;

/// {"arity": n, "terms": [{"exp": [...], "coef": "p/q"}, ...]} in canonical order.
inline ordered_json to_json(const LaurentPolynomial& p) {
  ordered_json terms = ordered_json::array();
  for (const auto& [e, c] : p.terms()) {
    ordered_json t;
    t["exp"] = e;
    t["coef"] = c.str();
    terms.push_back(std::move(t));
  }
  ordered_json j;
  j["arity"] = p.arity();
  j["terms"] = std::move(terms);
  return j;
}

inline LaurentPolynomial polynomial_from_json(const ordered_json& j) {
  try {
    const auto arity = j.at("arity").get<std::size_t>();
    LaurentPolynomial p(arity);
    for (const auto& t : j.at("terms")) {
      auto e = t.at("exp").get<Exponents>();
      if (e.size() != arity) throw ParseError("term exponent length differs from arity");
      if (p.terms().contains(e)) throw ParseError("duplicate exponent vector");
      Rational c = Rational::parse(t.at("coef").get<std::string>());
      if (c.is_zero()) throw ParseError("zero coefficient stored");
      p.add_term(std::move(e), c);
    }
    return p;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("polynomial JSON: ") + ex.what());
  }
}

inline std::string serialize(const LaurentPolynomial& p) { return to_json(p).dump(); }

inline LaurentPolynomial parse_polynomial(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("polynomial JSON: ") + ex.what());
  }
  return polynomial_from_json(j);
}

/// ASCII rendering, e.g. "-1/16 + 1/16*z1^-2*z2^-2*z3^-2". A single
/// variable is printed without an index.
inline std::string to_plain(const LaurentPolynomial& p, std::string_view var = "z") {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    Rational mag = c.sign() < 0 ? -c : c;
    if (first) {
      if (c.sign() < 0) os << '-';
    } else {
      os << (c.sign() < 0 ? " - " : " + ");
    }
    first = false;
    bool any_var = false;
    std::ostringstream vars;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (any_var) vars << '*';
      vars << var;
      if (e.size() > 1) vars << (i + 1);
      if (e[i] != 1) vars << '^' << e[i];
      any_var = true;
    }
    if (!any_var) {
      os << mag.str();
    } else if (mag.is_one()) {
      os << vars.str();
    } else {
      os << mag.str() << '*' << vars.str();
    }
  }
  return os.str();
}

inline std::string latex_rational(const Rational& r) {
  if (r.is_integer()) return r.str();
  return "\\frac{" + r.numerator().get_str() + "}{" + r.denominator().get_str() + "}";
}

/// LaTeX rendering; `differential` appends the dz_{[n]} shorthand.
inline std::string to_latex(const LaurentPolynomial& p, std::string_view var = "z", bool differential = false) {
  std::ostringstream os;
  if (p.is_zero()) {
    os << "0";
  } else {
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
      Rational mag = c.sign() < 0 ? -c : c;
      if (first) {
        if (c.sign() < 0) os << '-';
      } else {
        os << (c.sign() < 0 ? " - " : " + ");
      }
      first = false;
      bool any_var = false;
      std::ostringstream vars;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        vars << var << "_{" << (i + 1) << "}";
        if (e[i] != 1) vars << "^{" << e[i] << "}";
        any_var = true;
      }
      if (!any_var || !mag.is_one()) os << latex_rational(mag);
      if (any_var) os << (mag.is_one() ? "" : " ") << vars.str();
    }
  }
  if (differential && p.arity() > 0) {
    if (p.arity() == 1)
      os << " \\, d" << var << "_{1}";
    else
      os << " \\, d" << var << "_{[" << p.arity() << "]}";
  }
  return os.str();
}

}  // namespace spectral
