#pragma once

#include <gmpxx.h>

#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "gqw/errors.hpp"

namespace gqw {

/// Exact rational scalar. GMP keeps it canonical: gcd(|p|, q) = 1, q >= 1,
/// zero stored as 0/1.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long numerator, long denominator = 1) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  Rational r{Integer(numerator), Integer(denominator)};
  r.canonicalize();
  return r;
}

/// Accepts "p", "p/q", with an optional leading sign. Returns nullopt on any
/// other input, including q = 0.
inline std::optional<Rational> try_parse_rational(std::string_view text) {
  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](std::size_t from) {
    std::size_t end = from;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    return end;
  };
  const std::size_t num_end = digits(pos);
  if (num_end == pos) return std::nullopt;
  std::string numerator(text.substr(pos, num_end - pos));
  std::string denominator = "1";
  if (num_end < text.size()) {
    if (text[num_end] != '/') return std::nullopt;
    const std::size_t den_end = digits(num_end + 1);
    if (den_end == num_end + 1 || den_end != text.size()) return std::nullopt;
    denominator = std::string(text.substr(num_end + 1, den_end - num_end - 1));
  }
  Integer p(numerator, 10);
  Integer q(denominator, 10);
  if (q == 0) return std::nullopt;
  if (negative) p = -p;
  Rational r{p, q};
  r.canonicalize();
  return r;
}

inline Rational parse_rational(std::string_view text) {
  auto r = try_parse_rational(text);
  if (!r) throw InputError("not a rational number: '" + std::string(text) + "'");
  return *r;
}

/// Canonical rendering: "p/q", or "p" when q = 1.
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace gqw
