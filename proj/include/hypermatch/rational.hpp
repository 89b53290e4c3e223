#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hypermatch {

/// Exact arbitrary-precision rational, always kept in canonical (reduced) form.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) {
    throw std::invalid_argument("rational with zero denominator");
  }
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Renders as reduced "p/q", including integers ("3/1") so the text is
/// unambiguous and round-trips through parse_rational.
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

/// Accepts "p/q", "p" and decimal literals such as "0.125" or "-2.5".
/// Decimals are read exactly as p/10^d.
inline Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
      s.remove_suffix(1);
    }
    return s;
  };
  text = trim(text);
  if (text.empty()) {
    throw std::invalid_argument("empty rational literal");
  }
  auto is_integer = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  auto to_integer = [](std::string_view s) {
    std::string buf(s);
    if (!buf.empty() && buf.front() == '+') buf.erase(0, 1);
    return Integer(buf, 10);
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = trim(text.substr(0, slash));
    auto den = trim(text.substr(slash + 1));
    if (!is_integer(num) || !is_integer(den) || den.front() == '-' || den.front() == '+') {
      throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    }
    Integer d = to_integer(den);
    if (d == 0) {
      throw std::invalid_argument("rational with zero denominator");
    }
    Rational r(to_integer(num), d);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto whole = text.substr(0, dot);
    auto frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !is_integer(whole)) ||
        (!frac.empty() && !is_integer(frac)) || (!frac.empty() && (frac.front() == '-' || frac.front() == '+'))) {
      throw std::invalid_argument("malformed decimal literal '" + std::string(text) + "'");
    }
    std::string digits = std::string(whole) + std::string(frac);
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Rational r(Integer(digits.empty() ? "0" : digits, 10), scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  if (!is_integer(text)) {
    throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
  }
  return Rational(to_integer(text));
}

inline Integer binomial(std::uint64_t n, std::uint64_t k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// Binomial coefficient as an unsigned 64-bit value; throws when it does not fit.
inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
  Integer b = binomial(n, k);
  if (!b.fits_ulong_p()) {
    throw std::overflow_error("binomial coefficient exceeds 64 bits");
  }
  return b.get_ui();
}

/// Binomial with the convention C(n, k) = 0 for n < 0 or k < 0 or k > n.
inline Integer binomial_signed(long n, long k) {
  if (n < 0 || k < 0 || k > n) return Integer(0);
  return binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k));
}

inline Integer ceil(const Rational& r) {
  Integer out;
  mpz_cdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline Integer floor(const Rational& r) {
  Integer out;
  mpz_fdiv_q(out.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return out;
}

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational out(1);
  for (unsigned i = 0; i < exponent; ++i) out *= base;
  return out;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline long to_long(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer exceeds long");
  return z.get_si();
}

}  // namespace hypermatch
