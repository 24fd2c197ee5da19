/*******************************************************************************
 * @file:   rational.cc
 ******************************************************************************/
#include "gbl/rational.h"

#include <charconv>

namespace gbl {

namespace {
Int128 gcd128(Int128 a, Int128 b) {
  if (a < 0) {
    a = -a;
  }
  if (b < 0) {
    b = -b;
  }
  while (b != 0) {
    const Int128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

bool fits64(Int128 x) {
  return x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(std::string_view text) {
  std::int64_t value = 0;
  const auto *first = text.data();
  const auto *last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw InputError("invalid integer '" + std::string(text) + "' in fraction");
  }
  return value;
}
} // namespace

std::string to_string(SolveMode mode) {
  return mode == SolveMode::kTwoValued ? "two_valued" : "general";
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) {
    throw std::domain_error("rational with zero denominator");
  }
  *this = from_wide(num, den);
}

Rational Rational::from_wide(Int128 num, Int128 den) {
  if (den == 0) {
    throw std::domain_error("rational with zero denominator");
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const Int128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (!fits64(num) || !fits64(den)) {
    throw std::overflow_error("rational overflow");
  }
  Rational r;
  r._num = static_cast<std::int64_t>(num);
  r._den = static_cast<std::int64_t>(den);
  return r;
}

Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    throw InputError("expected an exact fraction p/q, got '" + std::string(text) + "'");
  }
  const std::int64_t p = parse_int(text.substr(0, slash));
  const std::int64_t q = parse_int(text.substr(slash + 1));
  if (q <= 0) {
    throw InputError("fraction denominator must be positive in '" + std::string(text) + "'");
  }
  return Rational(p, q);
}

std::string Rational::to_string() const {
  return std::to_string(_num) + "/" + std::to_string(_den);
}

std::int64_t Rational::floor() const {
  std::int64_t q = _num / _den;
  if ((_num % _den != 0) && (_num < 0)) {
    --q;
  }
  return q;
}

Rational operator+(const Rational &a, const Rational &b) {
  return Rational::from_wide(
      static_cast<Int128>(a._num) * b._den + static_cast<Int128>(b._num) * a._den,
      static_cast<Int128>(a._den) * b._den
  );
}

Rational operator-(const Rational &a, const Rational &b) {
  return Rational::from_wide(
      static_cast<Int128>(a._num) * b._den - static_cast<Int128>(b._num) * a._den,
      static_cast<Int128>(a._den) * b._den
  );
}

Rational operator*(const Rational &a, const Rational &b) {
  return Rational::from_wide(static_cast<Int128>(a._num) * b._num, static_cast<Int128>(a._den) * b._den);
}

Rational operator/(const Rational &a, const Rational &b) {
  return Rational::from_wide(static_cast<Int128>(a._num) * b._den, static_cast<Int128>(a._den) * b._num);
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
  const Int128 lhs = static_cast<Int128>(a._num) * b._den;
  const Int128 rhs = static_cast<Int128>(b._num) * a._den;
  if (lhs < rhs) {
    return std::strong_ordering::less;
  }
  if (lhs > rhs) {
    return std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

Rational AffineBound::value() const {
  return coeff * Rational(t) + Rational(offset);
}

int AffineBound::compare(Weight x) const {
  // x - (num/den * t + offset)  ~  (x - offset) * den - num * t
  const Int128 lhs = (static_cast<Int128>(x) - offset) * coeff.den();
  const Int128 rhs = static_cast<Int128>(coeff.num()) * t;
  return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

} // namespace gbl
