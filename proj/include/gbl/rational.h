/*******************************************************************************
 * Exact rationals and affine threshold bounds.
 *
 * Every threshold comparison in the solvers goes through these types; values
 * are compared by 128-bit cross multiplication, never through floating point.
 *
 * @file:   rational.h
 ******************************************************************************/
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "gbl/common.h"

namespace gbl {

using Int128 = __int128;

class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  // Accepts exactly "p/q" with optional leading minus; floats are rejected.
  static Rational parse(std::string_view text);

  [[nodiscard]] std::int64_t num() const { return _num; }
  [[nodiscard]] std::int64_t den() const { return _den; }

  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] std::int64_t floor() const;
  [[nodiscard]] double to_double() const { return static_cast<double>(_num) / static_cast<double>(_den); }

  friend Rational operator+(const Rational &a, const Rational &b);
  friend Rational operator-(const Rational &a, const Rational &b);
  friend Rational operator*(const Rational &a, const Rational &b);
  friend Rational operator/(const Rational &a, const Rational &b);

  friend bool operator==(const Rational &a, const Rational &b) = default;
  friend std::strong_ordering operator<=>(const Rational &a, const Rational &b);

private:
  static Rational from_wide(Int128 num, Int128 den);

  std::int64_t _num = 0;
  std::int64_t _den = 1;
};

// The bound coeff * t + offset, compared exactly against integer loads.
struct AffineBound {
  Rational coeff;
  Weight t = 0;
  Weight offset = 0;

  // x <= bound
  [[nodiscard]] bool admits(Weight x) const { return compare(x) <= 0; }
  // x > bound
  [[nodiscard]] bool exceeded_by(Weight x) const { return compare(x) > 0; }
  // x < bound
  [[nodiscard]] bool strictly_above(Weight x) const { return compare(x) < 0; }

  [[nodiscard]] Rational value() const;

  // Sign of x - bound.
  [[nodiscard]] int compare(Weight x) const;
};

} // namespace gbl
