#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace rtz {

/// Reduced fraction num/den with den > 0. Used for the half- and
/// quarter-integer frequencies that appear after factoring out a
/// deterministic cosine.
struct rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  constexpr rational() = default;
  constexpr rational(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const auto g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  constexpr bool is_integer() const { return den == 1; }

  friend constexpr bool operator==(const rational&, const rational&) = default;
  friend constexpr rational operator*(const rational& a, const rational& b) {
    return {a.num * b.num, a.den * b.den};
  }
  friend constexpr rational operator+(const rational& a, const rational& b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
};

}  // namespace rtz
