#pragma once

// Evaluation of trigonometric sums
//
//   S(x) = sum_k c_k cos((k+q) x) + s_k sin((k+q) x)
//
// by rotating (cos, sin) of the running angle with the angle-addition
// recurrence seeded by cos(x), sin(x). One transcendental pair per point,
// four multiplies per term. q is a rational offset (0 for ordinary
// polynomials, n/2, (n+1)/4 or l/2 for the reduced factors).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rtz/rational.hpp"

namespace rtz {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// One draw of (a_j) and, for full trigonometric polynomials, (b_j).
/// b[0] multiplies sin(0 x) and is always 0.
struct coefficient_vector {
  std::vector<double> a;
  std::optional<std::vector<double>> b;

  int degree() const { return static_cast<int>(a.size()) - 1; }
  bool full_trig() const { return b.has_value(); }
};

/// Non-owning view used by every evaluator.
struct series_view {
  std::span<const double> cos_coef;
  std::span<const double> sin_coef;  // empty, or same length as cos_coef
  double offset = 0.0;

  series_view() = default;
  series_view(std::span<const double> c, std::span<const double> s = {}, double q = 0.0)
      : cos_coef(c), sin_coef(s), offset(q) {}
  series_view(const coefficient_vector& v)  // NOLINT(google-explicit-constructor)
      : cos_coef(v.a), sin_coef(v.b ? std::span<const double>(*v.b) : std::span<const double>{}) {}

  std::size_t terms() const { return cos_coef.size(); }
};

/// Owning trigonometric series with a rational frequency offset.
struct trig_series {
  rational offset{0};
  std::vector<double> cos_coef;
  std::vector<double> sin_coef;

  operator series_view() const {  // NOLINT(google-explicit-constructor)
    return {cos_coef, sin_coef, offset.value()};
  }

  static trig_series from(const coefficient_vector& v) {
    trig_series s;
    s.cos_coef = v.a;
    if (v.b) s.sin_coef = *v.b;
    return s;
  }
};

namespace detail {

// Evaluates W points in lock step. Every lane performs exactly the operations
// of the W == 1 instantiation, so grid and pointwise results are bit-identical.
template <std::size_t W>
void eval_block(series_view s, const double* xs, double* val, double* der) {
  std::array<double, W> cr, sr, cs, sn, v{}, d{};
  for (std::size_t l = 0; l < W; ++l) {
    cs[l] = std::cos(xs[l]);
    sn[l] = std::sin(xs[l]);
    if (s.offset == 0.0) {
      cr[l] = 1.0;
      sr[l] = 0.0;
    } else {
      cr[l] = std::cos(s.offset * xs[l]);
      sr[l] = std::sin(s.offset * xs[l]);
    }
  }
  const std::size_t terms = s.cos_coef.size();
  const bool has_sin = !s.sin_coef.empty();
  for (std::size_t k = 0; k < terms; ++k) {
    const double ck = s.cos_coef[k];
    const double sk = has_sin ? s.sin_coef[k] : 0.0;
    const double freq = static_cast<double>(k) + s.offset;
    for (std::size_t l = 0; l < W; ++l) {
      if (has_sin) {
        v[l] += ck * cr[l] + sk * sr[l];
        if (der) d[l] += freq * (sk * cr[l] - ck * sr[l]);
      } else {
        v[l] += ck * cr[l];
        if (der) d[l] -= freq * (ck * sr[l]);
      }
      const double next_c = cr[l] * cs[l] - sr[l] * sn[l];
      const double next_s = sr[l] * cs[l] + cr[l] * sn[l];
      cr[l] = next_c;
      sr[l] = next_s;
    }
  }
  for (std::size_t l = 0; l < W; ++l) {
    if (val) val[l] = v[l];
    if (der) der[l] = d[l];
  }
}

inline constexpr std::size_t kLanes = 8;

inline void eval_many(series_view s, std::span<const double> xs, double* val, double* der) {
  std::size_t i = 0;
  for (; i + kLanes <= xs.size(); i += kLanes)
    eval_block<kLanes>(s, xs.data() + i, val ? val + i : nullptr, der ? der + i : nullptr);
  for (; i < xs.size(); ++i) eval_block<1>(s, xs.data() + i, val ? val + i : nullptr, der ? der + i : nullptr);
}

}  // namespace detail

inline double evaluate(series_view s, double x) {
  double v = 0.0;
  detail::eval_block<1>(s, &x, &v, nullptr);
  return v;
}

inline double evaluate_derivative(series_view s, double x) {
  double d = 0.0;
  double v = 0.0;
  detail::eval_block<1>(s, &x, &v, &d);
  return d;
}

/// (value, derivative) in one pass.
inline std::pair<double, double> evaluate_with_derivative(series_view s, double x) {
  double v = 0.0;
  double d = 0.0;
  detail::eval_block<1>(s, &x, &v, &d);
  return {v, d};
}

/// Ordered evaluation points in [0, 2pi].
struct eval_request {
  std::vector<double> points;

  void validate() const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!(points[i] >= 0.0 && points[i] <= two_pi))
        throw std::invalid_argument("eval_request: point outside [0, 2pi]");
      if (i > 0 && !(points[i] > points[i - 1]))
        throw std::invalid_argument("eval_request: points must be strictly increasing");
    }
  }
};

/// Values at arbitrary points; no ordering requirement.
inline std::vector<double> evaluate_points(series_view s, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  detail::eval_many(s, xs, out.data(), nullptr);
  return out;
}

inline std::vector<double> evaluate_grid(series_view s, const eval_request& grid) {
  grid.validate();
  return evaluate_points(s, grid.points);
}

/// sum |c_k| + |s_k|
inline double abs_coefficient_sum(series_view s) {
  double total = 0.0;
  for (double c : s.cos_coef) total += std::abs(c);
  for (double c : s.sin_coef) total += std::abs(c);
  return total;
}

/// Upper bound on sup |S''| : sum (k+q)^2 (|c_k| + |s_k|).
inline double second_derivative_bound(series_view s) {
  double total = 0.0;
  for (std::size_t k = 0; k < s.cos_coef.size(); ++k) {
    const double f = static_cast<double>(k) + s.offset;
    double mag = std::abs(s.cos_coef[k]);
    if (!s.sin_coef.empty()) mag += std::abs(s.sin_coef[k]);
    total += f * f * mag;
  }
  return total;
}

}  // namespace rtz
