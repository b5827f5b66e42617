#pragma once

// Kac-Rice kernel triple
//
//   A(x) = sum g_i(x)^2,  B(x) = sum g_i(x) g_i'(x),  C(x) = sum g_i'(x)^2
//
// over an effective basis, plus the closed-form Dirichlet sums, the
// leading-order kernel forms of the block schemes and the asymptotic
// zero-count laws used as oracles.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rtz/errors.hpp"
#include "rtz/schemes.hpp"

namespace rtz {

struct kernel_triple {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;

  /// A C - B^2, which Cauchy-Schwarz keeps >= 0 up to roundoff.
  double discriminant() const { return A * C - B * B; }
};

namespace detail {

// cos/sin((k + q) x) for k = 0..kmax via the rotation recurrence.
inline void trig_table(double q, double x, int kmax, std::vector<double>& cs, std::vector<double>& sn) {
  cs.resize(kmax + 1);
  sn.resize(kmax + 1);
  const double c1 = std::cos(x);
  const double s1 = std::sin(x);
  double c = q == 0.0 ? 1.0 : std::cos(q * x);
  double s = q == 0.0 ? 0.0 : std::sin(q * x);
  for (int k = 0; k <= kmax; ++k) {
    cs[k] = c;
    sn[k] = s;
    const double nc = c * c1 - s * s1;
    const double ns = s * c1 + c * s1;
    c = nc;
    s = ns;
  }
}

}  // namespace detail

/// Kernel of an arbitrary effective basis (det factor ignored). Cost is the
/// total number of basis terms plus max_k rotations.
inline kernel_triple kernel(const effective_basis& eb, double x) {
  thread_local std::vector<double> cs, sn;
  const double q = eb.offset.value();
  detail::trig_table(q, x, eb.max_k(), cs, sn);
  kernel_triple t;
  for (const auto& atom : eb.atoms) {
    double g = 0.0;
    double dg = 0.0;
    for (const auto& term : atom) {
      const double f = static_cast<double>(term.k) + q;
      if (term.kind == wave::cosine) {
        g += term.weight * cs[term.k];
        dg -= term.weight * f * sn[term.k];
      } else {
        g += term.weight * sn[term.k];
        dg += term.weight * f * cs[term.k];
      }
    }
    t.A += g * g;
    t.B += g * dg;
    t.C += dg * dg;
  }
  return t;
}

/// Unit-variance kernel of the scheme's unfactored basis at x.
inline kernel_triple kernel_exact(const scheme_spec& s, double x) {
  return kernel(effective_basis_of(s, false), x);
}

// ---------------------------------------------------------------------------
// Dirichlet sums  sum_{j=0}^{m-1} cos((2j+p)x)  and the sine analogue.

inline constexpr double kSingularSinGuard = 1e-12;

// Both forms are evaluated in long double: near |sin x| = 1e-3 the closed
// form turns argument rounding of order m eps into m eps / |sin x|.

inline double dirichlet_cos_sum(int p, int m, double x) {
  if (m < 1) throw std::invalid_argument("dirichlet_cos_sum: m must be >= 1");
  const long double xl = x;
  const long double sx = std::sin(xl);
  if (std::abs(sx) <= kSingularSinGuard) throw near_singular_argument("dirichlet_cos_sum: |sin x| <= 1e-12");
  return static_cast<double>(std::cos((m - 1 + p) * xl) * std::sin(m * xl) / sx);
}

inline double dirichlet_sin_sum(int p, int m, double x) {
  if (m < 1) throw std::invalid_argument("dirichlet_sin_sum: m must be >= 1");
  const long double xl = x;
  const long double sx = std::sin(xl);
  if (std::abs(sx) <= kSingularSinGuard) throw near_singular_argument("dirichlet_sin_sum: |sin x| <= 1e-12");
  return static_cast<double>(std::sin((m - 1 + p) * xl) * std::sin(m * xl) / sx);
}

inline double dirichlet_cos_sum_direct(int p, int m, double x) {
  long double total = 0.0L;
  for (int j = 0; j < m; ++j) total += std::cos((2.0L * j + p) * static_cast<long double>(x));
  return static_cast<double>(total);
}

inline double dirichlet_sin_sum_direct(int p, int m, double x) {
  long double total = 0.0L;
  for (int j = 0; j < m; ++j) total += std::sin((2.0L * j + p) * static_cast<long double>(x));
  return static_cast<double>(total);
}

/// Closed form where it is safe, direct summation next to multiples of pi.
inline double dirichlet_cos_sum_guarded(int p, int m, double x) {
  if (std::abs(std::sin(x)) <= kSingularSinGuard) return dirichlet_cos_sum_direct(p, m, x);
  return dirichlet_cos_sum(p, m, x);
}

inline double dirichlet_sin_sum_guarded(int p, int m, double x) {
  if (std::abs(std::sin(x)) <= kSingularSinGuard) return dirichlet_sin_sum_direct(p, m, x);
  return dirichlet_sin_sum(p, m, x);
}

// ---------------------------------------------------------------------------
// Weighted trigonometric sums with power weights j^lambda.
//   P = sum j^l cos(2pj x),     Q = sum j^l sin(2pj x),
//   R = sum j^l cos((2pj+1)x),  S = sum j^l sin((2pj+1)x),   j = 0..m-1.

struct power_sums {
  double P = 0.0;
  double Q = 0.0;
  double R = 0.0;
  double S = 0.0;
};

inline power_sums weighted_power_sums(int lambda, int p, int m, double x) {
  power_sums out;
  for (int j = 0; j < m; ++j) {
    const double w = std::pow(static_cast<double>(j), lambda);  // 0^0 == 1
    const double arg = 2.0 * p * j * x;
    out.P += w * std::cos(arg);
    out.Q += w * std::sin(arg);
    out.R += w * std::cos(arg + x);
    out.S += w * std::sin(arg + x);
  }
  return out;
}

/// Largest |sum| / m^(lambda + a) seen per family over the probe points.
struct bound_report {
  double P = 0.0;
  double Q = 0.0;
  double R = 0.0;
  double S = 0.0;
  int probes = 0;
  double lo = 0.0;
  double hi = 0.0;

  double max_ratio() const { return std::max({P, Q, R, S}); }
};

/// Empirical constant for the O(m^(lambda+a)) bound on [m^-a, pi/p - m^-a].
inline bound_report check_sum_bounds(int lambda, int p, int m, double a, int probes) {
  if (lambda < 0 || lambda > 2) throw std::invalid_argument("check_sum_bounds: lambda must be 0, 1 or 2");
  if (p < 1 || m < 1) throw std::invalid_argument("check_sum_bounds: p and m must be >= 1");
  if (probes < 1) throw std::invalid_argument("check_sum_bounds: probes must be >= 1");
  const double eps = std::pow(static_cast<double>(m), -a);
  bound_report rep;
  rep.lo = eps;
  rep.hi = std::numbers::pi / p - eps;
  if (!(rep.lo < rep.hi)) throw empty_interval("check_sum_bounds: m^-a >= pi/p - m^-a");
  rep.probes = probes;
  const double scale = std::pow(static_cast<double>(m), lambda + a);
  for (int i = 0; i < probes; ++i) {
    const double x = probes == 1 ? rep.lo : rep.lo + (rep.hi - rep.lo) * i / (probes - 1);
    const power_sums s = weighted_power_sums(lambda, p, m, x);
    rep.P = std::max(rep.P, std::abs(s.P) / scale);
    rep.Q = std::max(rep.Q, std::abs(s.Q) / scale);
    rep.R = std::max(rep.R, std::abs(s.R) / scale);
    rep.S = std::max(rep.S, std::abs(s.S) / scale);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Leading-order forms.

/// Leading-order kernel triple for the i.i.d., block-paired and even-n
/// two-half-block cosine schemes.
inline kernel_triple kernel_asymptotic(const scheme_spec& s, double x) {
  validate(s);
  if (s.full_trig()) throw unsupported_scheme("no asymptotic kernel form for full trigonometric schemes");
  const double n = s.n;
  switch (s.kind) {
    case variant::iid: return {n / 2.0, 0.0, n * n * n / 6.0};
    case variant::block_paired: {
      const double c = std::cos(s.ell * x / 2.0);
      return {n * c * c, 0.0, n * n * n * c * c / 3.0};
    }
    case variant::two_half_blocks: {
      if (s.n % 2 != 0) throw unsupported_scheme("two-half-block asymptotic kernel needs even n");
      const double c = std::cos(n * x / 4.0);
      const double cn = std::cos(n * x);
      return {n * c * c + cn * cn, -n * n * std::sin(n * x / 2.0) / 8.0,
              n * n * n / 16.0 + 5.0 * n * n * n * c * c / 24.0};
    }
    case variant::palindromic: break;
  }
  throw unsupported_scheme("no asymptotic kernel form for scheme " + label(s));
}

/// Leading term of E[N_n(0, 2pi)].
inline double asymptotic_expected_zeros(const scheme_spec& s) {
  validate(s);
  const double n = s.n;
  const double sqrt3 = std::sqrt(3.0);
  switch (s.kind) {
    case variant::iid:
    case variant::block_paired: return 2.0 * n / sqrt3;
    case variant::two_half_blocks: return n / 2.0 + std::sqrt(13.0) / (2.0 * sqrt3) * n;
    case variant::palindromic: return n + n / sqrt3;
  }
  return 0.0;
}

/// Residual of
///   n c^2 (n^3/16 + 5 n^3 c^2 / 24) - (n^2 sin(nx/2) / 8)^2 = 13 n^4 c^4 / 48,
/// c = cos(nx/4), divided by n^4.
inline double quartic_cosine_identity_residual(int n, double x) {
  if (n % 2 != 0) throw std::invalid_argument("quartic_cosine_identity_residual: n must be even");
  const double nn = n;
  const double c = std::cos(nn * x / 4.0);
  const double n3 = nn * nn * nn;
  const double lhs = nn * c * c * (n3 / 16.0 + 5.0 * n3 * c * c / 24.0);
  const double b = nn * nn * std::sin(nn * x / 2.0) / 8.0;
  const double rhs = 13.0 * nn * n3 * c * c * c * c / 48.0;
  return std::abs(lhs - b * b - rhs) / (nn * n3);
}

}  // namespace rtz
