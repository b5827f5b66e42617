#pragma once

// Expected number of zeros on (0, 2pi) by integrating the Kac-Rice density
//
//   rho(x) = sqrt(A C - B^2) / (pi A)
//
// of a scheme's effective basis.
//
// Schemes whose kernel A vanishes inside (0, 2pi) carry a deterministic factor
// 2 cos(q x); for those the reduced factor is integrated instead and the 2q
// deterministic zeros are added back. When every reduced atom also vanishes
// at some point x0 (x0 = pi for half-odd frequencies), that zero is
// deterministic too: near x0 each atom is +-w sin(f (x - x0)), the density
// equals that of the quotient by (x - x0), which is evaluated through sinc
// expansions, and x0 is added to the count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

#include "rtz/errors.hpp"
#include "rtz/kernels.hpp"
#include "rtz/quadrature.hpp"
#include "rtz/random.hpp"
#include "rtz/rootcount.hpp"
#include "rtz/schemes.hpp"

namespace rtz {

struct quadrature_config {
  double abs_tol = 1e-8;
  int max_depth = 40;
  std::optional<double> singular_window_radius;  // defaults to 10 / n

  double window_radius(int n) const { return singular_window_radius.value_or(10.0 / n); }

  void validate() const {
    if (!(abs_tol > 0.0)) throw invalid_config("quadrature abs_tol must be > 0");
    if (max_depth < 10) throw invalid_config("quadrature max_depth must be >= 10");
  }
};

struct kacrice_result {
  double expected_zeros = 0.0;
  int deterministic_added = 0;  // zeros of the deterministic prefactor
  int structural_added = 0;     // common zeros of all reduced atoms
  int windows_excised = 0;
  double quadrature_error_estimate = 0.0;
  int panels = 0;
  bool factored = false;
};

/// sqrt(max(AC - B^2, 0)) / (pi A); throws vanishing_a when A <= 1e-14 max(1, C).
inline double density(const kernel_triple& t) {
  if (t.A <= 1e-14 * std::max(1.0, t.C)) throw vanishing_a("Kac-Rice density: A vanishes");
  return std::sqrt(std::max(t.discriminant(), 0.0)) / (std::numbers::pi * t.A);
}

namespace detail {

// sin(u)/u and its derivative, with Taylor series near 0.
inline double sinc(double u) {
  if (std::abs(u) < 0.5) {
    const double u2 = u * u;
    return 1.0 - u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0 * (1.0 - u2 / 110.0 * (1.0 - u2 / 156.0)))));
  }
  return std::sin(u) / u;
}

inline double sinc_derivative(double u) {
  if (std::abs(u) < 0.5) {
    // sum_{k>=1} (-1)^k 2k u^(2k-1) / (2k+1)!
    const double u2 = u * u;
    double term = -u / 3.0;
    double total = term;
    for (int k = 2; k <= 7; ++k) {
      term *= -u2 * k / ((k - 1.0) * (2.0 * k) * (2.0 * k + 1.0));
      total += term;
    }
    return total;
  }
  return (u * std::cos(u) - std::sin(u)) / (u * u);
}

}  // namespace detail

/// Points of (0, 2pi) where every atom of a single-term basis vanishes.
/// Multi-term bases report none.
inline std::vector<double> structural_zeros(const effective_basis& eb) {
  std::vector<double> out;
  if (eb.atoms.empty()) return out;
  for (const auto& atom : eb.atoms)
    if (atom.size() != 1) return out;

  const basis_term& first = eb.atoms.front().front();
  const double f = eb.frequency(first);
  if (!(f > 0.0)) return out;
  const double pi = std::numbers::pi;
  for (int k = 0;; ++k) {
    const double x = (first.kind == wave::cosine ? (k + 0.5) * pi : (k + 1) * pi) / f;
    if (x >= two_pi - 1e-12) break;
    bool common = true;
    for (const auto& atom : eb.atoms) {
      const auto& t = atom.front();
      const double arg = eb.frequency(t) * x;
      const double v = t.kind == wave::cosine ? std::cos(arg) : std::sin(arg);
      if (std::abs(v) > 1e-9) {
        common = false;
        break;
      }
    }
    if (common) out.push_back(x);
  }
  return out;
}

/// Kac-Rice density of an effective basis as a callable, with the removable
/// singularities at structural zeros handled analytically.
class basis_density {
 public:
  explicit basis_density(const effective_basis& eb) : eb_(eb), zeros_(structural_zeros(eb)) {
    double fmax = 0.0;
    for (const auto& atom : eb_.atoms)
      for (const auto& t : atom) fmax = std::max(fmax, eb_.frequency(t));
    near_radius_ = 1.0 / (fmax + 1.0);
    for (double x0 : zeros_) {
      std::vector<double> sign;
      sign.reserve(eb_.atoms.size());
      for (const auto& atom : eb_.atoms) {
        const auto& t = atom.front();
        const double arg = eb_.frequency(t) * x0;
        // cos(f(x0+t)) = -sin(f x0) sin(f t); sin(f(x0+t)) = cos(f x0) sin(f t)
        const double rho = t.kind == wave::cosine ? -std::sin(arg) : std::cos(arg);
        sign.push_back(rho < 0.0 ? -t.weight : t.weight);
      }
      signs_.push_back(std::move(sign));
    }
  }

  const std::vector<double>& structural() const { return zeros_; }
  bool degenerate() const { return eb_.atoms.size() <= 1; }

  kernel_triple kernel_at(double x) const {
    for (std::size_t z = 0; z < zeros_.size(); ++z) {
      const double t = x - zeros_[z];
      if (std::abs(t) < near_radius_ && t != 0.0) return quotient_kernel(z, t);
    }
    return kernel(eb_, x);
  }

  double operator()(double x) const {
    if (degenerate()) return 0.0;  // a single random coefficient times a fixed function
    return density(kernel_at(x));
  }

 private:
  // Kernel of the atoms divided by (x - x0).
  kernel_triple quotient_kernel(std::size_t z, double t) const {
    kernel_triple k;
    for (std::size_t i = 0; i < eb_.atoms.size(); ++i) {
      const double f = eb_.frequency(eb_.atoms[i].front());
      const double w = signs_[z][i];
      const double h = w * f * detail::sinc(f * t);
      const double dh = w * f * f * detail::sinc_derivative(f * t);
      k.A += h * h;
      k.B += h * dh;
      k.C += dh * dh;
    }
    return k;
  }

  const effective_basis& eb_;
  std::vector<double> zeros_;
  std::vector<std::vector<double>> signs_;
  double near_radius_ = 0.0;
};

/// Points where the unfactored kernel A is small and the density peaks.
inline std::vector<double> density_peaks(const scheme_spec& s) {
  std::vector<double> out;
  const double pi = std::numbers::pi;
  if (s.kind == variant::block_paired) {
    for (int k = 0; k < s.ell; ++k) out.push_back((2 * k + 1) * pi / s.ell);
  } else if (s.kind == variant::two_half_blocks && s.n % 2 == 0) {
    for (int k = 0; k < s.n / 2; ++k) out.push_back((4 * k + 2) * pi / s.n);
  }
  return out;
}

/// Integral of the basis density over [lo, hi].
inline quadrature_result integrate_density(const effective_basis& eb, double lo, double hi, const quadrature_config& q,
                                           std::span<const double> extra_breaks = {}) {
  q.validate();
  basis_density rho(eb);
  if (rho.degenerate()) return {0.0, 0.0, 0, 0, true};
  std::vector<double> breaks{lo, hi};
  for (double x : rho.structural())
    if (x > lo && x < hi) breaks.push_back(x);
  for (double x : extra_breaks)
    if (x > lo && x < hi) breaks.push_back(x);

  double fmax = 0.0;
  for (const auto& atom : eb.atoms)
    for (const auto& t : atom) fmax = std::max(fmax, eb.frequency(t));
  adaptive_options opt;
  opt.abs_tol = q.abs_tol;
  opt.max_depth = q.max_depth;
  opt.min_panels = std::max(16, static_cast<int>(std::ceil(2.0 * (fmax + 1.0) * (hi - lo) / two_pi)));
  return integrate_adaptive(rho, breaks, opt);
}

/// E[N(0, 2pi)] by Kac-Rice quadrature.
inline kacrice_result expected_zeros_numeric(const scheme_spec& s, const quadrature_config& q = {}) {
  validate(s);
  q.validate();
  kacrice_result out;
  quadrature_result qr;
  if (has_factor(s)) {
    const effective_basis eb = effective_basis_of(s, true);
    out.factored = true;
    out.deterministic_added = det_factor_zero_count(*eb.factor);
    out.structural_added = static_cast<int>(structural_zeros(eb).size());
    qr = integrate_density(eb, 0.0, two_pi, q);
  } else {
    const effective_basis eb = effective_basis_of(s, false);
    const auto peaks = density_peaks(s);
    qr = integrate_density(eb, 0.0, two_pi, q, peaks);
  }
  if (!qr.converged)
    throw quadrature_not_converged("Kac-Rice quadrature for " + label(s) + " n=" + std::to_string(s.n) +
                                   ": error estimate " + std::to_string(qr.error) + " > tolerance");
  out.expected_zeros = qr.value + out.deterministic_added + out.structural_added;
  out.quadrature_error_estimate = qr.error;
  out.panels = qr.panels;
  return out;
}

/// Unfactored route for schemes with a deterministic factor: integrate the
/// density outside windows of the given radius around the prefactor zeros and
/// replace the window mass by Monte Carlo zero counts inside the windows.
inline kacrice_result expected_zeros_excised(const scheme_spec& s, const quadrature_config& q, int window_trials,
                                             std::uint64_t seed, int points_per_degree = kDefaultPointsPerDegree) {
  validate(s);
  q.validate();
  const auto qf = factor_frequency(s);
  if (!qf) throw factor_unavailable("expected_zeros_excised: scheme has no singular points");
  if (window_trials < 1) throw invalid_config("expected_zeros_excised: window_trials must be >= 1");
  const double radius = q.window_radius(s.n);
  const auto centers = det_factor_zeros(det_factor{*qf});

  std::vector<std::pair<double, double>> windows;
  for (double c : centers) windows.emplace_back(std::max(0.0, c - radius), std::min(two_pi, c + radius));
  for (std::size_t i = 1; i < windows.size(); ++i)
    if (windows[i].first <= windows[i - 1].second)
      throw invalid_config("expected_zeros_excised: singular windows overlap");

  const effective_basis eb = effective_basis_of(s, false);
  kacrice_result out;
  out.windows_excised = static_cast<int>(windows.size());
  double gap_lo = 0.0;
  auto integrate_gap = [&](double lo, double hi) {
    if (hi <= lo) return;
    const auto qr = integrate_density(eb, lo, hi, q);
    if (!qr.converged) throw quadrature_not_converged("expected_zeros_excised: quadrature did not converge");
    out.expected_zeros += qr.value;
    out.quadrature_error_estimate += qr.error;
    out.panels += qr.panels;
  };
  for (const auto& [lo, hi] : windows) {
    integrate_gap(gap_lo, lo);
    gap_lo = hi;
  }
  integrate_gap(gap_lo, two_pi);

  std::int64_t window_total = 0;
  for (int t = 0; t < window_trials; ++t) {
    const coefficient_vector c = sample(s, trial_seed(seed, t));
    for (const auto& [lo, hi] : windows)
      window_total += count_zeros_on(c, lo, hi, cells_for(c, lo, hi, points_per_degree)).count;
  }
  out.expected_zeros += static_cast<double>(window_total) / window_trials;
  return out;
}

/// (x, density) pairs of the unfactored kernel.
inline std::vector<std::pair<double, double>> density_profile(const scheme_spec& s, std::span<const double> xs) {
  const effective_basis eb = effective_basis_of(s, false);
  std::vector<std::pair<double, double>> out;
  out.reserve(xs.size());
  for (double x : xs) out.emplace_back(x, density(kernel(eb, x)));
  return out;
}

}  // namespace rtz
