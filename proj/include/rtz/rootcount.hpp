#pragma once

// Zero counting on an interval by sign changes over a uniform grid.
//
// Cells without a sign change are certified zero-free with the curvature
// bound |S''| <= M2 = sum f^2 |coef|: on a cell of width w whose endpoint
// values share a sign, S cannot vanish if min(|S(lo)|, |S(hi)|) > M2 w^2 / 8.
// Cells that fail the test are bisected until they either certify or expose
// a hidden pair of crossings. Values within the rounding noise of the
// evaluation carry no sign, so probing stops once M2 w^2 / 8 drops below
// that floor. Tangential zeros (no sign change) are not counted; they only
// show up in suspicious_cells.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "rtz/errors.hpp"
#include "rtz/polyeval.hpp"
#include "rtz/schemes.hpp"

namespace rtz {

struct zero_count_result {
  int count = 0;
  std::optional<std::vector<double>> zeros;
  int suspicious_cells = 0;  // cells with a hidden crossing pair, or left unresolved at the noise floor
};

inline constexpr int kDefaultPointsPerDegree = 32;
// Fractional part of the golden ratio; grid nodes never land on rational multiples of pi.
inline constexpr double kGridOffset = 0.6180339887498949;

/// Bisection to width <= 1e-12; requires a strict sign change on [lo, hi].
inline double refine_zero(series_view s, double lo, double hi) {
  double flo = evaluate(s, lo);
  const double fhi = evaluate(s, hi);
  if (!(flo * fhi < 0.0)) throw not_bracketed("refine_zero: no sign change on the bracket");
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = evaluate(s, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace detail {

class cell_scanner {
 public:
  // curvature_bound >= sup |s''|; values with |v| <= noise_floor carry no sign.
  cell_scanner(series_view s, double curvature_bound, double noise_floor, bool keep_brackets)
      : s_(s), m2_(curvature_bound), noise_(noise_floor), keep_(keep_brackets) {}

  void scan(double xl, double xr, double vl, double vr) {
    if (vl * vr < 0.0) {
      add(xl, xr);
      return;
    }
    const int before = crossings_;
    probe(xl, xr, vl, vr, 0);
    if (crossings_ != before) ++suspicious_;
  }

  int crossings() const { return crossings_; }
  int suspicious() const { return suspicious_ + unresolved_; }
  const std::vector<std::pair<double, double>>& brackets() const { return brackets_; }

 private:
  static constexpr int kMaxDepth = 48;

  void add(double xl, double xr) {
    ++crossings_;
    if (keep_) brackets_.emplace_back(xl, xr);
  }

  // Ends have the same sign (or one is an exact zero). Bisect until the cell
  // is certified free of zeros or a midpoint shows the opposite sign.
  void probe(double xl, double xr, double vl, double vr, int depth) {
    const double w = xr - xl;
    const double dip = m2_ * w * w / 8.0;
    if (std::min(std::abs(vl), std::abs(vr)) > dip) return;
    if (dip <= noise_ || depth >= kMaxDepth) {
      ++unresolved_;
      return;
    }
    double xm = 0.5 * (xl + xr);
    double vm = evaluate(s_, xm);
    if (vm == 0.0) {
      xm = xl + 0.75 * w;
      vm = evaluate(s_, xm);
    }
    const double ref = vl != 0.0 ? vl : vr;
    if (std::abs(vm) > noise_ && (vm < 0.0) != (ref < 0.0)) {
      add(xl, xm);
      add(xm, xr);
      return;
    }
    probe(xl, xm, vl, vm, depth + 1);
    probe(xm, xr, vm, vr, depth + 1);
  }

  series_view s_;
  double m2_;
  double noise_;
  bool keep_;
  int crossings_ = 0;
  int suspicious_ = 0;
  int unresolved_ = 0;
  std::vector<std::pair<double, double>> brackets_;
};

inline double max_frequency(series_view s) {
  return s.terms() == 0 ? 0.0 : static_cast<double>(s.terms() - 1) + s.offset;
}

inline bool all_zero(series_view s) {
  return std::all_of(s.cos_coef.begin(), s.cos_coef.end(), [](double c) { return c == 0.0; }) &&
         std::all_of(s.sin_coef.begin(), s.sin_coef.end(), [](double c) { return c == 0.0; });
}

}  // namespace detail

/// Zeros of s in the open interval (lo, hi) using `cells` grid cells.
inline zero_count_result count_zeros_on(series_view s, double lo, double hi, int cells, bool want_zeros = false) {
  if (detail::all_zero(s)) throw degenerate_input("count_zeros: all coefficients are zero");
  if (!(hi > lo)) throw std::invalid_argument("count_zeros_on: empty interval");
  cells = std::max(cells, 2);
  const double h = (hi - lo) / cells;

  // Interior nodes lo + (i + offset) h, i = 0..cells-1; the interval ends bound
  // the first and last cells.
  std::vector<double> xs(cells);
  for (int i = 0; i < cells; ++i) xs[i] = lo + (i + kGridOffset) * h;
  std::vector<double> vs = evaluate_points(s, xs);
  for (int i = 0; i < cells; ++i) {
    if (vs[i] == 0.0) {  // exact zero on a node: move the node half a step
      xs[i] += 0.5 * h;
      vs[i] = evaluate(s, xs[i]);
    }
  }

  double v_lo = evaluate(s, lo);
  double v_hi = evaluate(s, hi);
  if (v_lo == 0.0) v_lo = vs.front();  // endpoints are excluded from the open interval
  if (v_hi == 0.0) v_hi = vs.back();

  // rounding error of the recurrence grows about linearly with the frequency
  const double noise = 8.0 * std::numeric_limits<double>::epsilon() * (detail::max_frequency(s) + 1.0) *
                       abs_coefficient_sum(s);
  detail::cell_scanner scanner(s, second_derivative_bound(s), noise, want_zeros);
  scanner.scan(lo, xs.front(), v_lo, vs.front());
  for (int i = 0; i + 1 < cells; ++i) scanner.scan(xs[i], xs[i + 1], vs[i], vs[i + 1]);
  scanner.scan(xs.back(), hi, vs.back(), v_hi);

  zero_count_result out;
  out.count = scanner.crossings();
  out.suspicious_cells = scanner.suspicious();
  if (want_zeros) {
    std::vector<double> zeros;
    zeros.reserve(scanner.brackets().size());
    for (const auto& [a, b] : scanner.brackets()) zeros.push_back(refine_zero(s, a, b));
    out.zeros = std::move(zeros);
  }
  return out;
}

/// Grid cells for a sub-interval at the given density per degree.
inline int cells_for(series_view s, double lo, double hi, int points_per_degree) {
  const double per_period = points_per_degree * (std::ceil(detail::max_frequency(s)) + 1.0);
  return std::max(4, static_cast<int>(std::ceil(per_period * (hi - lo) / two_pi)));
}

/// Zeros of s on (0, 2pi); points_per_degree * (n + 1) grid cells.
inline zero_count_result count_zeros(series_view s, int points_per_degree = kDefaultPointsPerDegree,
                                     bool want_zeros = false) {
  if (points_per_degree < 1) throw std::invalid_argument("count_zeros: points_per_degree must be >= 1");
  return count_zeros_on(s, 0.0, two_pi, cells_for(s, 0.0, two_pi, points_per_degree), want_zeros);
}

/// Deterministic zeros of the prefactor plus zeros of the reduced factor.
/// Coincidences between the two sets are counted twice (multiplicity).
inline zero_count_result count_zeros_factored(const scheme_spec& spec, const coefficient_vector& coeffs,
                                              int points_per_degree = kDefaultPointsPerDegree,
                                              bool want_zeros = false) {
  const effective_basis eb = effective_basis_of(spec, true);
  const trig_series reduced = reduced_series(eb, free_variables(spec, coeffs));
  zero_count_result r = count_zeros(reduced, points_per_degree, want_zeros);
  r.count += det_factor_zero_count(*eb.factor);
  if (r.zeros) {
    auto det = det_factor_zeros(*eb.factor);
    r.zeros->insert(r.zeros->end(), det.begin(), det.end());
    std::sort(r.zeros->begin(), r.zeros->end());
  }
  return r;
}

}  // namespace rtz
