#pragma once

// Globally adaptive Gauss-Kronrod (7, 15) quadrature. The panel with the
// largest |K15 - G7| is bisected until the summed estimate drops below the
// absolute tolerance. Panel contributions are summed in left-endpoint order,
// so the result depends only on the panel tree.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <vector>

#include "rtz/errors.hpp"

namespace rtz {

struct quadrature_result {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
  int evaluations = 0;
  bool converged = false;
};

struct adaptive_options {
  double abs_tol = 1e-8;
  int max_depth = 40;
  int min_panels = 16;
  int max_panels = 1 << 21;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct panel {
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
  double error = 0.0;
  int depth = 0;
};

template <class F>
panel gauss_kronrod(F& f, double lo, double hi, int depth) {
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (lo + hi);
  const double fc = f(mid);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double sum = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[i] * sum;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * sum;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half), depth};
}

}  // namespace detail

/// Integrates f over [breaks.front(), breaks.back()]; interior breakpoints
/// become panel boundaries and are never evaluated.
template <class F>
quadrature_result integrate_adaptive(F&& f, std::span<const double> breaks, const adaptive_options& opt) {
  std::vector<double> pts(breaks.begin(), breaks.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  quadrature_result res;
  if (pts.size() < 2) {
    res.converged = true;
    return res;
  }

  const double span = pts.back() - pts.front();
  std::vector<detail::panel> done;
  auto by_error = [](const detail::panel& a, const detail::panel& b) { return a.error < b.error; };
  std::priority_queue<detail::panel, std::vector<detail::panel>, decltype(by_error)> open(by_error);

  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = pts[i + 1] - pts[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil(opt.min_panels * len / span)));
    for (int k = 0; k < pieces; ++k) {
      const double a = pts[i] + len * k / pieces;
      const double b = (k + 1 == pieces) ? pts[i + 1] : pts[i] + len * (k + 1) / pieces;
      auto p = detail::gauss_kronrod(f, a, b, 0);
      res.evaluations += 15;
      total_err += p.error;
      open.push(p);
    }
  }

  int panel_count = static_cast<int>(open.size());
  while (total_err > opt.abs_tol && !open.empty() && panel_count < opt.max_panels) {
    detail::panel worst = open.top();
    open.pop();
    if (worst.depth >= opt.max_depth) {
      done.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.lo + worst.hi);
    auto left = detail::gauss_kronrod(f, worst.lo, mid, worst.depth + 1);
    auto right = detail::gauss_kronrod(f, mid, worst.hi, worst.depth + 1);
    res.evaluations += 30;
    total_err += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
    ++panel_count;
  }

  while (!open.empty()) {
    done.push_back(open.top());
    open.pop();
  }
  std::sort(done.begin(), done.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  res.error = 0.0;
  for (const auto& p : done) {
    res.value += p.value;
    res.error += p.error;
  }
  res.panels = static_cast<int>(done.size());
  res.converged = res.error <= opt.abs_tol;
  return res;
}

}  // namespace rtz
