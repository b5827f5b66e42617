#pragma once

// Coefficient-dependence schemes for random cosine / trigonometric
// polynomials, and their representation as i.i.d. combinations of merged
// basis functions.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rtz/errors.hpp"
#include "rtz/polyeval.hpp"
#include "rtz/random.hpp"
#include "rtz/rational.hpp"

namespace rtz {

enum class variant { iid, block_paired, two_half_blocks, palindromic };
enum class trig_kind { cosine_only, full_trig };

struct scheme_spec {
  int n = 1;
  double sigma = 1.0;
  variant kind = variant::iid;
  int ell = 1;  // block length, block_paired only
  trig_kind trig = trig_kind::cosine_only;

  static scheme_spec iid(int n, double sigma = 1.0, trig_kind t = trig_kind::cosine_only) {
    return {n, sigma, variant::iid, 1, t};
  }
  static scheme_spec block_paired(int ell, int n, double sigma = 1.0, trig_kind t = trig_kind::cosine_only) {
    return {n, sigma, variant::block_paired, ell, t};
  }
  static scheme_spec two_half_blocks(int n, double sigma = 1.0, trig_kind t = trig_kind::cosine_only) {
    return {n, sigma, variant::two_half_blocks, 1, t};
  }
  static scheme_spec palindromic(int n, double sigma = 1.0) {
    return {n, sigma, variant::palindromic, 1, trig_kind::cosine_only};
  }

  bool full_trig() const { return trig == trig_kind::full_trig; }
  friend bool operator==(const scheme_spec&, const scheme_spec&) = default;
};

inline std::string to_string(variant v) {
  switch (v) {
    case variant::iid: return "iid";
    case variant::block_paired: return "block";
    case variant::two_half_blocks: return "twohalf";
    case variant::palindromic: return "palindromic";
  }
  return "?";
}

/// Short label, e.g. "block_l3", "twohalf_full".
inline std::string label(const scheme_spec& s) {
  std::string out = to_string(s.kind);
  if (s.kind == variant::block_paired) out += "_l" + std::to_string(s.ell);
  if (s.full_trig()) out += "_full";
  return out;
}

/// n = 2*ell*m + r with r in {-1, ..., 2*ell-2}.
struct block_layout {
  int m = 0;
  int r = 0;
};

inline block_layout layout_of(const scheme_spec& s) {
  const int m = (s.n + 1) / (2 * s.ell);
  return {m, s.n - 2 * s.ell * m};
}

inline int half_ceil(int n) { return (n + 1) / 2; }

inline void validate(const scheme_spec& s) {
  if (s.n < 1) throw invalid_spec("degree n must be >= 1");
  if (!(s.sigma >= 0.0)) throw invalid_spec("sigma must be >= 0");
  if (s.kind == variant::block_paired) {
    if (s.ell < 1) throw invalid_spec("block length ell must be >= 1");
    const auto [m, r] = layout_of(s);
    if (m < 1) throw invalid_spec("block_paired needs n >= 2*ell - 1 (at least one block pair)");
    if (r < -1 || r > 2 * s.ell - 2) throw invalid_spec("block remainder out of range");
  }
  if (s.full_trig() && s.kind == variant::palindromic)
    throw invalid_spec("palindromic scheme is defined for cosine polynomials only");
}

/// Index of the coefficient whose value a_j copies (the smallest index in its
/// equality class).
inline int representative(const scheme_spec& s, int j) {
  switch (s.kind) {
    case variant::iid: return j;
    case variant::block_paired: {
      const auto [m, r] = layout_of(s);
      if (j >= 2 * s.ell * m) return j;
      const int block = j / s.ell;
      return (block % 2 == 1) ? j - s.ell : j;
    }
    case variant::two_half_blocks: {
      const int h = half_ceil(s.n);
      return j < 2 * h ? j % h : j;
    }
    case variant::palindromic: return std::min(j, s.n - j);
  }
  return j;
}

/// Maps every coefficient index onto its free variable. Free variables are
/// numbered a-family first (in order of their representative index), then
/// b-family. b-indices tied to b_0 map to -1 (identically zero).
struct variable_map {
  std::vector<int> a_var;
  std::vector<int> b_var;  // empty for cosine-only
  int a_count = 0;
  int b_count = 0;

  int total() const { return a_count + b_count; }
};

inline variable_map variables_of(const scheme_spec& s) {
  validate(s);
  variable_map vm;
  vm.a_var.assign(s.n + 1, -1);
  std::vector<int> rep_to_var(s.n + 1, -1);
  for (int j = 0; j <= s.n; ++j) {
    const int rep = representative(s, j);
    if (rep_to_var[rep] < 0) rep_to_var[rep] = vm.a_count++;
    vm.a_var[j] = rep_to_var[rep];
  }
  if (s.full_trig()) {
    vm.b_var.assign(s.n + 1, -1);
    std::vector<int> b_rep(s.n + 1, -1);
    const int zero_class = representative(s, 0);
    for (int j = 0; j <= s.n; ++j) {
      const int rep = representative(s, j);
      if (rep == zero_class) continue;
      if (b_rep[rep] < 0) b_rep[rep] = vm.a_count + vm.b_count++;
      vm.b_var[j] = b_rep[rep];
    }
  }
  return vm;
}

inline int free_variable_count(const scheme_spec& s) { return variables_of(s).total(); }

/// Free variables are i.i.d. N(0, sigma^2) from counter_stream(seed), in
/// variable order; constrained entries are exact copies.
inline coefficient_vector sample(const scheme_spec& s, std::uint64_t seed) {
  const variable_map vm = variables_of(s);
  std::vector<double> z(static_cast<std::size_t>(vm.total()));
  counter_stream(seed).normals(z);
  for (double& v : z) v = s.sigma == 0.0 ? 0.0 : v * s.sigma;

  coefficient_vector out;
  out.a.resize(s.n + 1);
  for (int j = 0; j <= s.n; ++j) out.a[j] = z[vm.a_var[j]];
  if (s.full_trig()) {
    out.b = std::vector<double>(s.n + 1, 0.0);
    for (int j = 0; j <= s.n; ++j)
      if (vm.b_var[j] >= 0) (*out.b)[j] = z[vm.b_var[j]];
  }
  return out;
}

/// Inverse of the sampling map: the free-variable values of a draw.
inline std::vector<double> free_variables(const scheme_spec& s, const coefficient_vector& c) {
  const variable_map vm = variables_of(s);
  std::vector<double> out(vm.total(), 0.0);
  for (int j = s.n; j >= 0; --j) out[vm.a_var[j]] = c.a[j];
  if (s.full_trig() && c.b)
    for (int j = s.n; j >= 0; --j)
      if (vm.b_var[j] >= 0) out[vm.b_var[j]] = (*c.b)[j];
  return out;
}

/// True iff every equality constraint of the scheme holds bit-exactly.
inline bool satisfies_constraints(const scheme_spec& s, const coefficient_vector& c) {
  if (static_cast<int>(c.a.size()) != s.n + 1) return false;
  if (s.full_trig() != c.b.has_value()) return false;
  const int zero_class = representative(s, 0);
  for (int j = 0; j <= s.n; ++j) {
    const int rep = representative(s, j);
    if (c.a[j] != c.a[rep]) return false;
    if (c.b) {
      if ((*c.b)[j] != (*c.b)[rep]) return false;
      if (rep == zero_class && (*c.b)[j] != 0.0) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Effective basis

enum class wave { cosine, sine };

/// weight * wave((k + offset) x)
struct basis_term {
  int k = 0;
  double weight = 1.0;
  wave kind = wave::cosine;
};

using basis_atom = std::vector<basis_term>;

/// Deterministic prefactor 2 cos(q x).
struct det_factor {
  rational q;

  double operator()(double x) const { return 2.0 * std::cos(q.value() * x); }
};

struct effective_basis {
  std::vector<basis_atom> atoms;
  rational offset{0};  // shared frequency offset of every term
  std::optional<det_factor> factor;

  double frequency(const basis_term& t) const { return static_cast<double>(t.k) + offset.value(); }

  int max_k() const {
    int best = 0;
    for (const auto& atom : atoms)
      for (const auto& t : atom) best = std::max(best, t.k);
    return best;
  }
};

/// Prefactor frequency q if the scheme factors as 2 cos(q x) * V*(x).
/// Palindromic (any n), two-half blocks with odd n, block-paired with r = -1.
inline std::optional<rational> factor_frequency(const scheme_spec& s) {
  validate(s);
  switch (s.kind) {
    case variant::palindromic: return rational{s.n, 2};
    case variant::two_half_blocks:
      if (s.n % 2 == 1) return rational{s.n + 1, 4};
      return std::nullopt;
    case variant::block_paired:
      if (layout_of(s).r == -1) return rational{s.ell, 2};
      return std::nullopt;
    case variant::iid: return std::nullopt;
  }
  return std::nullopt;
}

inline bool has_factor(const scheme_spec& s) { return factor_frequency(s).has_value(); }

namespace detail {

inline effective_basis unfactored_basis(const scheme_spec& s) {
  const variable_map vm = variables_of(s);
  effective_basis eb;
  eb.atoms.resize(vm.total());
  for (int j = 0; j <= s.n; ++j) eb.atoms[vm.a_var[j]].push_back({j, 1.0, wave::cosine});
  for (int j = 0; j < static_cast<int>(vm.b_var.size()); ++j)
    if (vm.b_var[j] >= 0) eb.atoms[vm.b_var[j]].push_back({j, 1.0, wave::sine});
  return eb;
}

// Reduced atoms: for a paired class {j, j'} with j < j' and j' - j = 2q,
// cos(jx) + cos(j'x) = 2 cos(qx) cos((j+q)x), likewise for sines. Palindromic
// pairs satisfy j + j' = n instead: cos(jx) + cos((n-j)x) = 2 cos(nx/2) cos((n/2-j)x).
inline effective_basis factored_basis(const scheme_spec& s, rational q) {
  const variable_map vm = variables_of(s);
  effective_basis eb;
  eb.factor = det_factor{q};
  eb.atoms.resize(vm.total());

  if (s.kind == variant::palindromic) {
    // Frequencies n/2 - j, j = 0..floor(n/2); offset 1/2 for odd n.
    eb.offset = rational{s.n % 2, 2};
    const int top = s.n / 2;  // floor
    for (int j = 0; j <= top; ++j) {
      const int k = top - j;  // (n/2 - j) - offset
      const double w = (2 * j == s.n) ? 0.5 : 1.0;
      eb.atoms[vm.a_var[j]].push_back({k, w, wave::cosine});
    }
    return eb;
  }

  eb.offset = q;
  auto add_class = [&](int var, int j, wave kind) { eb.atoms[var].push_back({j, 1.0, kind}); };
  for (int j = 0; j <= s.n; ++j) {
    if (representative(s, j) != j) continue;
    add_class(vm.a_var[j], j, wave::cosine);
    if (!vm.b_var.empty() && vm.b_var[j] >= 0) add_class(vm.b_var[j], j, wave::sine);
  }
  return eb;
}

}  // namespace detail

/// factored == false: one atom per free variable, summing the cosines (sines)
/// its coefficient multiplies. factored == true: the reduced atoms together
/// with the deterministic prefactor. Throws factor_unavailable if the scheme
/// has no deterministic factor.
inline effective_basis effective_basis_of(const scheme_spec& s, bool factored) {
  if (!factored) return detail::unfactored_basis(s);
  const auto q = factor_frequency(s);
  if (!q) throw factor_unavailable("scheme " + label(s) + " with n=" + std::to_string(s.n) + " has no deterministic factor");
  return detail::factored_basis(s, *q);
}

/// sum_i b_i g_i(x), with b the free variables; excludes the det factor.
inline double evaluate_basis(const effective_basis& eb, std::span<const double> free, double x) {
  double total = 0.0;
  for (std::size_t i = 0; i < eb.atoms.size(); ++i) {
    double g = 0.0;
    for (const auto& t : eb.atoms[i]) {
      const double arg = eb.frequency(t) * x;
      g += t.weight * (t.kind == wave::cosine ? std::cos(arg) : std::sin(arg));
    }
    total += free[i] * g;
  }
  return total;
}

/// The reduced random factor V* of a draw, as a series with the basis offset.
inline trig_series reduced_series(const effective_basis& eb, std::span<const double> free) {
  trig_series out;
  out.offset = eb.offset;
  const int kmax = eb.max_k();
  out.cos_coef.assign(kmax + 1, 0.0);
  bool any_sine = false;
  for (const auto& atom : eb.atoms)
    for (const auto& t : atom) any_sine |= (t.kind == wave::sine);
  if (any_sine) out.sin_coef.assign(kmax + 1, 0.0);
  for (std::size_t i = 0; i < eb.atoms.size(); ++i)
    for (const auto& t : eb.atoms[i]) {
      auto& dst = t.kind == wave::cosine ? out.cos_coef : out.sin_coef;
      dst[t.k] += t.weight * free[i];
    }
  return out;
}

inline trig_series reduced_series(const scheme_spec& s, const coefficient_vector& c) {
  return reduced_series(effective_basis_of(s, true), free_variables(s, c));
}

/// Zeros of cos(q x) in (0, 2pi); equals 2q, which must be a positive integer.
inline int det_factor_zero_count(const det_factor& f) {
  const rational twice = f.q * rational{2};
  if (!twice.is_integer() || twice.num <= 0)
    throw non_integer_zero_count("2q = " + std::to_string(twice.value()) + " is not a positive integer");
  return static_cast<int>(twice.num);
}

/// Zeros of cos(q x) in (0, 2pi), ascending: (2k+1) pi / (2q).
inline std::vector<double> det_factor_zeros(const det_factor& f) {
  const int count = det_factor_zero_count(f);
  std::vector<double> out;
  out.reserve(count);
  const double q = f.q.value();
  for (int k = 0; k < count; ++k) out.push_back((2 * k + 1) * std::numbers::pi / (2.0 * q));
  return out;
}

}  // namespace rtz
