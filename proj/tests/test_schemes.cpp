#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "rtz/kernels.hpp"
#include "rtz/polyeval.hpp"
#include "rtz/schemes.hpp"

using namespace rtz;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<scheme_spec> all_schemes(int n) {
  std::vector<scheme_spec> out{scheme_spec::iid(n), scheme_spec::two_half_blocks(n), scheme_spec::palindromic(n),
                               scheme_spec::iid(n, 1.0, trig_kind::full_trig),
                               scheme_spec::two_half_blocks(n, 1.0, trig_kind::full_trig)};
  for (int ell = 1; ell <= 3; ++ell) {
    if ((n + 1) / (2 * ell) < 1) continue;
    out.push_back(scheme_spec::block_paired(ell, n));
    out.push_back(scheme_spec::block_paired(ell, n, 1.0, trig_kind::full_trig));
  }
  return out;
}

double direct_sum(const coefficient_vector& c, double x) {
  double s = 0.0;
  for (int j = 0; j <= c.degree(); ++j) s += c.a[j] * std::cos(j * x);
  if (c.b)
    for (int j = 0; j <= c.degree(); ++j) s += (*c.b)[j] * std::sin(j * x);
  return s;
}

double coefficient_mass(const coefficient_vector& c) {
  double s = 0.0;
  for (double v : c.a) s += std::abs(v);
  if (c.b)
    for (double v : *c.b) s += std::abs(v);
  return s;
}

}  // namespace

TEST(Spec, Validation) {
  EXPECT_THROW(validate(scheme_spec::iid(0)), invalid_spec);
  EXPECT_THROW(validate(scheme_spec::iid(3, -1.0)), invalid_spec);
  EXPECT_THROW(validate(scheme_spec::block_paired(3, 4)), invalid_spec);  // m = 0
  EXPECT_THROW(validate(scheme_spec::block_paired(0, 4)), invalid_spec);
  scheme_spec pal = scheme_spec::palindromic(5);
  pal.trig = trig_kind::full_trig;
  EXPECT_THROW(validate(pal), invalid_spec);
  EXPECT_NO_THROW(validate(scheme_spec::block_paired(3, 5)));
}

TEST(Spec, BlockLayout) {
  const auto l = layout_of(scheme_spec::block_paired(1, 5));
  EXPECT_EQ(l.m, 3);
  EXPECT_EQ(l.r, -1);
  for (int ell = 1; ell <= 4; ++ell)
    for (int n = 2 * ell - 1; n < 60; ++n) {
      const auto b = layout_of(scheme_spec::block_paired(ell, n));
      EXPECT_EQ(n, 2 * ell * b.m + b.r);
      EXPECT_GE(b.r, -1);
      EXPECT_LE(b.r, 2 * ell - 2);
    }
}

TEST(FreeVariables, Counts) {
  EXPECT_EQ(free_variable_count(scheme_spec::iid(5)), 6);
  EXPECT_EQ(free_variable_count(scheme_spec::block_paired(1, 5)), 3);
  EXPECT_EQ(free_variable_count(scheme_spec::two_half_blocks(4)), 3);
  EXPECT_EQ(free_variable_count(scheme_spec::two_half_blocks(5)), 3);
  EXPECT_EQ(free_variable_count(scheme_spec::palindromic(5)), 3);
  EXPECT_EQ(free_variable_count(scheme_spec::palindromic(4)), 3);
  EXPECT_EQ(free_variable_count(scheme_spec::iid(5, 1.0, trig_kind::full_trig)), 11);
  for (int ell = 1; ell <= 3; ++ell)
    for (int n = 2 * ell - 1; n < 40; ++n) {
      const auto s = scheme_spec::block_paired(ell, n);
      const auto l = layout_of(s);
      EXPECT_EQ(free_variable_count(s), ell * l.m + l.r + 1);
    }
}

TEST(Sample, ZeroSigmaGivesZeros) {
  for (const auto& s : all_schemes(9)) {
    auto z = s;
    z.sigma = 0.0;
    const auto c = sample(z, 42);
    for (double v : c.a) EXPECT_EQ(v, 0.0);
    if (c.b)
      for (double v : *c.b) EXPECT_EQ(v, 0.0);
  }
}

TEST(Sample, BlockPairedConstraint) {
  const auto c = sample(scheme_spec::block_paired(2, 7), 11);
  EXPECT_EQ(c.a[0], c.a[2]);
  EXPECT_EQ(c.a[1], c.a[3]);
  EXPECT_EQ(c.a[4], c.a[6]);
  EXPECT_EQ(c.a[5], c.a[7]);
  EXPECT_NE(c.a[0], c.a[1]);
}

TEST(Sample, ConstraintExactness) {
  for (int n : {1, 2, 3, 4, 7, 10, 33, 64}) {
    for (const auto& s : all_schemes(n)) {
      for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto c = sample(s, seed);
        ASSERT_TRUE(satisfies_constraints(s, c)) << label(s) << " n=" << n;
        if (c.b) EXPECT_EQ((*c.b)[0], 0.0);
      }
    }
  }
  const auto t = sample(scheme_spec::two_half_blocks(9), 3);
  for (int j = 0; j < 5; ++j)
    if (j + 5 <= 9) EXPECT_EQ(t.a[j], t.a[j + 5]);
  const auto p = sample(scheme_spec::palindromic(8), 3);
  for (int j = 0; j <= 8; ++j) EXPECT_EQ(p.a[j], p.a[8 - j]);
}

TEST(Sample, Deterministic) {
  const auto s = scheme_spec::two_half_blocks(30, 1.0, trig_kind::full_trig);
  const auto a = sample(s, 99);
  const auto b = sample(s, 99);
  EXPECT_EQ(a.a, b.a);
  EXPECT_EQ(*a.b, *b.b);
  EXPECT_NE(sample(s, 100).a, a.a);
}

TEST(Sample, StandardNormalMoments) {
  const int n = 10000;
  const auto c = sample(scheme_spec::iid(n), 5);
  double mean = 0.0;
  for (double v : c.a) mean += v;
  mean /= n + 1;
  EXPECT_LT(std::abs(mean), 4.0 / std::sqrt(n + 1.0));
  double var = 0.0;
  for (double v : c.a) var += (v - mean) * (v - mean);
  var /= n;
  EXPECT_NEAR(var, 1.0, 0.06);

  const auto c2 = sample(scheme_spec::iid(n, 2.0), 5);
  for (int j = 0; j <= n; ++j) EXPECT_EQ(c2.a[j], 2.0 * c.a[j]);
}

TEST(Basis, AtomsMatchFreeVariables) {
  for (int n : {1, 2, 5, 8, 21}) {
    for (const auto& s : all_schemes(n)) {
      EXPECT_EQ(static_cast<int>(effective_basis_of(s, false).atoms.size()), free_variable_count(s));
      if (has_factor(s)) EXPECT_EQ(static_cast<int>(effective_basis_of(s, true).atoms.size()), free_variable_count(s));
    }
  }
}

TEST(Basis, TwoHalfSmallCases) {
  const auto s = scheme_spec::two_half_blocks(3);
  const auto u = effective_basis_of(s, false);
  ASSERT_EQ(u.atoms.size(), 2u);
  // {1 + cos 2x, cos x + cos 3x}
  for (double x : {0.3, 1.9, 4.4}) {
    std::vector<double> e0{1.0, 0.0};
    std::vector<double> e1{0.0, 1.0};
    EXPECT_NEAR(evaluate_basis(u, e0, x), 1 + std::cos(2 * x), 1e-14);
    EXPECT_NEAR(evaluate_basis(u, e1, x), std::cos(x) + std::cos(3 * x), 1e-14);
  }
  const auto f = effective_basis_of(s, true);
  ASSERT_TRUE(f.factor);
  EXPECT_EQ(f.factor->q, rational(1));
  for (double x : {0.3, 1.9}) {
    std::vector<double> e0{1.0, 0.0};
    std::vector<double> e1{0.0, 1.0};
    EXPECT_NEAR(evaluate_basis(f, e0, x), std::cos(x), 1e-14);
    EXPECT_NEAR(evaluate_basis(f, e1, x), std::cos(2 * x), 1e-14);
  }
}

TEST(Basis, IidSmallCase) {
  const auto eb = effective_basis_of(scheme_spec::iid(2), false);
  ASSERT_EQ(eb.atoms.size(), 3u);
  EXPECT_FALSE(eb.factor);
  for (int i = 0; i < 3; ++i) {
    ASSERT_EQ(eb.atoms[i].size(), 1u);
    EXPECT_EQ(eb.atoms[i][0].k, i);
  }
}

TEST(Basis, FactorUnavailable) {
  EXPECT_THROW(effective_basis_of(scheme_spec::two_half_blocks(4), true), factor_unavailable);
  EXPECT_THROW(effective_basis_of(scheme_spec::iid(4), true), factor_unavailable);
  EXPECT_THROW(effective_basis_of(scheme_spec::block_paired(2, 6), true), factor_unavailable);
  EXPECT_NO_THROW(effective_basis_of(scheme_spec::block_paired(2, 7), true));
}

TEST(Basis, Reconstruction) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.0, 2 * pi);
  int checked = 0;
  for (int n : {1, 3, 4, 7, 12, 25, 40}) {
    for (const auto& s : all_schemes(n)) {
      for (int rep = 0; rep < 3; ++rep) {
        const auto c = sample(s, rng());
        const auto free = free_variables(s, c);
        const double x = ux(rng);
        const double mass = coefficient_mass(c);
        const double ref = direct_sum(c, x);
        EXPECT_NEAR(evaluate_basis(effective_basis_of(s, false), free, x), ref, 1e-12 * mass) << label(s);
        if (has_factor(s)) {
          const auto f = effective_basis_of(s, true);
          EXPECT_NEAR((*f.factor)(x) * evaluate_basis(f, free, x), ref, 1e-12 * mass) << label(s) << " n=" << n;
          EXPECT_NEAR((*f.factor)(x) * evaluate(reduced_series(s, c), x), ref, 1e-12 * mass) << label(s);
        }
        ++checked;
      }
    }
  }
  EXPECT_GE(checked, 100);
}

TEST(Basis, FactoredUnfactoredConsistency) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ux(0.0, 2 * pi);
  for (const auto& s : {scheme_spec::palindromic(11), scheme_spec::palindromic(10), scheme_spec::two_half_blocks(9),
                        scheme_spec::two_half_blocks(7, 1.0, trig_kind::full_trig), scheme_spec::block_paired(3, 17),
                        scheme_spec::block_paired(2, 15, 1.0, trig_kind::full_trig)}) {
    ASSERT_TRUE(has_factor(s));
    const auto c = sample(s, 77);
    const auto free = free_variables(s, c);
    const auto u = effective_basis_of(s, false);
    const auto f = effective_basis_of(s, true);
    for (int i = 0; i < 100; ++i) {
      const double x = ux(rng);
      const double ref = evaluate_basis(u, free, x);
      EXPECT_NEAR((*f.factor)(x) * evaluate_basis(f, free, x), ref, 1e-12 * std::max(1.0, coefficient_mass(c)));
    }
  }
}

TEST(DetFactor, ZeroCounts) {
  EXPECT_EQ(det_factor_zero_count(det_factor{rational(7 + 1, 4)}), 4);
  EXPECT_EQ(det_factor_zero_count(det_factor{rational(5, 2)}), 5);
  EXPECT_EQ(det_factor_zero_count(det_factor{rational(3, 2)}), 3);
  EXPECT_THROW(det_factor_zero_count(det_factor{rational(1, 3)}), non_integer_zero_count);
  // zeros of cos(3x/2) in (0, 2pi)
  const auto z = det_factor_zeros(det_factor{rational(3, 2)});
  ASSERT_EQ(z.size(), 3u);
  for (double x : z) {
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 2 * pi);
    EXPECT_NEAR(std::cos(1.5 * x), 0.0, 1e-14);
  }
}

TEST(Sample, EmpiricalVarianceMatchesKernel) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ux(0.05, 2 * pi - 0.05);
  const int draws = 100000;
  for (const auto& s : {scheme_spec::iid(6), scheme_spec::block_paired(2, 9), scheme_spec::two_half_blocks(8),
                        scheme_spec::palindromic(7)}) {
    const double x = ux(rng);
    const double a = kernel_exact(s, x).A;
    double sum = 0.0;
    double sum_sq = 0.0;
    double sum_4 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double v = direct_sum(sample(s, static_cast<std::uint64_t>(i) + 1000), x);
      sum += v;
      sum_sq += v * v;
      sum_4 += v * v * v * v;
    }
    const double var = sum_sq / draws - (sum / draws) * (sum / draws);
    // standard error of a sample variance: sqrt((m4 - var^2) / draws)
    const double se = std::sqrt((sum_4 / draws - var * var) / draws);
    EXPECT_NEAR(var, a, 5 * se) << label(s) << " x=" << x;
  }
}
