#include <cmath>
#include <cstdio>
#include <numbers>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "rtz/polyeval.hpp"
#include "rtz/random.hpp"
#include "rtz/rootcount.hpp"
#include "rtz/schemes.hpp"

using namespace rtz;

namespace {

constexpr double pi = std::numbers::pi;

// Strict sign changes over a uniform grid of `points` on (0, 2pi).
int brute_count(series_view s, int points) {
  std::vector<double> xs(points);
  for (int i = 0; i < points; ++i) xs[i] = two_pi * (i + 0.5) / points;
  const auto v = evaluate_points(s, xs);
  int count = 0;
  for (int i = 1; i < points; ++i)
    if ((v[i - 1] < 0) != (v[i] < 0)) ++count;
  // wrap-around cell through x = 0
  if ((v.back() < 0) != (v.front() < 0)) ++count;
  return count;
}

}  // namespace

TEST(CountZeros, TrivialCases) {
  const auto r = count_zeros(coefficient_vector{{0, 1}}, kDefaultPointsPerDegree, true);
  EXPECT_EQ(r.count, 2);
  ASSERT_TRUE(r.zeros);
  EXPECT_NEAR((*r.zeros)[0], pi / 2, 1e-12);
  EXPECT_NEAR((*r.zeros)[1], 3 * pi / 2, 1e-12);
  EXPECT_EQ(count_zeros(coefficient_vector{{3.0}}).count, 0);
  EXPECT_THROW(count_zeros(coefficient_vector{{0.0, 0.0, 0.0}}), degenerate_input);
}

TEST(CountZeros, FullTrig) {
  // sin(3x) has zeros k pi / 3, k = 1..5 in (0, 2pi)
  coefficient_vector c{{0, 0, 0, 0}, std::vector<double>{0, 0, 0, 1}};
  EXPECT_EQ(count_zeros(c).count, 5);
}

TEST(CountZeros, MatchesBruteForceSmallDegree) {
  for (int n : {2, 4, 6, 8}) {
    int agree = 0;
    const int draws = 500;
    for (int d = 0; d < draws; ++d) {
      const std::uint64_t seed = trial_seed(1234 + n, d);
      const auto c = sample(scheme_spec::iid(n), seed);
      const int fast = count_zeros(c).count;
      const int slow = brute_count(c, 1000000);
      if (fast == slow) ++agree;
      else std::printf("n=%d seed=%llu grid=%d brute=%d\n", n, static_cast<unsigned long long>(seed), fast, slow);
      EXPECT_LE(fast, 2 * n);
    }
    EXPECT_GE(agree, 0.99 * draws) << "n=" << n;
  }
}

TEST(CountZeros, NeverExceedsTwiceDegree) {
  for (int n : {1, 3, 10, 50}) {
    for (int d = 0; d < 100; ++d) {
      const auto c = sample(scheme_spec::iid(n, 1.0, trig_kind::full_trig), trial_seed(9, d));
      EXPECT_LE(count_zeros(c).count, 2 * n);
    }
  }
}

TEST(CountZeros, ZerosAreSortedRoots) {
  const auto c = sample(scheme_spec::iid(40), 77);
  const auto r = count_zeros(c, kDefaultPointsPerDegree, true);
  ASSERT_TRUE(r.zeros);
  ASSERT_EQ(static_cast<int>(r.zeros->size()), r.count);
  for (std::size_t i = 1; i < r.zeros->size(); ++i) EXPECT_LT((*r.zeros)[i - 1], (*r.zeros)[i]);
  for (double z : *r.zeros) EXPECT_LE(std::abs(evaluate(c, z)), 1e-9 * abs_coefficient_sum(c));
}

TEST(CountZeros, GridDensityMonotone) {
  for (int d = 0; d < 200; ++d) {
    const auto c = sample(scheme_spec::iid(12), trial_seed(55, d));
    EXPECT_LE(count_zeros(c, 4).count, count_zeros(c, 8).count);
    EXPECT_LE(count_zeros(c, 16).count, count_zeros(c, 32).count);
  }
}

TEST(CountZeros, HiddenPairInsideOneCell) {
  // -cos(0.001) - cos(x): zeros at pi +- 0.001, same sign at both ends of the cell
  coefficient_vector c{{-std::cos(0.001), -1.0}};
  EXPECT_EQ(count_zeros(c, 1).count, 2);
}

TEST(RefineZero, CosRoot) {
  EXPECT_NEAR(refine_zero(coefficient_vector{{0, 1}}, 1.0, 2.0), pi / 2, 1e-12);
}

TEST(RefineZero, TangentialHasNoBracket) {
  EXPECT_THROW(refine_zero(coefficient_vector{{-1, 0, 1}}, 0.1, 1.5), not_bracketed);
}

TEST(RefineZero, ResidualSmall) {
  for (int d = 0; d < 20; ++d) {
    const auto c = sample(scheme_spec::iid(3), trial_seed(3, d));
    const auto r = count_zeros(c, kDefaultPointsPerDegree, true);
    for (double z : *r.zeros) {
      const double root = refine_zero(c, z - 1e-3, z + 1e-3);
      EXPECT_LE(std::abs(evaluate(c, root)), 1e-9 * abs_coefficient_sum(c));
    }
  }
}

TEST(Factored, TwoHalfDegreeThree) {
  const auto s = scheme_spec::two_half_blocks(3);
  coefficient_vector c{{1, 0, 1, 0}};
  // V = 1 + cos 2x = 2 cos^2 x: two double zeros, no sign change
  EXPECT_EQ(count_zeros_factored(s, c).count, 4);
  EXPECT_EQ(count_zeros(c).count, 0);
}

TEST(Factored, PalindromicTangentialZero) {
  // 1 + cos x = 2 cos^2(x/2): double zero at pi
  const auto s = scheme_spec::palindromic(1);
  coefficient_vector c{{1, 1}};
  EXPECT_EQ(count_zeros_factored(s, c).count, 2);
  EXPECT_EQ(count_zeros(c).count, 0);
}

TEST(Factored, BlockPairedDegreeOne) {
  const auto s = scheme_spec::block_paired(1, 1);
  coefficient_vector c{{0.7, 0.7}};
  EXPECT_EQ(count_zeros_factored(s, c).count, 2);
}

TEST(Factored, DirectMissesOnlyTheDoubleZeroAtPi) {
  // Half-odd reduced frequencies put a zero of V* on the prefactor zero at pi.
  const std::pair<scheme_spec, int> cases[] = {
      {scheme_spec::two_half_blocks(19), 0}, {scheme_spec::two_half_blocks(21), 2},
      {scheme_spec::block_paired(2, 23), 0}, {scheme_spec::block_paired(3, 23), 2},
      {scheme_spec::palindromic(20), 0},     {scheme_spec::palindromic(21), 2}};
  for (const auto& [s, missed] : cases) {
    for (int d = 0; d < 100; ++d) {
      const auto c = sample(s, trial_seed(8, d));
      EXPECT_EQ(count_zeros_factored(s, c).count - count_zeros(c).count, missed) << label(s) << " draw " << d;
    }
  }
}

TEST(Factored, Unavailable) {
  EXPECT_THROW(count_zeros_factored(scheme_spec::iid(4), sample(scheme_spec::iid(4), 1)), factor_unavailable);
}

TEST(CountZeros, MeanStableUnderGridRefinement) {
  const auto s = scheme_spec::iid(50);
  long long a = 0;
  long long b = 0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) {
    const auto c = sample(s, trial_seed(2024, i));
    a += count_zeros(c, 32).count;
    b += count_zeros(c, 64).count;
  }
  EXPECT_LT(std::abs(static_cast<double>(a - b) / trials), 0.1);
}
