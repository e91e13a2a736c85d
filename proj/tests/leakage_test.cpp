// Copyright 2026 The pruw authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"

namespace pruw {
namespace {

TEST(Histogram, Examples) {
  EXPECT_EQ(histogram_of({0, 1, 2}, 12, 3).counts, (std::vector<std::size_t>{3, 0, 0}));
  EXPECT_EQ(histogram_of({0, 4, 8}, 12, 3).counts, (std::vector<std::size_t>{1, 1, 1}));
  EXPECT_EQ(histogram_of({11}, 12, 4).counts, (std::vector<std::size_t>{0, 0, 0, 1}));
  EXPECT_THROW(histogram_of({12}, 12, 3), Error);
  EXPECT_THROW(histogram_of({0}, 12, 5), Error);
}

TEST(Entropy, UniformReferenceValues) {
  struct Row { std::size_t b; double hat; double tilde; };
  const Row rows[] = {{2, 1.6840384356390419, 0.6840384356390417},
                      {3, 2.9257478948708115, 1.1473199398139922},
                      {4, 3.8909972117545477, 1.112924711400527},
                      {6, 5.326814258979207, 0.8453509366224364}};
  auto base = PatternDistribution::uniform(12, 1, 3);
  for (const auto& r : rows) {
    auto d = base.with_segments(r.b);
    EXPECT_NEAR(entropy_hat(d).bits, r.hat, 1e-12) << "B=" << r.b;
    EXPECT_NEAR(entropy_tilde(d).bits, r.tilde, 1e-12) << "B=" << r.b;
  }
}

TEST(Entropy, SingleSegmentLeaksNothing) {
  auto d = PatternDistribution::uniform(12, 1, 3);
  EXPECT_EQ(entropy_hat(d).bits, 0.0);
  EXPECT_EQ(entropy_tilde(d).bits, 0.0);
  ASSERT_TRUE(entropy_hat(d).exact.has_value());
  EXPECT_EQ(entropy_hat(d).exact->value(), 0.0);
}

TEST(Entropy, PointMassIsZero) {
  auto d = PatternDistribution::point_mass(12, 3, {1, 5, 9});
  EXPECT_EQ(entropy_hat(d).bits, 0.0);
  EXPECT_EQ(entropy_of_pattern(d).bits, 0.0);
}

TEST(Entropy, PatternEntropyIsLogOfSupport) {
  auto d = PatternDistribution::uniform(12, 3, 3);
  EXPECT_NEAR(entropy_of_pattern(d).bits, std::log2(220.0), 1e-12);
}

TEST(Distribution, Validation) {
  EXPECT_THROW(PatternDistribution(4, 2, 2, {{{0, 1}, Rational(1, 2)}}), Error);
  EXPECT_THROW(PatternDistribution(4, 2, 2, {{{1, 0}, Rational(1)}}), Error);
  EXPECT_THROW(PatternDistribution(4, 2, 2, {{{0, 4}, Rational(1)}}), Error);
  EXPECT_THROW(PatternDistribution(4, 3, 2, {{{0, 1}, Rational(1)}}), Error);
  EXPECT_THROW(PatternDistribution(4, 2, 2, {{{0, 1}, Rational(3, 2)}, {{0, 2}, Rational(-1, 2)}}),
               Error);
  EXPECT_NO_THROW(PatternDistribution(4, 2, 2, {{{0, 1}, Rational(1)}, {{0, 2}, Rational(0)}}));
  EXPECT_THROW(PatternDistribution::uniform(60, 2, 30), Error);
}

TEST(BruteForce, MatchesClosedFormSmall) {
  auto d = PatternDistribution::uniform(4, 2, 2);
  auto within = brute_force_mi(d, PermutationMode::within_only);
  auto both = brute_force_mi(d, PermutationMode::within_and_inter);
  ASSERT_TRUE(within.exact && both.exact);
  EXPECT_EQ(*within.exact, *entropy_hat(d).exact);
  EXPECT_EQ(*both.exact, *entropy_tilde(d).exact);
  // {1/6, 4/6, 1/6} ordered, {1/3, 2/3} as a multiset.
  EXPECT_NEAR(within.bits, 1.2516291673878228, 1e-12);
  EXPECT_NEAR(both.bits, 0.9182958340544896, 1e-12);
}

TEST(BruteForce, MatchesClosedFormSkewed) {
  std::map<Pattern, std::uint64_t> w{{{0, 1}, 5}, {{0, 3}, 2}, {{2, 5}, 1}, {{4, 5}, 7}};
  auto d = PatternDistribution::from_weights(6, 3, 2, w);
  EXPECT_EQ(*brute_force_mi(d, PermutationMode::within_only).exact, *entropy_hat(d).exact);
  EXPECT_EQ(*brute_force_mi(d, PermutationMode::within_and_inter).exact,
            *entropy_tilde(d).exact);
}

TEST(BruteForce, RefusesHugeEnumeration) {
  auto d = PatternDistribution::uniform(24, 2, 2);
  try {
    brute_force_mi(d, PermutationMode::within_only);
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::infeasible_enumeration);
  }
}

TEST(LeakageCurve, MatchesDirectComputation) {
  auto rows = leakage_curve(12, 3, {1, 2, 3, 4, 6});
  auto base = PatternDistribution::uniform(12, 1, 3);
  ASSERT_EQ(rows.size(), 5u);
  for (const auto& r : rows) {
    auto d = base.with_segments(r.segments);
    EXPECT_EQ(*r.h_hat.exact, *entropy_hat(d).exact);
    EXPECT_EQ(*r.h_tilde.exact, *entropy_tilde(d).exact);
  }
}

TEST(LeakageCurve, Shape) {
  auto rows = leakage_curve(12, 3, {1, 2, 3, 4, 6});
  EXPECT_EQ(rows[0].h_hat.bits, 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_GT(rows[i].h_hat.bits, rows[i - 1].h_hat.bits);
    EXPECT_LE(rows[i].h_tilde.bits, rows[i].h_hat.bits);
  }
  // The multiset entropy peaks in the middle and falls again.
  EXPECT_GT(rows[2].h_tilde.bits, rows[1].h_tilde.bits);
  EXPECT_GT(rows[2].h_tilde.bits, rows[4].h_tilde.bits);
}

TEST(LeakageCurve, LargeModelStaysCheap) {
  auto rows = leakage_curve(1200, 6, {1, 5, 10});
  EXPECT_EQ(rows[0].h_hat.bits, 0.0);
  EXPECT_GT(rows[2].h_hat.bits, rows[1].h_hat.bits);
  EXPECT_LE(rows[2].h_tilde.bits, rows[2].h_hat.bits);
}

TEST(LeakageCurve, RefusesHugeCompositionSpace) {
  EXPECT_THROW(leakage_curve(1200, 60, {100}), Error);
}

TEST(LeakageCurve, CsvFormat) {
  std::ostringstream os;
  write_leakage_csv(os, leakage_curve(12, 3, {1, 3}));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "B,H_hat_bits,H_tilde_bits");
  std::getline(in, line);
  EXPECT_EQ(line, "1,0,0");
  std::getline(in, line);
  EXPECT_EQ(line.rfind("3,2.92574789487,1.14731993981", 0), 0u) << line;
}

TEST(ChooseSegments, PicksSmallestStorageUnderBudget) {
  auto pick = choose_segments(Scheme::uncoded, 8, 12, 3, 1e9);
  ASSERT_TRUE(pick);
  EXPECT_EQ(*pick, 6u);
  auto none = choose_segments(Scheme::uncoded, 8, 12, 3, 0.0);
  EXPECT_FALSE(none);
  auto tight = choose_segments(Scheme::uncoded, 8, 12, 3, 1e-9);
  ASSERT_TRUE(tight);
  EXPECT_EQ(*tight, 1u);
}

TEST(ExactArithmetic, LogLinearIdentities) {
  LogLinear a = LogLinear::log2_of(Rational(12));
  LogLinear b = LogLinear::log2_of(Rational(3));
  b += LogLinear::log2_of(Rational(4));
  EXPECT_EQ(a, b);
  LogLinear c = LogLinear::log2_of(Rational(1, 8));
  EXPECT_NEAR(c.value(), -3.0, 1e-15);
  EXPECT_FALSE(LogLinear::log2_of(Rational(3)) == LogLinear::log2_of(Rational(5)));
}

}  // namespace
}  // namespace pruw
