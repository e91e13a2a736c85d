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

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "fixtures.hpp"

namespace pruw {
namespace {

using testing::layout12;
using testing::layout15;
using testing::combined_pattern12;
using testing::ones_at;
using testing::pattern_21453;
using testing::perm;
using testing::real;
using testing::zero_within;

TEST(Permutation, SizeOne) {
  std::mt19937_64 rng(1);
  EXPECT_EQ(sample_permutation(1, rng), Permutation::identity(1));
}

TEST(Permutation, DeterministicForSeed) {
  std::mt19937_64 a(9);
  std::mt19937_64 b(9);
  EXPECT_EQ(sample_permutation(7, a), sample_permutation(7, b));
}

TEST(Permutation, InverseAndOneBased) {
  Permutation p = Permutation::from_one_based({2, 1, 4, 5, 3});
  EXPECT_EQ(p(0), 1u);
  EXPECT_EQ(p(4), 2u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(p.inverse(p(i)), i);
  EXPECT_THROW(Permutation::from_one_based({1, 1, 2}), Error);
}

TEST(Permutation, UniformOverThreeElements) {
  std::mt19937_64 rng(2024);
  std::map<std::vector<std::size_t>, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    Permutation p = sample_permutation(3, rng);
    ++counts[{p(0), p(1), p(2)}];
  }
  ASSERT_EQ(counts.size(), 6u);
  double chi2 = 0.0;
  const double expected = draws / 6.0;
  for (const auto& [k, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Five degrees of freedom; 20.515 is the 0.999 quantile.
  EXPECT_LT(chi2, 20.515);
}

TEST(ReversingMatrix, Identity) {
  EXPECT_EQ(reversing_matrix(Permutation::identity(4)), Matrix::identity(4));
}

TEST(ReversingMatrix, FiveElementPattern) {
  EXPECT_EQ(reversing_matrix(Permutation::from_one_based({2, 1, 4, 5, 3})), pattern_21453());
}

TEST(ReversingMatrix, RestoresRealOrderExhaustive) {
  Field F;
  for (std::size_t m = 1; m <= 4; ++m) {
    std::vector<std::size_t> map(m);
    std::iota(map.begin(), map.end(), std::size_t{0});
    do {
      Permutation p(map);
      Vec v(m);
      for (std::size_t i = 0; i < m; ++i) v[i] = Elem{100 + i};
      Vec permuted(m);
      for (std::size_t i = 0; i < m; ++i) permuted[i] = v[p(i)];
      EXPECT_EQ(mul(F, reversing_matrix(p), permuted), v);
    } while (std::next_permutation(map.begin(), map.end()));
  }
}

TEST(NoisyWithin, CodedZeroNoiseIsPattern) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 1, 4);
  ZeroNoise zero;
  Matrix z = sample_within_noise(Scheme::coded, 5, 1, cfg.field(), zero);
  auto r = build_noisy_within(Scheme::coded, Permutation::from_one_based({2, 1, 4, 5, 3}), z,
                              0, cfg);
  EXPECT_EQ(r.entries, pattern_21453());
  EXPECT_EQ(r.role, MatrixRole::within);
}

TEST(NoisyWithin, UncodedZeroNoiseIsKronGamma) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 2, 6);
  const Field& F = cfg.field();
  ZeroNoise zero;
  Matrix z = sample_within_noise(Scheme::uncoded, 5, 2, F, zero);
  for (std::size_t n = 0; n < 6; ++n) {
    Matrix gamma = GammaDiagonal::make(n, cfg).matrix();
    auto r = build_noisy_within(Scheme::uncoded, Permutation::from_one_based({2, 1, 4, 5, 3}),
                                z, n, cfg);
    EXPECT_EQ(r.entries, kron(F, pattern_21453(), gamma));
    auto id = build_noisy_within(Scheme::uncoded, Permutation::identity(5), z, n, cfg);
    EXPECT_EQ(id.entries, kron(F, Matrix::identity(5), gamma));
  }
}

TEST(NoisyWithin, NoiseEnters) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 1, 4);
  const Field& F = cfg.field();
  UniformNoise rng(5);
  Matrix z = sample_within_noise(Scheme::coded, 3, 1, F, rng);
  auto r = build_noisy_within(Scheme::coded, Permutation::identity(3), z, 2, cfg);
  Matrix expect = add(F, Matrix::identity(3), scale(F, cfg.alpha(2), z));
  EXPECT_EQ(r.entries, expect);
  EXPECT_THROW(build_noisy_within(Scheme::coded, Permutation::identity(4), z, 0, cfg), Error);
}

TEST(GammaDiagonal, InverseMatches) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 3, 8);
  const Field& F = cfg.field();
  for (std::size_t n = 0; n < 8; ++n) {
    auto g = GammaDiagonal::make(n, cfg);
    auto gi = GammaDiagonal::make_inverse(n, cfg);
    EXPECT_EQ(mul(F, g.matrix(), gi.matrix()), Matrix::identity(3));
  }
}

TEST(NoisyInter, CodedZeroNoiseThreeSegments) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 1, 6);
  ZeroNoise zero;
  Matrix z = sample_inter_noise(Scheme::coded_two_level, 3, 1, cfg.field(), zero);
  auto r = build_noisy_inter(Scheme::coded_two_level, Permutation::from_one_based({2, 3, 1}),
                             z, 0, cfg);
  EXPECT_EQ(r.entries, ones_at({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}}));
  EXPECT_EQ(r.role, MatrixRole::inter);
}

TEST(NoisyInter, UncodedSingleSegment) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 2, 8);
  const Field& F = cfg.field();
  UniformNoise rng(8);
  Matrix z = sample_inter_noise(Scheme::uncoded_two_level, 1, 2, F, rng);
  auto r = build_noisy_inter(Scheme::uncoded_two_level, Permutation::identity(1), z, 3, cfg);
  Matrix expect =
      add(F, Matrix::identity(2), mul(F, GammaDiagonal::make_inverse(3, cfg).matrix(), z));
  EXPECT_EQ(r.entries, expect);
}

TEST(NoisyInter, RejectsSingleLevelSchemes) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 1, 4);
  Matrix z(1, 1);
  try {
    build_noisy_inter(Scheme::uncoded, Permutation::identity(1), z, 0, cfg);
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_case);
  }
}

TEST(CombineCase3, ZeroNoiseTwelveSubpackets) {
  for (std::size_t ell : {1u, 2u}) {
    FieldConfig cfg = FieldConfig::make_default(Field(), ell, 2 * ell + 4);
    const Field& F = cfg.field();
    PermutationSet ps = layout12();
    ZeroNoise zero;
    for (std::size_t n = 0; n < cfg.num_databases(); ++n) {
      auto within = zero_within(Scheme::uncoded_two_level, ps, n, cfg);
      Matrix zi = sample_inter_noise(Scheme::uncoded_two_level, 3, ell, F, zero);
      auto inter = build_noisy_inter(Scheme::uncoded_two_level, *ps.inter, zi, n, cfg);
      Matrix got = combine_case3(F, within, inter, ell);
      Matrix expect = kron(F, combined_pattern12(), GammaDiagonal::make(n, cfg).matrix());
      EXPECT_EQ(got, expect) << "ell " << ell << " n " << n;
    }
  }
}

TEST(CombineCase3, SingleSegmentIdentity) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 2, 8);
  const Field& F = cfg.field();
  PermutationSet ps{{Permutation::identity(6)}, Permutation::identity(1)};
  ZeroNoise zero;
  auto within = zero_within(Scheme::uncoded_two_level, ps, 1, cfg);
  Matrix zi = sample_inter_noise(Scheme::uncoded_two_level, 1, 2, F, zero);
  auto inter = build_noisy_inter(Scheme::uncoded_two_level, *ps.inter, zi, 1, cfg);
  EXPECT_EQ(combine_case3(F, within, inter, 2),
            kron(F, Matrix::identity(6), GammaDiagonal::make(1, cfg).matrix()));
}

TEST(CombineCase3, MatchesDefinitionWithNoise) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 2, 8);
  const Field& F = cfg.field();
  PermutationSet ps = layout12();
  UniformNoise rng(77);
  std::vector<NoisyReversingMatrix> within;
  for (const auto& p : ps.within) {
    Matrix z = sample_within_noise(Scheme::uncoded_two_level, 4, 2, F, rng);
    within.push_back(build_noisy_within(Scheme::uncoded_two_level, p, z, 2, cfg));
  }
  Matrix zi = sample_inter_noise(Scheme::uncoded_two_level, 3, 2, F, rng);
  auto inter = build_noisy_inter(Scheme::uncoded_two_level, *ps.inter, zi, 2, cfg);
  // blockdiag(W) * [I_m (x) b_ij]
  std::vector<Matrix> blocks;
  for (const auto& w : within) blocks.push_back(w.entries);
  Matrix right(24, 24);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      Matrix bij = kron(F, Matrix::identity(4), submatrix(inter.entries, 2 * i, 2 * j, 2, 2));
      for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c) right(8 * i + r, 8 * j + c) = bij(r, c);
    }
  EXPECT_EQ(combine_case3(F, within, inter, 2), mul(F, block_diagonal(blocks), right));
}

TEST(CombineCase4, ZeroNoiseTwelveSubpackets) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 1, 6);
  const Field& F = cfg.field();
  PermutationSet ps = layout12(Scheme::coded_two_level);
  ZeroNoise zero;
  auto within = zero_within(Scheme::coded_two_level, ps, 0, cfg);
  Matrix zi = sample_inter_noise(Scheme::coded_two_level, 3, 1, F, zero);
  auto inter = build_noisy_inter(Scheme::coded_two_level, *ps.inter, zi, 0, cfg);
  EXPECT_EQ(combine_case4(F, within, inter), combined_pattern12());
}

TEST(CombineCase4, MatchesDefinitionWithNoise) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 1, 6);
  const Field& F = cfg.field();
  PermutationSet ps = layout12(Scheme::coded_two_level);
  UniformNoise rng(78);
  std::vector<NoisyReversingMatrix> within;
  std::vector<Matrix> blocks;
  for (const auto& p : ps.within) {
    Matrix z = sample_within_noise(Scheme::coded_two_level, 4, 1, F, rng);
    within.push_back(build_noisy_within(Scheme::coded_two_level, p, z, 4, cfg));
    blocks.push_back(within.back().entries);
  }
  Matrix zi = sample_inter_noise(Scheme::coded_two_level, 3, 1, F, rng);
  auto inter = build_noisy_inter(Scheme::coded_two_level, *ps.inter, zi, 4, cfg);
  Matrix expect = mul(F, block_diagonal(blocks), kron(F, inter.entries, Matrix::identity(4)));
  EXPECT_EQ(combine_case4(F, within, inter), expect);
}

TEST(CombineCase4, SingleSegment) {
  FieldConfig cfg = FieldConfig::make_default(Field(), 1, 6);
  const Field& F = cfg.field();
  UniformNoise rng(4);
  PermutationSet ps{{Permutation::from_one_based({2, 1, 3})}, Permutation::identity(1)};
  Matrix zw = sample_within_noise(Scheme::coded_two_level, 3, 1, F, rng);
  std::vector<NoisyReversingMatrix> within{
      build_noisy_within(Scheme::coded_two_level, ps.within[0], zw, 0, cfg)};
  Matrix zi = sample_inter_noise(Scheme::coded_two_level, 1, 1, F, rng);
  auto inter = build_noisy_inter(Scheme::coded_two_level, *ps.inter, zi, 0, cfg);
  EXPECT_EQ(combine_case4(F, within, inter), scale(F, inter.entries(0, 0), within[0].entries));
}

TEST(Combine, DimensionMismatch) {
  Field F;
  NoisyReversingMatrix w{Scheme::coded_two_level, MatrixRole::within, Matrix::identity(3)};
  NoisyReversingMatrix bad{Scheme::coded_two_level, MatrixRole::inter, Matrix::identity(2)};
  std::vector<NoisyReversingMatrix> within{w};
  try {
    combine_case4(F, within, bad);
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
  }
  EXPECT_THROW(combine_case3(F, within, bad, 2), Error);
}

TEST(IndexMapping, WithinOnlyReference) {
  PermutationSet ps = layout15();
  // Permuted {1,3} of segment 1 are real {2,4}.
  EXPECT_EQ(permuted_to_real(ps, Scheme::uncoded, perm(1, 1)), real(2, 1));
  EXPECT_EQ(permuted_to_real(ps, Scheme::uncoded, perm(3, 1)), real(4, 1));
  EXPECT_EQ(real_to_permuted(ps, Scheme::coded, real(2, 1)), perm(1, 1));
}

TEST(IndexMapping, TwoLevelReference) {
  PermutationSet ps = layout12();
  EXPECT_EQ(permuted_to_real(ps, Scheme::uncoded_two_level, perm(1, 3)), real(2, 1));
  EXPECT_EQ(permuted_to_real(ps, Scheme::coded_two_level, perm(1, 1)), real(1, 2));
  EXPECT_EQ(permuted_to_real(ps, Scheme::coded_two_level, perm(1, 2)), real(3, 3));
  EXPECT_EQ(real_to_permuted(ps, Scheme::uncoded_two_level, real(2, 1)), perm(1, 3));
}

TEST(IndexMapping, IdentityIsFixed) {
  PermutationSet ps{{Permutation::identity(4), Permutation::identity(4)},
                    Permutation::identity(2)};
  for (std::size_t seg = 0; seg < 2; ++seg)
    for (std::size_t sub = 0; sub < 4; ++sub) {
      EXPECT_EQ(permuted_to_real(ps, Scheme::coded_two_level, PermutedId{seg, sub}),
                (SubpacketId{seg, sub}));
    }
}

TEST(IndexMapping, OutOfRange) {
  PermutationSet ps = layout15();
  try {
    permuted_to_real(ps, Scheme::uncoded, PermutedId{3, 0});
    FAIL() << "expected an exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::index_out_of_range);
  }
  EXPECT_THROW(real_to_permuted(ps, Scheme::uncoded, SubpacketId{0, 5}), Error);
}

TEST(PermutationSet, ValidateChecksInterPresence) {
  PermutationSet ps = layout15();
  EXPECT_NO_THROW(ps.validate(Scheme::uncoded));
  EXPECT_THROW(ps.validate(Scheme::uncoded_two_level), Error);
  std::mt19937_64 rng(3);
  PermutationSet one = sample_permutation_set(Scheme::coded_two_level, 1, 12, rng);
  EXPECT_EQ(one.within.size(), 1u);
  EXPECT_EQ(one.within[0].size(), 12u);
  EXPECT_EQ(*one.inter, Permutation::identity(1));
}

}  // namespace
}  // namespace pruw
