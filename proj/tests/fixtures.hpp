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

#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "pruw/pruw.hpp"

namespace pruw::testing {

/// P = 15, B = 3 reference layout.
inline PermutationSet layout15(Scheme s = Scheme::uncoded) {
  PermutationSet ps;
  ps.within = {Permutation::from_one_based({2, 1, 4, 5, 3}),
               Permutation::from_one_based({3, 5, 2, 4, 1}),
               Permutation::from_one_based({5, 2, 3, 1, 4})};
  if (has_inter(s)) ps.inter = Permutation::identity(3);
  return ps;
}

/// P = 12, B = 3 reference layout with a segment permutation.
inline PermutationSet layout12(Scheme s = Scheme::uncoded_two_level) {
  PermutationSet ps;
  ps.within = {Permutation::from_one_based({2, 4, 3, 1}),
               Permutation::from_one_based({1, 3, 2, 4}),
               Permutation::from_one_based({3, 1, 4, 2})};
  if (has_inter(s)) ps.inter = Permutation::from_one_based({2, 3, 1});
  return ps;
}

/// 0/1 matrix from rows of integers.
inline Matrix ones_at(std::initializer_list<std::initializer_list<long long>> rows) {
  return Matrix::from_rows(Field(kDefaultModulus), rows);
}

// Reversing pattern of (2,1,4,5,3).
inline Matrix pattern_21453() {
  return ones_at({{0, 1, 0, 0, 0},
                  {1, 0, 0, 0, 0},
                  {0, 0, 0, 0, 1},
                  {0, 0, 1, 0, 0},
                  {0, 0, 0, 1, 0}});
}

// Segment-level structure of the 12-subpacket layout: block (i, j) holds the
// pattern of segment i where the segment permutation (2,3,1) puts it.
inline Matrix combined_pattern12() {
  return ones_at({{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
                  {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
                  {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
                  {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
                  {1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
                  {0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0},
                  {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0}});
}

/// Within matrices of every segment built with zero noise.
inline std::vector<NoisyReversingMatrix> zero_within(Scheme s, const PermutationSet& ps,
                                                     std::size_t n, const FieldConfig& cfg) {
  ZeroNoise zero;
  std::vector<NoisyReversingMatrix> out;
  for (const auto& p : ps.within) {
    Matrix z = sample_within_noise(s, p.size(), cfg.ell(), cfg.field(), zero);
    out.push_back(build_noisy_within(s, p, z, n, cfg));
  }
  return out;
}

/// 1-based (subpacket, segment) helpers.
inline SubpacketId real(std::size_t sub, std::size_t seg) { return {seg - 1, sub - 1}; }
inline PermutedId perm(std::size_t sub, std::size_t seg) { return {seg - 1, sub - 1}; }

inline Vec random_vec(std::size_t n, const Field& F, UniformNoise& rng) {
  Vec v(n);
  for (auto& e : v) e = rng.draw(F);
  return v;
}

}  // namespace pruw::testing
