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

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pruw/error.hpp"
#include "pruw/field.hpp"
#include "pruw/matrix.hpp"
#include "pruw/scheme.hpp"

namespace pruw {

/// Bijection on {0..m-1} in one-line notation: operator()(i) is the real
/// index stored at permuted slot i. The inverse is kept alongside.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> mapping)
      : map_(std::move(mapping)), inv_(map_.size(), map_.size()) {
    for (std::size_t i = 0; i < map_.size(); ++i) {
      PRUW_ENFORCE(map_[i] < map_.size() && inv_[map_[i]] == map_.size(),
                   Errc::config_error, "mapping is not a bijection");
      inv_[map_[i]] = i;
    }
  }

  static Permutation identity(std::size_t m) {
    std::vector<std::size_t> v(m);
    for (std::size_t i = 0; i < m; ++i) v[i] = i;
    return Permutation(std::move(v));
  }

  /// Fixtures are written 1-based, e.g. {2,1,4,5,3}.
  static Permutation from_one_based(std::initializer_list<std::size_t> one_based) {
    std::vector<std::size_t> v;
    for (std::size_t x : one_based) {
      PRUW_ENFORCE(x >= 1, Errc::config_error, "one-based entries start at 1");
      v.push_back(x - 1);
    }
    return Permutation(std::move(v));
  }

  std::size_t size() const noexcept { return map_.size(); }

  /// real index at permuted slot i
  std::size_t operator()(std::size_t i) const {
    PRUW_ENFORCE(i < map_.size(), Errc::index_out_of_range,
                 "permutation argument out of range");
    return map_[i];
  }
  /// permuted slot holding real index r
  std::size_t inverse(std::size_t r) const {
    PRUW_ENFORCE(r < inv_.size(), Errc::index_out_of_range,
                 "permutation argument out of range");
    return inv_[r];
  }

  std::span<const std::size_t> mapping() const noexcept { return map_; }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.map_ == b.map_;
  }

 private:
  std::vector<std::size_t> map_;
  std::vector<std::size_t> inv_;
};

/// Uniform over all m! permutations (Fisher-Yates).
template <typename Urbg>
Permutation sample_permutation(std::size_t m, Urbg& rng) {
  PRUW_ENFORCE(m >= 1, Errc::config_error, "permutation size must be >= 1");
  std::vector<std::size_t> v(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = i;
  for (std::size_t i = m - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> d(0, i);
    std::swap(v[i], v[d(rng)]);
  }
  return Permutation(std::move(v));
}

/// 0/1 matrix mapping a permuted-order vector back to real order:
/// entry (i, j) = 1 iff p(j) = i.
inline Matrix reversing_matrix(const Permutation& p) {
  Matrix m(p.size(), p.size());
  for (std::size_t j = 0; j < p.size(); ++j) m(p(j), j) = Elem{1};
  return m;
}

/// Gamma_n = diag(1/(f_1 - alpha_n), ..., 1/(f_ell - alpha_n)).
struct GammaDiagonal {
  Vec diag;

  static GammaDiagonal make(std::size_t n, const FieldConfig& cfg) {
    GammaDiagonal g;
    for (std::size_t k = 0; k < cfg.ell(); ++k)
      g.diag.push_back(cfg.inv_f_minus_alpha(k, n));
    return g;
  }

  /// Gamma_n^-1 = diag(f_k - alpha_n)
  static GammaDiagonal make_inverse(std::size_t n, const FieldConfig& cfg) {
    GammaDiagonal g;
    for (std::size_t k = 0; k < cfg.ell(); ++k)
      g.diag.push_back(cfg.f_minus_alpha(k, n));
    return g;
  }

  Matrix matrix() const { return diagonal(diag); }
};

enum class MatrixRole { within, inter };

/// A permutation-reversing matrix as stored at one database, i.e. already
/// masked. The structural part cannot be recovered from `entries`.
struct NoisyReversingMatrix {
  Scheme scheme = Scheme::uncoded;
  MatrixRole role = MatrixRole::within;
  Matrix entries;

  friend bool operator==(const NoisyReversingMatrix&,
                         const NoisyReversingMatrix&) = default;
};

namespace detail {

template <NoiseSource Noise>
Matrix sample_matrix(std::size_t n, const Field& F, Noise& noise) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = noise.draw(F);
  return m;
}

}  // namespace detail

/// Side of the within-segment noise matrix: m*ell uncoded, m coded.
inline std::size_t within_matrix_size(Scheme s, std::size_t m, std::size_t ell) {
  return is_coded(s) ? m : m * ell;
}

/// Side of the inter-segment noise matrix: B*ell for scheme 3, B for 4.
inline std::size_t inter_matrix_size(Scheme s, std::size_t b, std::size_t ell) {
  PRUW_ENFORCE(has_inter(s), Errc::invalid_case,
               "inter-segment matrices exist only for cases 3 and 4");
  return s == Scheme::uncoded_two_level ? b * ell : b;
}

/// The noise matrix is shared by all N databases: each database receives
/// the same Z evaluated against its own alpha_n. Sample it once per
/// permutation and pass it to the builders below.
template <NoiseSource Noise>
Matrix sample_within_noise(Scheme s, std::size_t m, std::size_t ell,
                           const Field& F, Noise& noise) {
  return detail::sample_matrix(within_matrix_size(s, m, ell), F, noise);
}

template <NoiseSource Noise>
Matrix sample_inter_noise(Scheme s, std::size_t b, std::size_t ell,
                          const Field& F, Noise& noise) {
  return detail::sample_matrix(inter_matrix_size(s, b, ell), F, noise);
}

/// Uncoded: (R~ (x) Gamma_n) + Z~.  Coded: R_bar + alpha_n^ell * Z_bar.
inline NoisyReversingMatrix build_noisy_within(Scheme s, const Permutation& p,
                                               const Matrix& noise,
                                               std::size_t n,
                                               const FieldConfig& cfg) {
  const Field& F = cfg.field();
  const std::size_t side = within_matrix_size(s, p.size(), cfg.ell());
  PRUW_ENFORCE(noise.rows() == side && noise.cols() == side,
               Errc::dimension_mismatch,
               "within noise must be " + std::to_string(side) + " square");
  NoisyReversingMatrix out{s, MatrixRole::within, {}};
  Matrix rev = reversing_matrix(p);
  if (is_coded(s)) {
    Elem a = cfg.alpha_pow(n, static_cast<std::int64_t>(cfg.ell()));
    out.entries = add(F, rev, scale(F, a, noise));
  } else {
    out.entries = add(F, kron(F, rev, GammaDiagonal::make(n, cfg).matrix()), noise);
  }
  return out;
}

/// Scheme 3: (R_bar (x) I_ell) + (I_B (x) Gamma_n^-1) Z_hat.
/// Scheme 4: R_hat + alpha_n^ell * Z.
inline NoisyReversingMatrix build_noisy_inter(Scheme s, const Permutation& p_hat,
                                              const Matrix& noise, std::size_t n,
                                              const FieldConfig& cfg) {
  PRUW_ENFORCE(has_inter(s), Errc::invalid_case,
               "inter-segment matrices exist only for cases 3 and 4");
  const Field& F = cfg.field();
  const std::size_t ell = cfg.ell();
  const std::size_t side = inter_matrix_size(s, p_hat.size(), ell);
  PRUW_ENFORCE(noise.rows() == side && noise.cols() == side,
               Errc::dimension_mismatch,
               "inter noise must be " + std::to_string(side) + " square");
  NoisyReversingMatrix out{s, MatrixRole::inter, {}};
  Matrix rev = reversing_matrix(p_hat);
  if (s == Scheme::coded_two_level) {
    Elem a = cfg.alpha_pow(n, static_cast<std::int64_t>(ell));
    out.entries = add(F, rev, scale(F, a, noise));
    return out;
  }
  Matrix m = kron(F, rev, Matrix::identity(ell));
  GammaDiagonal ginv = GammaDiagonal::make_inverse(n, cfg);
  for (std::size_t i = 0; i < side; ++i) {
    Elem row_scale = ginv.diag[i % ell];
    for (std::size_t j = 0; j < side; ++j)
      m(i, j) = F.add(m(i, j), F.mul(row_scale, noise(i, j)));
  }
  out.entries = std::move(m);
  return out;
}

/// Scheme 3 combined matrix (L x L):
///   blockdiag(R^[1..B]) x [ I_{P/B} (x) b_{ij} ]
/// where b_{ij} is the (i, j) ell x ell block of the inter matrix.
inline Matrix combine_case3(const Field& F,
                            std::span<const NoisyReversingMatrix> within,
                            const NoisyReversingMatrix& inter, std::size_t ell) {
  const std::size_t b = within.size();
  PRUW_ENFORCE(b >= 1 && ell >= 1, Errc::dimension_mismatch,
               "combine_case3: need at least one segment");
  const std::size_t w = within[0].entries.rows();
  PRUW_ENFORCE(w % ell == 0, Errc::dimension_mismatch,
               "within matrix side not a multiple of ell");
  const std::size_t m = w / ell;
  for (const auto& r : within) {
    PRUW_ENFORCE(r.entries.rows() == w && r.entries.cols() == w,
                 Errc::dimension_mismatch, "within matrices differ in size");
  }
  PRUW_ENFORCE(inter.entries.rows() == b * ell && inter.entries.cols() == b * ell,
               Errc::dimension_mismatch, "inter matrix must be B*ell square");

  Matrix out(b * w, b * w);
  for (std::size_t i = 0; i < b; ++i) {
    const Matrix& wi = within[i].entries;
    for (std::size_t j = 0; j < b; ++j) {
      // block (i, j) = W_i * (I_m (x) b_ij)
      for (std::size_t r = 0; r < w; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          for (std::size_t l = 0; l < ell; ++l) {
            Elem acc{0};
            for (std::size_t k = 0; k < ell; ++k) {
              acc = F.mul_add(acc, wi(r, c * ell + k),
                              inter.entries(i * ell + k, j * ell + l));
            }
            out(i * w + r, j * w + c * ell + l) = acc;
          }
        }
      }
    }
  }
  return out;
}

/// Scheme 4 combined matrix (P x P): blockdiag(R^[1..B]) x (R_hat_n (x) I_{P/B}).
inline Matrix combine_case4(const Field& F,
                            std::span<const NoisyReversingMatrix> within,
                            const NoisyReversingMatrix& inter) {
  const std::size_t b = within.size();
  PRUW_ENFORCE(b >= 1, Errc::dimension_mismatch,
               "combine_case4: need at least one segment");
  const std::size_t m = within[0].entries.rows();
  for (const auto& r : within) {
    PRUW_ENFORCE(r.entries.rows() == m && r.entries.cols() == m,
                 Errc::dimension_mismatch, "within matrices differ in size");
  }
  PRUW_ENFORCE(inter.entries.rows() == b && inter.entries.cols() == b,
               Errc::dimension_mismatch, "inter matrix must be B square");
  Matrix out(b * m, b * m);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < b; ++j) {
      Elem s = inter.entries(i, j);
      if (s.v == 0) continue;
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c)
          out(i * m + r, j * m + c) = F.mul(s, within[i].entries(r, c));
    }
  return out;
}

/// The user-side secret: B within-segment permutations and, for schemes 3
/// and 4, one permutation of the segments.
struct PermutationSet {
  std::vector<Permutation> within;
  std::optional<Permutation> inter;

  std::size_t num_segments() const noexcept { return within.size(); }

  void validate(Scheme s) const {
    PRUW_ENFORCE(!within.empty(), Errc::config_error, "no within permutations");
    for (const auto& p : within) {
      PRUW_ENFORCE(p.size() == within[0].size(), Errc::config_error,
                   "within permutations differ in size");
    }
    PRUW_ENFORCE(inter.has_value() == has_inter(s), Errc::config_error,
                 "inter permutation must be present exactly for cases 3 and 4");
    if (inter) {
      PRUW_ENFORCE(inter->size() == within.size(), Errc::config_error,
                   "inter permutation must have size B");
    }
  }

  friend bool operator==(const PermutationSet&, const PermutationSet&) = default;
};

template <typename Urbg>
PermutationSet sample_permutation_set(Scheme s, std::size_t b, std::size_t m,
                                      Urbg& rng) {
  PermutationSet ps;
  for (std::size_t i = 0; i < b; ++i) ps.within.push_back(sample_permutation(m, rng));
  if (has_inter(s)) ps.inter = sample_permutation(b, rng);
  return ps;
}

inline SubpacketId permuted_to_real(const PermutationSet& ps, Scheme s,
                                    PermutedId id) {
  PRUW_ENFORCE(id.segment < ps.within.size(), Errc::index_out_of_range,
               "segment index out of range");
  std::size_t seg = id.segment;
  if (has_inter(s)) {
    PRUW_ENFORCE(ps.inter.has_value(), Errc::config_error,
                 "missing inter permutation");
    seg = (*ps.inter)(id.segment);
  }
  return SubpacketId{seg, ps.within[seg](id.subpacket)};
}

inline PermutedId real_to_permuted(const PermutationSet& ps, Scheme s,
                                   SubpacketId id) {
  PRUW_ENFORCE(id.segment < ps.within.size(), Errc::index_out_of_range,
               "segment index out of range");
  std::size_t sub = ps.within[id.segment].inverse(id.subpacket);
  std::size_t seg = id.segment;
  if (has_inter(s)) {
    PRUW_ENFORCE(ps.inter.has_value(), Errc::config_error,
                 "missing inter permutation");
    seg = ps.inter->inverse(id.segment);
  }
  return PermutedId{seg, sub};
}

}  // namespace pruw
