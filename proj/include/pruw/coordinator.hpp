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
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pruw/error.hpp"
#include "pruw/field.hpp"
#include "pruw/matrix.hpp"
#include "pruw/permutation.hpp"
#include "pruw/scheme.hpp"

namespace pruw {

/// Plaintext model: P subpackets of ell parameters, subpacket-major.
/// Global subpacket s = segment * (P/B) + subpacket.
class ModelState {
 public:
  ModelState() = default;
  ModelState(std::size_t num_subpackets, std::size_t ell)
      : p_(num_subpackets), ell_(ell), w_(num_subpackets * ell) {}

  template <NoiseSource Source>
  static ModelState random(std::size_t num_subpackets, std::size_t ell,
                           const Field& F, Source& src) {
    ModelState m(num_subpackets, ell);
    for (auto& e : m.w_) e = src.draw(F);
    return m;
  }

  std::size_t num_subpackets() const noexcept { return p_; }
  std::size_t ell() const noexcept { return ell_; }
  std::size_t size() const noexcept { return w_.size(); }

  std::span<const Elem> subpacket(std::size_t s) const {
    PRUW_ENFORCE(s < p_, Errc::index_out_of_range, "subpacket out of range");
    return std::span<const Elem>(w_).subspan(s * ell_, ell_);
  }
  std::span<Elem> subpacket(std::size_t s) {
    PRUW_ENFORCE(s < p_, Errc::index_out_of_range, "subpacket out of range");
    return std::span<Elem>(w_).subspan(s * ell_, ell_);
  }

  std::span<const Elem> values() const noexcept { return w_; }
  std::span<Elem> values() noexcept { return w_; }

  friend bool operator==(const ModelState&, const ModelState&) = default;

 private:
  std::size_t p_ = 0;
  std::size_t ell_ = 0;
  Vec w_;
};

/// What one database holds.
struct DatabaseState {
  std::size_t index = 0;  // n, 0-based
  Vec storage;
  std::vector<NoisyReversingMatrix> within;
  std::optional<NoisyReversingMatrix> inter;
  std::optional<Matrix> combined;  // cached for schemes 3/4
  std::map<PermutedId, std::uint64_t> popularity;

  friend bool operator==(const DatabaseState&, const DatabaseState&) = default;
};

/// Degree of the storage masking polynomial: ell, ell, ell+1, 2*ell.
constexpr std::size_t storage_noise_degree(Scheme s, std::size_t ell) noexcept {
  switch (s) {
    case Scheme::uncoded: return ell;
    case Scheme::coded: return ell;
    case Scheme::uncoded_two_level: return ell + 1;
    case Scheme::coded_two_level: return 2 * ell;
  }
  return 0;
}

namespace detail {

inline Elem eval_poly(const Field& F, std::span<const Elem> coeffs, Elem x) {
  Elem acc{0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
    acc = F.add(F.mul(acc, x), *it);
  return acc;
}

}  // namespace detail

/// Uncoded symbol for parameter k at database n:
///   W / (f_k - alpha_n) + sum_j alpha_n^j Z_j
inline Elem encode_uncoded_symbol(Elem w, std::size_t k,
                                  std::span<const Elem> noise_coeffs,
                                  std::size_t n, const FieldConfig& cfg) {
  const Field& F = cfg.field();
  return F.add(F.mul(w, cfg.inv_f_minus_alpha(k, n)),
               detail::eval_poly(F, noise_coeffs, cfg.alpha(n)));
}

/// Coded symbol for a whole subpacket at database n:
///   sum_{i=1..ell} alpha_n^-i W_i + sum_j alpha_n^j Z_j
inline Elem encode_coded_symbol(std::span<const Elem> w,
                                std::span<const Elem> noise_coeffs,
                                std::size_t n, const FieldConfig& cfg) {
  const Field& F = cfg.field();
  PRUW_ENFORCE(w.size() == cfg.ell(), Errc::dimension_mismatch,
               "coded symbol needs ell parameters");
  Elem inv_a = F.inv(cfg.alpha(n));
  Elem p = inv_a;
  Elem acc{0};
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc = F.mul_add(acc, p, w[i]);
    p = F.mul(p, inv_a);
  }
  return F.add(acc, detail::eval_poly(F, noise_coeffs, cfg.alpha(n)));
}

inline void check_config(const SchemeParams& params, const FieldConfig& cfg) {
  PRUW_ENFORCE(cfg.ell() == params.ell() &&
                   cfg.num_databases() == params.num_databases() &&
                   cfg.field().modulus() == params.modulus(),
               Errc::config_error,
               "field config (ell, N, q) does not match scheme parameters");
}

/// Encodes the model into N storage vectors. One masking polynomial per
/// (subpacket, parameter) for uncoded schemes and per subpacket for coded
/// ones; its coefficients are shared by all databases.
template <NoiseSource Noise>
std::vector<DatabaseState> encode_storage(const ModelState& model,
                                          const SchemeParams& params,
                                          const FieldConfig& cfg, Noise& noise) {
  check_config(params, cfg);
  PRUW_ENFORCE(model.num_subpackets() == params.num_subpackets() &&
                   model.ell() == params.ell(),
               Errc::dimension_mismatch, "model shape does not match params");
  const Field& F = cfg.field();
  const Scheme s = params.scheme();
  const std::size_t n_db = params.num_databases();
  const std::size_t ell = params.ell();
  const std::size_t deg = storage_noise_degree(s, ell);

  std::vector<DatabaseState> dbs(n_db);
  for (std::size_t n = 0; n < n_db; ++n) {
    dbs[n].index = n;
    dbs[n].storage.reserve(params.storage_length());
  }
  Vec coeffs(deg + 1);
  for (std::size_t sp = 0; sp < params.num_subpackets(); ++sp) {
    auto w = model.subpacket(sp);
    if (is_coded(s)) {
      for (auto& c : coeffs) c = noise.draw(F);
      for (std::size_t n = 0; n < n_db; ++n)
        dbs[n].storage.push_back(encode_coded_symbol(w, coeffs, n, cfg));
      continue;
    }
    for (std::size_t k = 0; k < ell; ++k) {
      for (auto& c : coeffs) c = noise.draw(F);
      for (std::size_t n = 0; n < n_db; ++n)
        dbs[n].storage.push_back(encode_uncoded_symbol(w[k], k, coeffs, n, cfg));
    }
  }
  return dbs;
}

/// Places the noisy reversing matrices for a given permutation set at every
/// database (and the combined matrix for schemes 3/4).
template <NoiseSource Noise>
void place_matrices(std::vector<DatabaseState>& dbs, const PermutationSet& ps,
                    const SchemeParams& params, const FieldConfig& cfg,
                    Noise& noise) {
  const Scheme s = params.scheme();
  ps.validate(s);
  PRUW_ENFORCE(ps.num_segments() == params.num_segments() &&
                   ps.within[0].size() == params.segment_size(),
               Errc::config_error, "permutation set does not match (P, B)");
  const Field& F = cfg.field();
  const std::size_t ell = params.ell();

  std::vector<Matrix> within_noise;
  for (std::size_t i = 0; i < params.num_segments(); ++i)
    within_noise.push_back(
        sample_within_noise(s, params.segment_size(), ell, F, noise));
  std::optional<Matrix> inter_noise;
  if (has_inter(s))
    inter_noise = sample_inter_noise(s, params.num_segments(), ell, F, noise);

  for (auto& db : dbs) {
    db.within.clear();
    for (std::size_t i = 0; i < params.num_segments(); ++i)
      db.within.push_back(
          build_noisy_within(s, ps.within[i], within_noise[i], db.index, cfg));
    db.inter.reset();
    db.combined.reset();
    if (!has_inter(s)) continue;
    db.inter = build_noisy_inter(s, *ps.inter, *inter_noise, db.index, cfg);
    db.combined = s == Scheme::uncoded_two_level
                      ? combine_case3(F, db.within, *db.inter, ell)
                      : combine_case4(F, db.within, *db.inter);
  }
}

struct InitResult {
  std::vector<DatabaseState> databases;
  PermutationSet permutations;
};

/// Coordinator with caller-chosen permutations (fixtures).
template <NoiseSource Noise>
InitResult initialize_with(const ModelState& model, const SchemeParams& params,
                           const FieldConfig& cfg, PermutationSet ps,
                           Noise& noise) {
  InitResult out;
  out.databases = encode_storage(model, params, cfg, noise);
  place_matrices(out.databases, ps, params, cfg, noise);
  out.permutations = std::move(ps);
  return out;
}

/// One-shot trusted setup: encode, sample permutations, place matrices.
template <typename Urbg, NoiseSource Noise>
InitResult initialize(const ModelState& model, const SchemeParams& params,
                      const FieldConfig& cfg, Urbg& perm_rng, Noise& noise) {
  PermutationSet ps = sample_permutation_set(
      params.scheme(), params.num_segments(), params.segment_size(), perm_rng);
  return initialize_with(model, params, cfg, std::move(ps), noise);
}

}  // namespace pruw
