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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <vector>

#include "pruw/database.hpp"
#include "pruw/decode.hpp"
#include "pruw/error.hpp"
#include "pruw/field.hpp"
#include "pruw/permutation.hpp"
#include "pruw/scheme.hpp"

namespace pruw {

/// A user's full update for one round. Subpackets missing from `deltas`
/// are zero; `magnitude_key` ranks subpackets for sparsification and must
/// cover all P of them.
struct LocalUpdate {
  std::map<SubpacketId, Vec> deltas;
  std::map<SubpacketId, std::int64_t> magnitude_key;
};

struct DecodedSubpacket {
  SubpacketId real_id;
  Vec params;
  friend bool operator==(const DecodedSubpacket&, const DecodedSubpacket&) = default;
};

inline std::vector<SubpacketId> resolve_downlink(const PermutationSet& ps, Scheme s,
                                                 const DownlinkSelection& sel) {
  std::vector<SubpacketId> out;
  out.reserve(sel.targets.size());
  for (const auto& t : sel.targets) out.push_back(permuted_to_real(ps, s, t));
  return out;
}

inline DecodeLayout layout_for(const SchemeParams& params) {
  return DecodeLayout{params.scheme(), params.ell()};
}

/// Solves the N answers (one per database, in database order, all for the
/// same target) for the ell parameters of `real_id`.
inline DecodedSubpacket decode_subpacket(const SubpacketDecoder& decoder,
                                         std::span<const ReadAnswer> answers,
                                         SubpacketId real_id) {
  PRUW_ENFORCE(answers.size() == decoder.layout().system_size(),
               Errc::dimension_mismatch, "need one answer per database");
  Vec rhs;
  rhs.reserve(answers.size());
  for (std::size_t n = 0; n < answers.size(); ++n) {
    PRUW_ENFORCE(answers[n].db_index == n && answers[n].target == answers[0].target,
                 Errc::dimension_mismatch,
                 "answers must be ordered by database and share a target");
    rhs.push_back(answers[n].value);
  }
  return DecodedSubpacket{real_id, decoder.decode(rhs)};
}

inline DecodedSubpacket decode_subpacket(Scheme s, std::span<const ReadAnswer> answers,
                                         const FieldConfig& cfg, SubpacketId real_id) {
  return decode_subpacket(SubpacketDecoder(DecodeLayout{s, cfg.ell()}, cfg), answers,
                          real_id);
}

/// The Pr subpackets with the largest key; ties go to the smaller id.
inline std::vector<SubpacketId> select_top_r(const LocalUpdate& upd,
                                             const SchemeParams& params) {
  PRUW_ENFORCE(upd.magnitude_key.size() == params.num_subpackets(),
               Errc::config_error, "magnitude_key must cover every subpacket");
  std::vector<std::pair<std::int64_t, SubpacketId>> ranked;
  for (const auto& [id, key] : upd.magnitude_key) {
    params.check(id);
    ranked.emplace_back(key, id);
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  std::vector<SubpacketId> out;
  for (std::size_t i = 0; i < params.uplink_count(); ++i) out.push_back(ranked[i].second);
  return out;
}

/// Uncoded combined update at database n:
///   sum_k prod_{r != k}(f_r - alpha_n) * Delta_k / prod_{r != k}(f_r - f_k)
///     + prod_r (f_r - alpha_n) * Z
inline Elem combined_update_uncoded(std::span<const Elem> delta, Elem z, std::size_t n,
                                    const FieldConfig& cfg) {
  const Field& F = cfg.field();
  const std::size_t ell = cfg.ell();
  PRUW_ENFORCE(delta.size() == ell, Errc::dimension_mismatch,
               "update needs ell parameters");
  Elem acc{0};
  for (std::size_t k = 0; k < ell; ++k) {
    Elem num = F.one();
    for (std::size_t r = 0; r < ell; ++r)
      if (r != k) num = F.mul(num, cfg.f_minus_alpha(r, n));
    Elem scaled = F.mul(delta[k], F.inv(lagrange_denominator(k, cfg)));
    acc = F.mul_add(acc, num, scaled);
  }
  Elem all = F.one();
  for (std::size_t r = 0; r < ell; ++r) all = F.mul(all, cfg.f_minus_alpha(r, n));
  return F.mul_add(acc, all, z);
}

/// Coded combined update at database n: sum_k alpha_n^-k Delta_k + Z.
inline Elem combined_update_coded(std::span<const Elem> delta, Elem z, std::size_t n,
                                  const FieldConfig& cfg) {
  const Field& F = cfg.field();
  PRUW_ENFORCE(delta.size() == cfg.ell(), Errc::dimension_mismatch,
               "update needs ell parameters");
  Elem inv_a = F.inv(cfg.alpha(n));
  Elem p = inv_a;
  Elem acc = z;
  for (Elem d : delta) {
    acc = F.mul_add(acc, p, d);
    p = F.mul(p, inv_a);
  }
  return acc;
}

/// Tuples for every database: out[n][i] carries chosen[i]. One fresh noise
/// symbol per chosen subpacket, shared by all databases.
template <NoiseSource Noise>
std::vector<std::vector<UpdateTuple>> build_update_tuples(
    const PermutationSet& ps, const LocalUpdate& upd,
    std::span<const SubpacketId> chosen, const SchemeParams& params,
    const FieldConfig& cfg, Noise& noise) {
  check_config(params, cfg);
  const Scheme s = params.scheme();
  const Field& F = cfg.field();
  std::set<SubpacketId> distinct;
  for (const auto& id : chosen) {
    params.check(id);
    PRUW_ENFORCE(distinct.insert(id).second, Errc::duplicate_index,
                 "chosen subpackets must be distinct");
  }
  const Vec zero(params.ell(), Elem{0});
  std::vector<std::vector<UpdateTuple>> out(params.num_databases());
  for (const auto& id : chosen) {
    auto it = upd.deltas.find(id);
    const Vec& delta = it == upd.deltas.end() ? zero : it->second;
    PRUW_ENFORCE(delta.size() == params.ell(), Errc::dimension_mismatch,
                 "delta must have ell parameters");
    PermutedId pid = real_to_permuted(ps, s, id);
    Elem z = noise.draw(F);
    for (std::size_t n = 0; n < params.num_databases(); ++n) {
      Elem u = is_coded(s) ? combined_update_coded(delta, z, n, cfg)
                           : combined_update_uncoded(delta, z, n, cfg);
      out[n].push_back(UpdateTuple{u, pid.subpacket, pid.segment});
    }
  }
  return out;
}

/// Convenience adapter from real values to field residues: x -> round(x *
/// scale), with negatives embedded as q - |v|. Decoding maps residues above
/// (q-1)/2 back to negatives.
class FixedPointQuantizer {
 public:
  explicit FixedPointQuantizer(double scale) : scale_(scale) {
    PRUW_ENFORCE(scale > 0.0, Errc::config_error, "quantizer scale must be positive");
  }

  Elem encode(double x, const Field& F) const {
    auto v = static_cast<std::int64_t>(std::llround(x * scale_));
    auto half = static_cast<std::int64_t>((F.modulus() - 1) / 2);
    PRUW_ENFORCE(v >= -half && v <= half, Errc::config_error,
                 "value out of quantizer range");
    return F.from_int(v);
  }

  double decode(Elem e, const Field& F) const {
    std::uint64_t half = (F.modulus() - 1) / 2;
    double v = e.v <= half ? static_cast<double>(e.v)
                           : -static_cast<double>(F.modulus() - e.v);
    return v / scale_;
  }

  /// Integer ranking key for sparsification: the largest |x| in a subpacket.
  std::int64_t magnitude(std::span<const double> xs) const {
    double best = 0.0;
    for (double x : xs) best = std::max(best, std::abs(x));
    return std::llround(best * scale_);
  }

 private:
  double scale_;
};

}  // namespace pruw
