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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "pruw/coordinator.hpp"
#include "pruw/database.hpp"
#include "pruw/decode.hpp"
#include "pruw/field.hpp"
#include "pruw/transcript.hpp"
#include "pruw/user.hpp"

namespace pruw {

/// Plaintext copy of the model kept next to the protocol, for checking only.
struct OracleModel {
  ModelState w_true;

  void apply(std::span<const SubpacketId> chosen, const LocalUpdate& upd,
             const SchemeParams& params, const Field& F) {
    for (const auto& id : chosen) {
      auto it = upd.deltas.find(id);
      if (it == upd.deltas.end()) continue;
      auto w = w_true.subpacket(params.global_index(id));
      for (std::size_t k = 0; k < w.size(); ++k) w[k] = F.add(w[k], it->second[k]);
    }
  }
};

/// Everything a simulation needs: the public setup, the user-side secret,
/// the databases and the oracle.
struct World {
  SchemeParams params;
  FieldConfig cfg;
  PermutationSet permutations;
  std::vector<DatabaseState> databases;
  OracleModel oracle;
  UniformNoise noise;  // masking noise for uploads
  std::uint64_t round = 0;

  SubpacketDecoder decoder() const { return SubpacketDecoder(layout_for(params), cfg); }
};

namespace detail {

/// Independent deterministic streams derived from one seed.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace detail

/// World with a fixed model and permutation set. Setup noise and upload
/// noise come from `seed`.
inline World make_world_with(const SchemeParams& params, const FieldConfig& cfg,
                             ModelState model, PermutationSet ps, std::uint64_t seed) {
  UniformNoise setup(detail::stream_seed(seed, 2));
  InitResult init = initialize_with(model, params, cfg, std::move(ps), setup);
  return World{params,
               cfg,
               std::move(init.permutations),
               std::move(init.databases),
               OracleModel{std::move(model)},
               UniformNoise(detail::stream_seed(seed, 3)),
               0};
}

/// Random model and permutations, everything derived from `seed`.
inline World make_world(const SchemeParams& params, const FieldConfig& cfg,
                        std::uint64_t seed) {
  UniformNoise model_rng(detail::stream_seed(seed, 0));
  ModelState model = ModelState::random(params.num_subpackets(), params.ell(),
                                        cfg.field(), model_rng);
  std::mt19937_64 perm_rng(detail::stream_seed(seed, 1));
  PermutationSet ps = sample_permutation_set(params.scheme(), params.num_segments(),
                                             params.segment_size(), perm_rng);
  return make_world_with(params, cfg, std::move(model), std::move(ps), seed);
}

inline World make_world(const SchemeParams& params, std::uint64_t seed) {
  return make_world(params, params.default_field_config(), seed);
}

/// Random deltas for every subpacket and random ranking keys.
template <typename Urbg>
LocalUpdate random_local_update(const SchemeParams& params, const Field& F, Urbg& rng) {
  LocalUpdate u;
  std::uniform_int_distribution<std::uint64_t> val(0, F.modulus() - 1);
  std::uniform_int_distribution<std::int64_t> key(0, 999);
  for (std::size_t s = 0; s < params.num_subpackets(); ++s) {
    SubpacketId id = params.id_of(s);
    Vec d(params.ell());
    for (auto& e : d) e = Elem{val(rng)};
    u.deltas.emplace(id, std::move(d));
    u.magnitude_key.emplace(id, key(rng));
  }
  return u;
}

/// Full private read of one permuted position: queries, answers, decode.
inline ReadRecord private_read(const World& w, const SubpacketDecoder& decoder,
                               std::size_t user, PermutedId target) {
  ReadRecord rec;
  rec.user = user;
  rec.target = target;
  rec.real = permuted_to_real(w.permutations, w.params.scheme(), target);
  std::vector<ReadAnswer> answers;
  for (const auto& db : w.databases) {
    Vec q = make_read_query(db, w.params, w.cfg, target);
    answers.push_back(answer_read(db, w.params, w.cfg, q, target));
    rec.answers.push_back(answers.back().value);
  }
  rec.decoded = decode_subpacket(decoder, answers, rec.real).params;
  return rec;
}

/// Supplies a user's update for this round given what the user downloaded.
using UpdateSupplier =
    std::function<LocalUpdate(std::size_t user, std::span<const ReadRecord> downloaded)>;

/// One round: downlink selection at the designated database, every user
/// reads, then every user writes.
inline RoundTranscript run_round(World& w, std::size_t num_users,
                                 const UpdateSupplier& supplier) {
  RoundTranscript t;
  t.round = ++w.round;
  t.num_databases = w.params.num_databases();
  t.downlink = select_downlink(w.databases.front().popularity, w.params);
  const SubpacketDecoder decoder = w.decoder();

  std::vector<std::vector<ReadRecord>> per_user(num_users);
  for (std::size_t u = 0; u < num_users; ++u) {
    for (const auto& target : t.downlink.targets) {
      ReadRecord rec = private_read(w, decoder, u, target);
      auto truth = w.oracle.w_true.subpacket(w.params.global_index(rec.real));
      if (!std::equal(truth.begin(), truth.end(), rec.decoded.begin(), rec.decoded.end()))
        ++t.read_mismatches;
      per_user[u].push_back(rec);
      t.reads.push_back(std::move(rec));
    }
  }

  for (auto& db : w.databases) db.popularity.clear();

  for (std::size_t u = 0; u < num_users; ++u) {
    LocalUpdate upd = supplier(u, per_user[u]);
    WriteRecord rec;
    rec.user = u;
    rec.chosen = select_top_r(upd, w.params);
    rec.per_db = build_update_tuples(w.permutations, upd, rec.chosen, w.params, w.cfg,
                                     w.noise);
    for (std::size_t n = 0; n < w.databases.size(); ++n)
      apply_write(w.databases[n], w.params, rec.per_db[n]);
    w.oracle.apply(rec.chosen, upd, w.params, w.cfg.field());
    t.writes.push_back(std::move(rec));
  }
  return t;
}

inline RoundTranscript run_round(World& w, std::span<const LocalUpdate> updates) {
  return run_round(w, updates.size(),
                   [&](std::size_t u, std::span<const ReadRecord>) { return updates[u]; });
}

struct VerifyReport {
  std::size_t checked = 0;
  std::vector<SubpacketId> mismatches;
  bool ok() const noexcept { return mismatches.empty(); }
};

/// Decodes every subpacket through the read protocol and compares with the
/// oracle model.
inline VerifyReport verify_world(const World& w) {
  VerifyReport rep;
  const SubpacketDecoder decoder = w.decoder();
  for (std::size_t s = 0; s < w.params.num_subpackets(); ++s) {
    SubpacketId id = w.params.id_of(s);
    PermutedId target = real_to_permuted(w.permutations, w.params.scheme(), id);
    ReadRecord rec = private_read(w, decoder, 0, target);
    auto truth = w.oracle.w_true.subpacket(s);
    ++rep.checked;
    if (rec.real != id ||
        !std::equal(truth.begin(), truth.end(), rec.decoded.begin(), rec.decoded.end()))
      rep.mismatches.push_back(id);
  }
  return rep;
}

}  // namespace pruw
