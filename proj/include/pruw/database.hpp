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
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pruw/coordinator.hpp"
#include "pruw/error.hpp"
#include "pruw/field.hpp"
#include "pruw/matrix.hpp"
#include "pruw/scheme.hpp"

namespace pruw {

/// One uploaded (update, subpacket, segment) triple. The indices are the
/// coordinates the databases see: permuted subpacket, and a segment that is
/// real for schemes 1/2 and permuted for 3/4.
struct UpdateTuple {
  Elem update;
  std::size_t subpacket = 0;
  std::size_t segment = 0;

  PermutedId id() const noexcept { return PermutedId{segment, subpacket}; }
  friend bool operator==(const UpdateTuple&, const UpdateTuple&) = default;
};

struct ReadAnswer {
  std::size_t db_index = 0;
  PermutedId target;
  Elem value;
  friend bool operator==(const ReadAnswer&, const ReadAnswer&) = default;
};

/// The Pr' permuted positions every user downloads this round, in rank order.
struct DownlinkSelection {
  std::vector<PermutedId> targets;

  /// Permuted subpacket lists per segment (the per-segment view used by
  /// schemes 1/2). Segments may be empty.
  std::vector<std::vector<std::size_t>> per_segment(std::size_t num_segments) const {
    std::vector<std::vector<std::size_t>> out(num_segments);
    for (const auto& t : targets) out.at(t.segment).push_back(t.subpacket);
    for (auto& v : out) std::sort(v.begin(), v.end());
    return out;
  }

  friend bool operator==(const DownlinkSelection&, const DownlinkSelection&) = default;
};

using PopularityMap = std::map<PermutedId, std::uint64_t>;

/// Top Pr' permuted positions by count; ties go to the smaller
/// (segment, subpacket). Positions never updated count as zero, so an empty
/// map yields the lexicographically first Pr'.
inline DownlinkSelection select_downlink(const PopularityMap& popularity,
                                         const SchemeParams& params) {
  std::vector<std::pair<std::uint64_t, PermutedId>> ranked;
  ranked.reserve(params.num_subpackets());
  for (std::size_t seg = 0; seg < params.num_segments(); ++seg) {
    for (std::size_t sub = 0; sub < params.segment_size(); ++sub) {
      PermutedId id{seg, sub};
      auto it = popularity.find(id);
      ranked.emplace_back(it == popularity.end() ? 0 : it->second, id);
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.first > b.first;
  });
  DownlinkSelection sel;
  for (std::size_t i = 0; i < params.downlink_count(); ++i)
    sel.targets.push_back(ranked[i].second);
  return sel;
}

namespace detail {

inline const Matrix& within_of(const DatabaseState& db, std::size_t segment) {
  PRUW_ENFORCE(segment < db.within.size(), Errc::index_out_of_range,
               "segment has no within matrix");
  return db.within[segment].entries;
}

inline const Matrix& combined_of(const DatabaseState& db) {
  PRUW_ENFORCE(db.combined.has_value(), Errc::config_error,
               "database holds no combined matrix");
  return *db.combined;
}

}  // namespace detail

/// Query vector for one permuted target.
///  1: sum_k R^[j](:, t*ell + k)                      length m*ell
///  2: R^[j](:, t)                                    length m
///  3: (I_P (x) Gamma_n^-1) sum_k R(:, (phi*m + eta)*ell + k)   length L
///  4: R(:, phi*m + eta)                              length P
inline Vec make_read_query(const DatabaseState& db, const SchemeParams& params,
                           const FieldConfig& cfg, PermutedId target) {
  params.check(target);
  const Field& F = cfg.field();
  const std::size_t ell = params.ell();
  const std::size_t m = params.segment_size();
  switch (params.scheme()) {
    case Scheme::uncoded: {
      const Matrix& r = detail::within_of(db, target.segment);
      Vec q(r.rows(), Elem{0});
      for (std::size_t k = 0; k < ell; ++k)
        for (std::size_t i = 0; i < r.rows(); ++i)
          q[i] = F.add(q[i], r(i, target.subpacket * ell + k));
      return q;
    }
    case Scheme::coded:
      return detail::within_of(db, target.segment).column(target.subpacket);
    case Scheme::uncoded_two_level: {
      const Matrix& r = detail::combined_of(db);
      const std::size_t base = (target.segment * m + target.subpacket) * ell;
      Vec q(r.rows(), Elem{0});
      for (std::size_t k = 0; k < ell; ++k)
        for (std::size_t i = 0; i < r.rows(); ++i)
          q[i] = F.add(q[i], r(i, base + k));
      for (std::size_t i = 0; i < q.size(); ++i)
        q[i] = F.mul(q[i], cfg.f_minus_alpha(i % ell, db.index));
      return q;
    }
    case Scheme::coded_two_level:
      return detail::combined_of(db).column(target.segment * m + target.subpacket);
  }
  throw Error(Errc::invalid_case, "unknown scheme");
}

/// Scalar answer.
///  1: (D_n S^[j])^T Q with D_n = I (x) Gamma_n^-1
///  2: (S^[j])^T Q
///  3, 4: S^T Q
inline ReadAnswer answer_read(const DatabaseState& db, const SchemeParams& params,
                              const FieldConfig& cfg, std::span<const Elem> query,
                              PermutedId target) {
  params.check(target);
  const Field& F = cfg.field();
  const std::size_t ell = params.ell();
  const std::size_t m = params.segment_size();
  PRUW_ENFORCE(db.storage.size() == params.storage_length(),
               Errc::dimension_mismatch, "storage length does not match params");
  ReadAnswer a{db.index, target, Elem{0}};
  switch (params.scheme()) {
    case Scheme::uncoded: {
      PRUW_ENFORCE(query.size() == m * ell, Errc::dimension_mismatch,
                   "case 1 query must have length (P/B)*ell");
      const std::size_t base = target.segment * m * ell;
      for (std::size_t i = 0; i < query.size(); ++i) {
        Elem d = F.mul(db.storage[base + i], cfg.f_minus_alpha(i % ell, db.index));
        a.value = F.mul_add(a.value, d, query[i]);
      }
      return a;
    }
    case Scheme::coded: {
      PRUW_ENFORCE(query.size() == m, Errc::dimension_mismatch,
                   "case 2 query must have length P/B");
      const std::size_t base = target.segment * m;
      for (std::size_t i = 0; i < m; ++i)
        a.value = F.mul_add(a.value, db.storage[base + i], query[i]);
      return a;
    }
    case Scheme::uncoded_two_level:
    case Scheme::coded_two_level:
      PRUW_ENFORCE(query.size() == db.storage.size(), Errc::dimension_mismatch,
                   "query length must equal storage length");
      a.value = dot(F, db.storage, query);
      return a;
  }
  throw Error(Errc::invalid_case, "unknown scheme");
}

/// Adds the permutation-reversed incremental update of one user's tuples
/// to the storage and bumps popularity at the permuted positions. Only the
/// columns named by a tuple contribute, since the update vector is zero
/// elsewhere.
inline void apply_write(DatabaseState& db, const SchemeParams& params,
                        std::span<const UpdateTuple> tuples) {
  std::set<PermutedId> seen;
  for (const auto& t : tuples) {
    params.check(t.id());
    PRUW_ENFORCE(seen.insert(t.id()).second, Errc::duplicate_index,
                 "duplicate permuted index in one upload");
  }
  PRUW_ENFORCE(db.storage.size() == params.storage_length(),
               Errc::dimension_mismatch, "storage length does not match params");
  const Field F(params.modulus());
  const std::size_t ell = params.ell();
  const std::size_t m = params.segment_size();

  auto add_columns = [&](const Matrix& r, std::size_t col0, std::size_t ncols,
                         Elem u, std::size_t offset) {
    for (std::size_t c = col0; c < col0 + ncols; ++c)
      for (std::size_t i = 0; i < r.rows(); ++i)
        db.storage[offset + i] = F.mul_add(db.storage[offset + i], u, r(i, c));
  };

  for (const auto& t : tuples) {
    switch (params.scheme()) {
      case Scheme::uncoded:
        add_columns(detail::within_of(db, t.segment), t.subpacket * ell, ell,
                    t.update, t.segment * m * ell);
        break;
      case Scheme::coded:
        add_columns(detail::within_of(db, t.segment), t.subpacket, 1, t.update,
                    t.segment * m);
        break;
      case Scheme::uncoded_two_level:
        add_columns(detail::combined_of(db), (t.segment * m + t.subpacket) * ell,
                    ell, t.update, 0);
        break;
      case Scheme::coded_two_level:
        add_columns(detail::combined_of(db), t.segment * m + t.subpacket, 1,
                    t.update, 0);
        break;
    }
    ++db.popularity[t.id()];
  }
}

}  // namespace pruw
