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

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pruw/coordinator.hpp"
#include "pruw/error.hpp"
#include "pruw/field.hpp"
#include "pruw/matrix.hpp"
#include "pruw/permutation.hpp"
#include "pruw/scheme.hpp"

namespace pruw {

// Binary snapshot of a coordinator's output. Every integer is a
// little-endian u64; vectors are length-prefixed.
//
//   magic "PRUWSNAP", version
//   header: case N P B ell q seed Pr Pr'
//   f[], alpha[]
//   within permutations (B of them), inter flag [+ permutation]
//   per database: n, storage[], B within matrices, inter flag [+ matrix]
//
// Matrices are rows, cols, then row-major residues. Combined matrices and
// popularity are not stored; combined matrices are rebuilt on load.

inline constexpr std::array<char, 8> kSnapshotMagic = {'P', 'R', 'U', 'W',
                                                       'S', 'N', 'A', 'P'};
inline constexpr std::uint64_t kSnapshotVersion = 1;

struct Snapshot {
  SchemeParams params;
  FieldConfig cfg;
  std::uint64_t seed = 0;
  PermutationSet permutations;
  std::vector<DatabaseState> databases;
};

namespace detail {

class SnapWriter {
 public:
  explicit SnapWriter(std::ostream& os) : os_(os) {}
  void u64(std::uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os_.write(b, 8);
  }
  void elems(std::span<const Elem> v) {
    u64(v.size());
    for (Elem e : v) u64(e.v);
  }
  void perm(const Permutation& p) {
    u64(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) u64(p(i));
  }
  void matrix(const Matrix& m) {
    u64(m.rows());
    u64(m.cols());
    for (Elem e : m.data()) u64(e.v);
  }

 private:
  std::ostream& os_;
};

class SnapReader {
 public:
  explicit SnapReader(std::istream& is) : is_(is) {}
  std::uint64_t u64() {
    unsigned char b[8];
    is_.read(reinterpret_cast<char*>(b), 8);
    PRUW_ENFORCE(is_.gcount() == 8, Errc::malformed_snapshot, "truncated snapshot");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::size_t length(std::uint64_t limit = 1ULL << 28) {
    std::uint64_t n = u64();
    PRUW_ENFORCE(n <= limit, Errc::malformed_snapshot, "implausible length");
    return static_cast<std::size_t>(n);
  }
  Vec elems(std::uint64_t q) {
    Vec v(length());
    for (auto& e : v) e = residue(q);
    return v;
  }
  Elem residue(std::uint64_t q) {
    std::uint64_t x = u64();
    PRUW_ENFORCE(x < q, Errc::malformed_snapshot, "residue not reduced mod q");
    return Elem{x};
  }
  Permutation perm() {
    std::vector<std::size_t> map(length());
    for (auto& x : map) x = static_cast<std::size_t>(u64());
    try {
      return Permutation(std::move(map));
    } catch (const Error& e) {
      throw Error(Errc::malformed_snapshot, e.what());
    }
  }
  Matrix matrix(std::uint64_t q) {
    std::size_t r = length(1ULL << 14);
    std::size_t c = length(1ULL << 14);
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = residue(q);
    return m;
  }

 private:
  std::istream& is_;
};

}  // namespace detail

inline void write_snapshot(std::ostream& os, const Snapshot& s) {
  detail::SnapWriter w(os);
  os.write(kSnapshotMagic.data(), kSnapshotMagic.size());
  w.u64(kSnapshotVersion);
  const SchemeParams& p = s.params;
  for (std::uint64_t v :
       {static_cast<std::uint64_t>(scheme_id(p.scheme())),
        static_cast<std::uint64_t>(p.num_databases()),
        static_cast<std::uint64_t>(p.num_subpackets()),
        static_cast<std::uint64_t>(p.num_segments()), static_cast<std::uint64_t>(p.ell()),
        p.modulus(), s.seed, static_cast<std::uint64_t>(p.uplink_count()),
        static_cast<std::uint64_t>(p.downlink_count())})
    w.u64(v);
  w.elems(s.cfg.f());
  w.elems(s.cfg.alpha());
  w.u64(s.permutations.within.size());
  for (const auto& perm : s.permutations.within) w.perm(perm);
  w.u64(s.permutations.inter ? 1 : 0);
  if (s.permutations.inter) w.perm(*s.permutations.inter);
  w.u64(s.databases.size());
  for (const auto& db : s.databases) {
    w.u64(db.index);
    w.elems(db.storage);
    w.u64(db.within.size());
    for (const auto& m : db.within) w.matrix(m.entries);
    w.u64(db.inter ? 1 : 0);
    if (db.inter) w.matrix(db.inter->entries);
  }
}

inline Snapshot read_snapshot(std::istream& is) {
  std::array<char, 8> magic{};
  is.read(magic.data(), magic.size());
  PRUW_ENFORCE(is.gcount() == 8 && magic == kSnapshotMagic, Errc::malformed_snapshot,
               "not a snapshot (bad magic)");
  detail::SnapReader r(is);
  std::uint64_t version = r.u64();
  PRUW_ENFORCE(version == kSnapshotVersion, Errc::malformed_snapshot,
               "unsupported snapshot version " + std::to_string(version));
  std::uint64_t h[9];
  for (auto& x : h) x = r.u64();
  auto params = [&] {
    try {
      Scheme sc = scheme_from_int(static_cast<int>(h[0]));
      SchemeParams p(sc, h[1], h[2], h[3], h[7], h[8], h[5]);
      PRUW_ENFORCE(p.ell() == h[4], Errc::malformed_snapshot, "ell does not match N");
      return p;
    } catch (const Error& e) {
      if (e.code() == Errc::malformed_snapshot) throw;
      throw Error(Errc::malformed_snapshot, e.what());
    }
  }();
  const std::uint64_t q = params.modulus();
  const Scheme sc = params.scheme();
  Vec f = r.elems(q);
  Vec alpha = r.elems(q);
  std::optional<FieldConfig> cfg;
  try {
    cfg.emplace(Field(q), std::move(f), std::move(alpha));
    check_config(params, *cfg);
  } catch (const Error& e) {
    throw Error(Errc::malformed_snapshot, e.what());
  }

  PermutationSet ps;
  std::size_t b = r.length();
  for (std::size_t i = 0; i < b; ++i) ps.within.push_back(r.perm());
  if (r.u64() != 0) ps.inter = r.perm();
  try {
    ps.validate(sc);
  } catch (const Error& e) {
    throw Error(Errc::malformed_snapshot, e.what());
  }

  std::vector<DatabaseState> dbs(r.length());
  PRUW_ENFORCE(dbs.size() == params.num_databases(), Errc::malformed_snapshot,
               "database count does not match N");
  const Field& F = cfg->field();
  for (auto& db : dbs) {
    db.index = static_cast<std::size_t>(r.u64());
    db.storage = r.elems(q);
    PRUW_ENFORCE(db.storage.size() == params.storage_length(), Errc::malformed_snapshot,
                 "storage length does not match parameters");
    std::size_t nw = r.length();
    PRUW_ENFORCE(nw == params.num_segments(), Errc::malformed_snapshot,
                 "within matrix count does not match B");
    for (std::size_t i = 0; i < nw; ++i)
      db.within.push_back({sc, MatrixRole::within, r.matrix(q)});
    if (r.u64() != 0) db.inter = NoisyReversingMatrix{sc, MatrixRole::inter, r.matrix(q)};
    try {
      if (sc == Scheme::uncoded_two_level && db.inter)
        db.combined = combine_case3(F, db.within, *db.inter, params.ell());
      if (sc == Scheme::coded_two_level && db.inter)
        db.combined = combine_case4(F, db.within, *db.inter);
    } catch (const Error& e) {
      throw Error(Errc::malformed_snapshot, e.what());
    }
  }
  return Snapshot{params, *cfg, h[6], std::move(ps), std::move(dbs)};
}

}  // namespace pruw
