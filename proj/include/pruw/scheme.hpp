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

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

#include "pruw/error.hpp"
#include "pruw/field.hpp"

namespace pruw {

/// The four read-update-write variants.
///  1: uncoded storage, within-segment permutations
///  2: MDS-coded storage, within-segment permutations
///  3: uncoded storage, within + inter-segment permutations
///  4: MDS-coded storage, within + inter-segment permutations
enum class Scheme : int {
  uncoded = 1,
  coded = 2,
  uncoded_two_level = 3,
  coded_two_level = 4,
};

constexpr int scheme_id(Scheme s) noexcept { return static_cast<int>(s); }

inline Scheme scheme_from_int(int c) {
  PRUW_ENFORCE(c >= 1 && c <= 4, Errc::invalid_case,
               "scheme case must be 1..4, got " + std::to_string(c));
  return static_cast<Scheme>(c);
}

constexpr bool is_coded(Scheme s) noexcept {
  return s == Scheme::coded || s == Scheme::coded_two_level;
}
constexpr bool has_inter(Scheme s) noexcept {
  return s == Scheme::uncoded_two_level || s == Scheme::coded_two_level;
}

/// Real (segment, subpacket) position of a subpacket, 0-based.
struct SubpacketId {
  std::size_t segment = 0;
  std::size_t subpacket = 0;
  friend constexpr auto operator<=>(const SubpacketId&, const SubpacketId&) = default;
};

/// Position as the databases see it, 0-based. For schemes 1/2 the segment is
/// the real segment; for 3/4 it is the permuted segment.
struct PermutedId {
  std::size_t segment = 0;
  std::size_t subpacket = 0;
  friend constexpr auto operator<=>(const PermutedId&, const PermutedId&) = default;
};

// Printed 1-based as (subpacket,segment), the order used in upload tuples.
inline std::ostream& operator<<(std::ostream& os, const SubpacketId& id) {
  return os << '(' << id.subpacket + 1 << ',' << id.segment + 1 << ')';
}
inline std::ostream& operator<<(std::ostream& os, const PermutedId& id) {
  return os << '(' << id.subpacket + 1 << ',' << id.segment + 1 << ')';
}

/// Subpacketization fixed by the decode-system size for each scheme:
/// N = 2l+2, 3l+1, 2l+4, 5l+1.
inline std::size_t derive_subpacketization(Scheme s, std::size_t n) {
  auto fail = [&](const char* rule) {
    throw Error(Errc::inadmissible_n,
                "N = " + std::to_string(n) + " is not admissible for case " +
                    std::to_string(scheme_id(s)) + ": need " + rule +
                    " with integer l >= 1");
  };
  switch (s) {
    case Scheme::uncoded:
      if (n < 4 || (n - 2) % 2 != 0) fail("N = 2l+2");
      return (n - 2) / 2;
    case Scheme::coded:
      if (n < 4 || (n - 1) % 3 != 0) fail("N = 3l+1");
      return (n - 1) / 3;
    case Scheme::uncoded_two_level:
      if (n < 6 || (n - 4) % 2 != 0) fail("N = 2l+4");
      return (n - 4) / 2;
    case Scheme::coded_two_level:
      if (n < 6 || (n - 1) % 5 != 0) fail("N = 5l+1");
      return (n - 1) / 5;
  }
  throw Error(Errc::invalid_case, "unknown scheme");
}

/// Smallest admissible database count (l = 1).
constexpr std::size_t minimal_databases(Scheme s) noexcept {
  switch (s) {
    case Scheme::uncoded: return 4;
    case Scheme::coded: return 4;
    case Scheme::uncoded_two_level: return 6;
    case Scheme::coded_two_level: return 6;
  }
  return 0;
}

/// Converts a sparsification rate to a subpacket count, requiring P*r to be
/// a positive integer (within floating-point slack).
inline std::size_t rate_to_count(double rate, std::size_t p, const char* name) {
  double x = rate * static_cast<double>(p);
  double rounded = std::round(x);
  PRUW_ENFORCE(rate > 0.0 && rate <= 1.0 && std::abs(x - rounded) < 1e-9 &&
                   rounded >= 1.0,
               Errc::config_error,
               std::string(name) + " * P must be a positive integer (got " +
                   std::to_string(x) + ")");
  return static_cast<std::size_t>(rounded);
}

/// All protocol constants. Rates are stored as subpacket counts so every
/// downstream quantity stays exact.
class SchemeParams {
 public:
  SchemeParams(Scheme scheme, std::size_t n, std::size_t p, std::size_t b,
               std::size_t uplink_count, std::size_t downlink_count,
               std::uint64_t q = kDefaultModulus)
      : scheme_(scheme),
        n_(n),
        p_(p),
        b_(b),
        uplink_(uplink_count),
        downlink_(downlink_count),
        q_(q) {
    PRUW_ENFORCE(b_ >= 1 && p_ >= 2, Errc::invalid_b, "need P >= 2 and B >= 1");
    PRUW_ENFORCE(p_ % b_ == 0, Errc::invalid_b,
                 "B = " + std::to_string(b_) + " does not divide P = " +
                     std::to_string(p_));
    PRUW_ENFORCE(b_ < p_, Errc::invalid_b, "need 1 <= B < P");
    PRUW_ENFORCE(uplink_ >= 1 && uplink_ <= p_, Errc::config_error,
                 "P*r must be in 1..P");
    PRUW_ENFORCE(downlink_ >= 1 && downlink_ <= p_, Errc::config_error,
                 "P*r' must be in 1..P");
    ell_ = derive_subpacketization(scheme_, n_);
  }

  static SchemeParams from_rates(Scheme scheme, std::size_t n, std::size_t p,
                                 std::size_t b, double r, double r_prime,
                                 std::uint64_t q = kDefaultModulus) {
    return SchemeParams(scheme, n, p, b, rate_to_count(r, p, "r"),
                        rate_to_count(r_prime, p, "r'"), q);
  }

  Scheme scheme() const noexcept { return scheme_; }
  std::size_t num_databases() const noexcept { return n_; }
  std::size_t num_subpackets() const noexcept { return p_; }
  std::size_t num_segments() const noexcept { return b_; }
  /// P / B
  std::size_t segment_size() const noexcept { return p_ / b_; }
  std::size_t ell() const noexcept { return ell_; }
  /// L = P * ell
  std::size_t model_size() const noexcept { return p_ * ell_; }
  /// P * r
  std::size_t uplink_count() const noexcept { return uplink_; }
  /// P * r'
  std::size_t downlink_count() const noexcept { return downlink_; }
  std::uint64_t modulus() const noexcept { return q_; }

  /// Length of one database's data vector: P*ell uncoded, P coded.
  std::size_t storage_length() const noexcept {
    return is_coded(scheme_) ? p_ : p_ * ell_;
  }

  std::size_t global_index(SubpacketId id) const noexcept {
    return id.segment * segment_size() + id.subpacket;
  }
  SubpacketId id_of(std::size_t global) const noexcept {
    return SubpacketId{global / segment_size(), global % segment_size()};
  }

  void check(SubpacketId id) const {
    PRUW_ENFORCE(id.segment < b_ && id.subpacket < segment_size(),
                 Errc::index_out_of_range, "real subpacket id out of range");
  }
  void check(PermutedId id) const {
    PRUW_ENFORCE(id.segment < b_ && id.subpacket < segment_size(),
                 Errc::index_out_of_range, "permuted subpacket id out of range");
  }

  FieldConfig default_field_config() const {
    return FieldConfig::make_default(Field(q_), ell_, n_);
  }

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;

 private:
  Scheme scheme_;
  std::size_t n_;
  std::size_t p_;
  std::size_t b_;
  std::size_t uplink_;
  std::size_t downlink_;
  std::uint64_t q_;
  std::size_t ell_ = 0;
};

}  // namespace pruw
