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
#include <concepts>
#include <cstdint>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pruw/error.hpp"

namespace pruw {

/// Residue in [0, q). The modulus lives in the owning Field, not here.
struct Elem {
  std::uint64_t v = 0;

  friend constexpr bool operator==(Elem, Elem) = default;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

inline std::ostream& operator<<(std::ostream& os, Elem e) { return os << e.v; }

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b,
                            std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e,
                            std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e != 0) {
    if (e & 1U) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1U;
  }
  return r;
}

}  // namespace detail

/// Deterministic Miller-Rabin, exact for every 64-bit input.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                          23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = detail::powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline constexpr std::uint64_t kDefaultModulus = 2147483647ULL;  // 2^31 - 1

/// Prime field F_q. Moduli up to 2^63 are supported; products go through
/// 128-bit intermediates.
class Field {
 public:
  explicit Field(std::uint64_t q = kDefaultModulus) : q_(q) {
    PRUW_ENFORCE(q < (1ULL << 63U) && is_prime(q), Errc::config_error,
                 "field modulus " + std::to_string(q) + " is not a prime < 2^63");
  }

  std::uint64_t modulus() const noexcept { return q_; }

  Elem zero() const noexcept { return Elem{0}; }
  Elem one() const noexcept { return Elem{1}; }

  Elem from_int(std::int64_t x) const noexcept {
    auto m = static_cast<std::int64_t>(q_);
    std::int64_t r = x % m;
    if (r < 0) r += m;
    return Elem{static_cast<std::uint64_t>(r)};
  }

  Elem add(Elem a, Elem b) const noexcept {
    std::uint64_t s = a.v + b.v;
    return Elem{s >= q_ ? s - q_ : s};
  }
  Elem sub(Elem a, Elem b) const noexcept {
    return Elem{a.v >= b.v ? a.v - b.v : a.v + q_ - b.v};
  }
  Elem neg(Elem a) const noexcept { return Elem{a.v == 0 ? 0 : q_ - a.v}; }
  Elem mul(Elem a, Elem b) const noexcept {
    return Elem{detail::mulmod(a.v, b.v, q_)};
  }
  Elem pow(Elem a, std::uint64_t e) const noexcept {
    return Elem{detail::powmod(a.v, e, q_)};
  }

  /// Fermat inverse; x^(q-2).
  Elem inv(Elem a) const {
    PRUW_ENFORCE(a.v % q_ != 0, Errc::zero_inverse,
                 "inverse of zero in F_" + std::to_string(q_));
    return pow(a, q_ - 2);
  }

  /// a^e for signed e; negative exponents require a != 0.
  Elem pow_signed(Elem a, std::int64_t e) const {
    if (e >= 0) return pow(a, static_cast<std::uint64_t>(e));
    return pow(inv(a), static_cast<std::uint64_t>(-e));
  }

  Elem mul_add(Elem acc, Elem a, Elem b) const noexcept {
    return add(acc, mul(a, b));
  }

  friend bool operator==(const Field& a, const Field& b) noexcept {
    return a.q_ == b.q_;
  }

 private:
  std::uint64_t q_;
};

inline Elem field_inv(Elem x, const Field& f) { return f.inv(x); }

/// Globally known evaluation constants: ell constants f_k and N constants
/// alpha_n. All indices here are 0-based.
class FieldConfig {
 public:
  FieldConfig(Field field, std::vector<Elem> f, std::vector<Elem> alpha)
      : field_(field), f_(std::move(f)), alpha_(std::move(alpha)) {
    validate();
  }

  /// f_k = k and alpha_n = ell + n (1-based), reduced mod q.
  static FieldConfig make_default(Field field, std::size_t ell,
                                  std::size_t num_databases) {
    std::vector<Elem> f;
    std::vector<Elem> alpha;
    for (std::size_t k = 1; k <= ell; ++k) f.push_back(Elem{k % field.modulus()});
    for (std::size_t n = 1; n <= num_databases; ++n) {
      alpha.push_back(Elem{(ell + n) % field.modulus()});
    }
    return FieldConfig(field, std::move(f), std::move(alpha));
  }

  const Field& field() const noexcept { return field_; }
  std::size_t ell() const noexcept { return f_.size(); }
  std::size_t num_databases() const noexcept { return alpha_.size(); }
  std::span<const Elem> f() const noexcept { return f_; }
  std::span<const Elem> alpha() const noexcept { return alpha_; }
  Elem f(std::size_t k) const { return f_.at(k); }
  Elem alpha(std::size_t n) const { return alpha_.at(n); }

  /// f_k - alpha_n
  Elem f_minus_alpha(std::size_t k, std::size_t n) const {
    return field_.sub(f_.at(k), alpha_.at(n));
  }
  /// 1 / (f_k - alpha_n)
  Elem inv_f_minus_alpha(std::size_t k, std::size_t n) const {
    return field_.inv(f_minus_alpha(k, n));
  }
  /// alpha_n^e, e may be negative.
  Elem alpha_pow(std::size_t n, std::int64_t e) const {
    return field_.pow_signed(alpha_.at(n), e);
  }

 private:
  void validate() const {
    const std::uint64_t q = field_.modulus();
    PRUW_ENFORCE(!f_.empty(), Errc::config_error, "need at least one f constant");
    PRUW_ENFORCE(!alpha_.empty(), Errc::config_error,
                 "need at least one alpha constant");
    PRUW_ENFORCE(f_.size() + alpha_.size() + 1 <= q, Errc::config_error,
                 "field too small: ell + N + 1 = " +
                     std::to_string(f_.size() + alpha_.size() + 1) +
                     " exceeds q = " + std::to_string(q));
    std::vector<Elem> all(f_);
    all.insert(all.end(), alpha_.begin(), alpha_.end());
    for (Elem e : all) {
      PRUW_ENFORCE(e.v < q, Errc::config_error, "constant not reduced mod q");
    }
    std::sort(all.begin(), all.end());
    PRUW_ENFORCE(std::adjacent_find(all.begin(), all.end()) == all.end(),
                 Errc::config_error,
                 "f and alpha constants must be mutually distinct");
    for (Elem a : alpha_) {
      PRUW_ENFORCE(a.v != 0, Errc::config_error,
                   "alpha constants must be nonzero (negative powers)");
    }
  }

  Field field_;
  std::vector<Elem> f_;
  std::vector<Elem> alpha_;
};

/// prod_{r != k} (f_r - f_k); the Lagrange-style scaling applied to
/// uncoded combined updates.
inline Elem lagrange_denominator(std::size_t k, const FieldConfig& cfg) {
  PRUW_ENFORCE(k < cfg.ell(), Errc::index_out_of_range,
               "lagrange_denominator: k out of range");
  const Field& F = cfg.field();
  Elem acc = F.one();
  for (std::size_t r = 0; r < cfg.ell(); ++r) {
    if (r == k) continue;
    acc = F.mul(acc, F.sub(cfg.f(r), cfg.f(k)));
  }
  return acc;
}

// Noise sources. Anything with `Elem draw(const Field&)` works.

class UniformNoise {
 public:
  explicit UniformNoise(std::uint64_t seed) : rng_(seed) {}
  explicit UniformNoise(std::mt19937_64 rng) : rng_(std::move(rng)) {}

  Elem draw(const Field& F) {
    std::uniform_int_distribution<std::uint64_t> d(0, F.modulus() - 1);
    return Elem{d(rng_)};
  }

  std::mt19937_64& engine() noexcept { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Forces every noise symbol to zero so structural parts can be compared
/// against reference displays.
struct ZeroNoise {
  Elem draw(const Field&) const noexcept { return Elem{0}; }
};

/// Replays a fixed sequence (wrapping around); used by exhaustive
/// enumeration tests.
class ScriptedNoise {
 public:
  explicit ScriptedNoise(std::vector<Elem> script) : script_(std::move(script)) {}
  Elem draw(const Field&) {
    Elem e = script_.empty() ? Elem{0} : script_[pos_ % script_.size()];
    ++pos_;
    return e;
  }
  std::size_t consumed() const noexcept { return pos_; }

 private:
  std::vector<Elem> script_;
  std::size_t pos_ = 0;
};

template <typename N>
concept NoiseSource = requires(N n, const Field& F) {
  { n.draw(F) } -> std::same_as<Elem>;
};

}  // namespace pruw
