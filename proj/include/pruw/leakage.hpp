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
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pruw/error.hpp"
#include "pruw/exact.hpp"

namespace pruw {

/// A sparse set X: Pr distinct 0-based global subpacket indices, sorted.
using Pattern = std::vector<std::size_t>;

/// Distributions with at most this many support points are handled in
/// exact rational arithmetic; larger ones only in double precision.
inline constexpr std::size_t kExactSupportLimit = 10000;

/// Upper bound on (permutations x support) enumerated by the brute-force
/// mutual-information oracle.
inline constexpr double kEnumerationLimit = 1e7;

struct Entropy {
  double bits = 0.0;
  std::optional<LogLinear> exact;
};

namespace detail {

inline void check_segments(std::size_t p, std::size_t b) {
  PRUW_ENFORCE(b >= 1 && p >= 1 && p % b == 0, Errc::invalid_b,
               "B = " + std::to_string(b) + " does not divide P = " + std::to_string(p));
}

inline Entropy finish(const EntropyAccumulator& acc) {
  Entropy e;
  if (acc.exact()) {
    e.exact = acc.exact_value();
    e.bits = acc.exact_value().value();
  } else {
    e.bits = acc.bits();
  }
  return e;
}

template <typename Key>
Entropy entropy_of(const std::map<Key, Rational>& mass, bool exact) {
  EntropyAccumulator acc(exact);
  for (const auto& [k, p] : mass) acc.add(p);
  return finish(acc);
}

inline BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

class PatternDistribution {
 public:
  PatternDistribution(std::size_t p, std::size_t b, std::size_t pr,
                      std::map<Pattern, Rational> mass)
      : p_(p), b_(b), pr_(pr), mass_(std::move(mass)) {
    detail::check_segments(p_, b_);
    PRUW_ENFORCE(pr_ >= 1 && pr_ <= p_, Errc::config_error, "need 1 <= Pr <= P");
    PRUW_ENFORCE(!mass_.empty(), Errc::config_error, "empty distribution");
    Rational total = 0;
    for (auto it = mass_.begin(); it != mass_.end();) {
      const auto& [x, w] = *it;
      PRUW_ENFORCE(w >= 0, Errc::config_error, "negative probability");
      PRUW_ENFORCE(x.size() == pr_ && std::is_sorted(x.begin(), x.end()) &&
                       std::adjacent_find(x.begin(), x.end()) == x.end(),
                   Errc::config_error, "support elements must be sorted Pr-subsets");
      PRUW_ENFORCE(x.back() < p_, Errc::index_out_of_range, "subpacket index >= P");
      total += w;
      if (w == 0) it = mass_.erase(it);
      else ++it;
    }
    PRUW_ENFORCE(total == 1, Errc::config_error, "probabilities must sum to 1");
  }

  /// Every Pr-subset equally likely.
  static PatternDistribution uniform(std::size_t p, std::size_t b, std::size_t pr) {
    PRUW_ENFORCE(pr >= 1 && pr <= p, Errc::config_error, "need 1 <= Pr <= P");
    BigInt count = detail::binomial(p, pr);
    PRUW_ENFORCE(count <= 1000000, Errc::infeasible_enumeration,
                 "uniform support too large to materialize");
    Rational each(1, count);
    std::map<Pattern, Rational> mass;
    Pattern x(pr);
    std::iota(x.begin(), x.end(), std::size_t{0});
    while (true) {
      mass.emplace(x, each);
      std::size_t i = pr;
      while (i > 0 && x[i - 1] == p - pr + i - 1) --i;
      if (i == 0) break;
      ++x[i - 1];
      for (std::size_t j = i; j < pr; ++j) x[j] = x[j - 1] + 1;
    }
    return PatternDistribution(p, b, pr, std::move(mass));
  }

  /// Probabilities proportional to positive integer weights.
  static PatternDistribution from_weights(std::size_t p, std::size_t b, std::size_t pr,
                                          const std::map<Pattern, std::uint64_t>& w) {
    BigInt total = 0;
    for (const auto& [x, v] : w) total += v;
    PRUW_ENFORCE(total > 0, Errc::config_error, "weights sum to zero");
    std::map<Pattern, Rational> mass;
    for (const auto& [x, v] : w)
      if (v != 0) mass.emplace(x, Rational(BigInt(v), total));
    return PatternDistribution(p, b, pr, std::move(mass));
  }

  static PatternDistribution point_mass(std::size_t p, std::size_t b, Pattern x) {
    std::size_t pr = x.size();
    return PatternDistribution(p, b, pr, {{std::move(x), Rational(1)}});
  }

  std::size_t num_subpackets() const noexcept { return p_; }
  std::size_t num_segments() const noexcept { return b_; }
  std::size_t segment_size() const noexcept { return p_ / b_; }
  std::size_t sparse_count() const noexcept { return pr_; }
  const std::map<Pattern, Rational>& mass() const noexcept { return mass_; }
  std::size_t support_size() const noexcept { return mass_.size(); }
  bool exact() const noexcept { return mass_.size() <= kExactSupportLimit; }

  /// Same probabilities with segment count b (for sweeps over B).
  PatternDistribution with_segments(std::size_t b) const {
    return PatternDistribution(p_, b, pr_, mass_);
  }

 private:
  std::size_t p_;
  std::size_t b_;
  std::size_t pr_;
  std::map<Pattern, Rational> mass_;
};

/// Number of sparse subpackets in each segment (segments are consecutive
/// runs of P/B subpackets).
struct SegmentHistogram {
  std::vector<std::size_t> counts;
  friend auto operator<=>(const SegmentHistogram&, const SegmentHistogram&) = default;
};

inline SegmentHistogram histogram_of(const Pattern& x, std::size_t p, std::size_t b) {
  detail::check_segments(p, b);
  const std::size_t m = p / b;
  SegmentHistogram h{std::vector<std::size_t>(b, 0)};
  for (std::size_t s : x) {
    PRUW_ENFORCE(s < p, Errc::index_out_of_range, "subpacket index >= P");
    ++h.counts[s / m];
  }
  return h;
}

/// H of the ordered per-segment counts; the leakage with within-segment
/// permutations only.
inline Entropy entropy_hat(const PatternDistribution& d) {
  std::map<SegmentHistogram, Rational> induced;
  for (const auto& [x, w] : d.mass())
    induced[histogram_of(x, d.num_subpackets(), d.num_segments())] += w;
  return detail::entropy_of(induced, d.exact());
}

/// H of the per-segment counts as a multiset; the leakage once segments are
/// permuted as well.
inline Entropy entropy_tilde(const PatternDistribution& d) {
  std::map<SegmentHistogram, Rational> induced;
  for (const auto& [x, w] : d.mass()) {
    SegmentHistogram h = histogram_of(x, d.num_subpackets(), d.num_segments());
    std::sort(h.counts.begin(), h.counts.end());
    induced[h] += w;
  }
  return detail::entropy_of(induced, d.exact());
}

inline Entropy entropy_of_pattern(const PatternDistribution& d) {
  return detail::entropy_of(d.mass(), d.exact());
}

enum class PermutationMode { within_only, within_and_inter };

/// I(X; Y) where Y is the set of permuted positions the databases observe:
/// each real index (seg, s) is seen at (seg', pi_seg^-1(s)) with seg' = seg
/// (within only) or seg' = phi^-1(seg) (within and inter), under uniformly
/// random independent permutations. Computed by enumerating every
/// permutation choice.
inline Entropy brute_force_mi(const PatternDistribution& d, PermutationMode mode) {
  const std::size_t b = d.num_segments();
  const std::size_t m = d.segment_size();
  const bool inter = mode == PermutationMode::within_and_inter;

  auto factorial = [](std::size_t n) {
    double f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
  };
  double work = std::pow(factorial(m), static_cast<double>(b)) *
                (inter ? factorial(b) : 1.0) * static_cast<double>(d.support_size());
  if (work > kEnumerationLimit) {
    std::ostringstream msg;
    msg << "brute-force enumeration needs " << std::setprecision(3) << work
        << " steps, limit is " << kEnumerationLimit;
    throw Error(Errc::infeasible_enumeration, msg.str());
  }

  auto all_perms = [](std::size_t n) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
  };
  // Every permutation appears once as an inverse, so these tables can be
  // read directly as "real -> permuted position".
  const auto within = all_perms(m);
  std::vector<std::vector<std::size_t>> segs;
  if (inter) {
    segs = all_perms(b);
  } else {
    segs.emplace_back(b);
    std::iota(segs[0].begin(), segs[0].end(), std::size_t{0});
  }
  BigInt total = BigInt(segs.size());
  for (std::size_t i = 0; i < b; ++i) total *= within.size();

  const bool exact = d.exact();
  EntropyAccumulator h_xy(exact);
  std::map<Pattern, Rational> y_mass;
  std::vector<std::size_t> choice(b, 0);
  Pattern y(d.sparse_count());
  for (const auto& [x, px] : d.mass()) {
    std::map<Pattern, std::uint64_t> counts;
    for (const auto& phi : segs) {
      std::fill(choice.begin(), choice.end(), 0);
      while (true) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          std::size_t seg = x[i] / m;
          std::size_t sub = x[i] % m;
          y[i] = phi[seg] * m + within[choice[seg]][sub];
        }
        Pattern key = y;
        std::sort(key.begin(), key.end());
        ++counts[key];
        std::size_t j = 0;
        while (j < b && ++choice[j] == within.size()) choice[j++] = 0;
        if (j == b) break;
      }
    }
    for (const auto& [yy, c] : counts) {
      Rational p = px * Rational(BigInt(c), total);
      h_xy.add(p);
      y_mass[yy] += p;
    }
  }
  Entropy hx = entropy_of_pattern(d);
  Entropy hy = detail::entropy_of(y_mass, exact);
  Entropy out;
  if (exact) {
    out.exact = *hx.exact + *hy.exact - h_xy.exact_value();
    out.bits = out.exact->value();
  } else {
    out.bits = hx.bits + hy.bits - h_xy.bits();
  }
  return out;
}

struct LeakageRow {
  std::size_t segments = 0;
  Entropy h_hat;
  Entropy h_tilde;
};

/// Both leakage entropies for X uniform over all Pr-subsets of P, for each
/// B. Works on segment-count compositions, so P need not be small:
/// P(x_hat) = prod_i C(P/B, x_i) / C(P, Pr).
inline std::vector<LeakageRow> leakage_curve(std::size_t p, std::size_t pr,
                                             const std::vector<std::size_t>& b_list) {
  PRUW_ENFORCE(pr >= 1 && pr <= p, Errc::config_error, "need 1 <= Pr <= P");
  for (std::size_t b : b_list) detail::check_segments(p, b);
  const BigInt all = detail::binomial(p, pr);
  std::vector<LeakageRow> rows;
  for (std::size_t b : b_list) {
    const std::size_t m = p / b;
    PRUW_ENFORCE(detail::binomial(pr + b - 1, b - 1) <= BigInt(kEnumerationLimit),
                 Errc::infeasible_enumeration,
                 "too many segment-count compositions for B=" + std::to_string(b));
    std::map<SegmentHistogram, Rational> ordered;
    std::vector<std::size_t> h(b, 0);
    // Enumerate compositions of pr into b parts bounded by m.
    auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
      if (i + 1 == b) {
        if (left > m) return;
        h[i] = left;
        BigInt ways = 1;
        for (std::size_t c : h) ways *= detail::binomial(m, c);
        ordered[SegmentHistogram{h}] = Rational(ways, all);
        return;
      }
      for (std::size_t c = 0; c <= std::min(m, left); ++c) {
        h[i] = c;
        self(self, i + 1, left - c);
      }
    };
    rec(rec, 0, pr);
    std::map<SegmentHistogram, Rational> sorted;
    for (const auto& [k, v] : ordered) {
      SegmentHistogram s = k;
      std::sort(s.counts.begin(), s.counts.end());
      sorted[s] += v;
    }
    bool exact = ordered.size() <= kExactSupportLimit;
    rows.push_back(LeakageRow{b, detail::entropy_of(ordered, exact),
                              detail::entropy_of(sorted, exact)});
  }
  return rows;
}

inline void write_leakage_csv(std::ostream& os, const std::vector<LeakageRow>& rows) {
  auto old = os.precision(12);
  os << "B,H_hat_bits,H_tilde_bits\n";
  for (const auto& r : rows)
    os << r.segments << ',' << r.h_hat.bits << ',' << r.h_tilde.bits << '\n';
  os.precision(old);
}

}  // namespace pruw
