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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pruw/coordinator.hpp"
#include "pruw/error.hpp"
#include "pruw/exact.hpp"
#include "pruw/leakage.hpp"
#include "pruw/scheme.hpp"
#include "pruw/transcript.hpp"

namespace pruw {

/// data + log_coeff * log_q(P). Indices over P positions are charged
/// log_q(P) symbols each, so keeping that term symbolic makes measured and
/// closed-form costs comparable exactly.
struct CostValue {
  Rational data = 0;
  Rational log_coeff = 0;

  double value(std::size_t p, std::uint64_t q) const {
    return to_double(data) + to_double(log_coeff) * std::log(static_cast<double>(p)) /
                                 std::log(static_cast<double>(q));
  }

  friend bool operator==(const CostValue&, const CostValue&) = default;
};

struct StorageCount {
  std::uint64_t data = 0;
  std::uint64_t within = 0;
  std::uint64_t inter = 0;
  std::uint64_t total() const noexcept { return data + within + inter; }
  friend bool operator==(const StorageCount&, const StorageCount&) = default;
};

struct CostReport {
  CostValue read;
  CostValue write;
  CostValue read_formula;
  CostValue write_formula;
  std::vector<StorageCount> storage;  // one per database
  StorageCount storage_formula;
  std::string storage_order;

  bool costs_match() const { return read == read_formula && write == write_formula; }
  bool storage_matches() const {
    for (const auto& s : storage)
      if (!(s == storage_formula)) return false;
    return true;
  }
};

namespace detail {

/// (c, k) in C = c r N / (N - k) * (1 + log_q P / N) for reading and
/// C = c r N / (N - k) * (1 + log_q P) for writing.
inline std::pair<int, int> cost_constants(Scheme s) {
  switch (s) {
    case Scheme::uncoded: return {2, 2};
    case Scheme::coded: return {3, 1};
    case Scheme::uncoded_two_level: return {2, 4};
    case Scheme::coded_two_level: return {5, 1};
  }
  throw Error(Errc::invalid_case, "unknown scheme");
}

}  // namespace detail

/// Closed-form reading cost: c r' (1 + log_q P / N) / (1 - k/N).
inline CostValue formula_read_cost(const SchemeParams& params) {
  auto [c, k] = detail::cost_constants(params.scheme());
  Rational n(params.num_databases());
  Rational r(BigInt(params.downlink_count()), BigInt(params.num_subpackets()));
  return CostValue{c * r * n / (n - k), c * r / (n - k)};
}

/// Closed-form writing cost: c r (1 + log_q P) / (1 - k/N).
inline CostValue formula_write_cost(const SchemeParams& params) {
  auto [c, k] = detail::cost_constants(params.scheme());
  Rational n(params.num_databases());
  Rational r(BigInt(params.uplink_count()), BigInt(params.num_subpackets()));
  Rational v = c * r * n / (n - k);
  return CostValue{v, v};
}

/// Human-readable closed forms, with r, r', N and log_q P symbolic.
inline std::pair<std::string, std::string> formula_text(Scheme s) {
  switch (s) {
    case Scheme::uncoded:
      return {"2r'(1+log_q(P)/N)/(1-2/N)", "2r(1+log_q(P))/(1-2/N)"};
    case Scheme::coded:
      return {"3r'(1+log_q(P)/N)/(1-1/N)", "3r(1+log_q(P))/(1-1/N)"};
    case Scheme::uncoded_two_level:
      return {"2r'(1+log_q(P)/N)/(1-4/N)", "2r(1+log_q(P))/(1-4/N)"};
    case Scheme::coded_two_level:
      return {"5r'(1+log_q(P)/N)/(1-1/N)", "5r(1+log_q(P))/(1-1/N)"};
  }
  throw Error(Errc::invalid_case, "unknown scheme");
}

/// Exact symbol counts of one database (data, within matrices, inter matrix).
inline StorageCount storage_complexity(const SchemeParams& params) {
  const std::uint64_t p = params.num_subpackets();
  const std::uint64_t b = params.num_segments();
  const std::uint64_t ell = params.ell();
  StorageCount c;
  c.data = params.storage_length();
  const std::uint64_t side = is_coded(params.scheme()) ? p / b : p * ell / b;
  c.within = b * side * side;
  if (params.scheme() == Scheme::uncoded_two_level) c.inter = (b * ell) * (b * ell);
  if (params.scheme() == Scheme::coded_two_level) c.inter = b * b;
  return c;
}

inline std::string storage_order(Scheme s) {
  switch (s) {
    case Scheme::uncoded: return "O(L^2/B)";
    case Scheme::coded: return "O(L^2/(B N^2))";
    case Scheme::uncoded_two_level: return "max{O(L^2/B), O(N^2 B^2)}";
    case Scheme::coded_two_level: return "max{O(L^2/(N^2 B)), O(B^2)}";
  }
  throw Error(Errc::invalid_case, "unknown scheme");
}

/// What one database actually holds. The cached combined matrix of
/// schemes 3/4 is derived from the others and is not counted.
inline StorageCount measure_storage(const DatabaseState& db) {
  StorageCount c;
  c.data = db.storage.size();
  for (const auto& w : db.within) c.within += w.entries.rows() * w.entries.cols();
  if (db.inter) c.inter = db.inter->entries.rows() * db.inter->entries.cols();
  return c;
}

/// Costs seen by the first user of a round. Answers carry one symbol each;
/// the designated database broadcasts the Pr' permuted indices once; each
/// uploaded tuple carries one symbol and one index.
inline CostReport measure_round(const RoundTranscript& t, const SchemeParams& params) {
  const std::size_t n_db = params.num_databases();
  PRUW_ENFORCE(t.num_databases == n_db, Errc::malformed_transcript,
               "transcript database count does not match params");
  PRUW_ENFORCE(!t.writes.empty(), Errc::malformed_transcript, "transcript has no users");
  const std::size_t user = t.writes.front().user;

  std::uint64_t answers = 0;
  std::uint64_t reads = 0;
  for (const auto& r : t.reads) {
    if (r.user != user) continue;
    PRUW_ENFORCE(r.answers.size() == n_db, Errc::malformed_transcript,
                 "read record must hold one answer per database");
    answers += r.answers.size();
    ++reads;
  }
  PRUW_ENFORCE(reads == t.downlink.targets.size(), Errc::malformed_transcript,
               "user did not download every selected subpacket");

  const WriteRecord& w = t.writes.front();
  PRUW_ENFORCE(w.per_db.size() == n_db, Errc::malformed_transcript,
               "write record must address every database");
  std::uint64_t tuples = 0;
  for (const auto& v : w.per_db) {
    PRUW_ENFORCE(v.size() == w.per_db[0].size(), Errc::malformed_transcript,
                 "databases received different tuple counts");
    for (std::size_t i = 0; i < v.size(); ++i) {
      PRUW_ENFORCE(v[i].id() == w.per_db[0][i].id(), Errc::malformed_transcript,
                   "databases received different tuple indices");
    }
    tuples += v.size();
  }

  const Rational l(params.model_size());
  CostReport rep;
  rep.read = CostValue{Rational(answers) / l, Rational(t.downlink.targets.size()) / l};
  rep.write = CostValue{Rational(tuples) / l, Rational(tuples) / l};
  rep.read_formula = formula_read_cost(params);
  rep.write_formula = formula_write_cost(params);
  rep.storage_formula = storage_complexity(params);
  rep.storage_order = storage_order(params.scheme());
  return rep;
}

inline CostReport measure_round(const RoundTranscript& t, const SchemeParams& params,
                                std::span<const DatabaseState> dbs) {
  CostReport rep = measure_round(t, params);
  for (const auto& db : dbs) rep.storage.push_back(measure_storage(db));
  return rep;
}

namespace detail {

inline std::string rational_text(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

inline nlohmann::json cost_json(const CostValue& c, std::size_t p, std::uint64_t q) {
  return {{"data", rational_text(c.data)},
          {"log_q_P_coefficient", rational_text(c.log_coeff)},
          {"value", c.value(p, q)}};
}

inline nlohmann::json storage_json(const StorageCount& s) {
  return {{"data", s.data}, {"within", s.within}, {"inter", s.inter}, {"total", s.total()}};
}

}  // namespace detail

inline nlohmann::json cost_report_json(const CostReport& rep, const SchemeParams& params) {
  const std::size_t p = params.num_subpackets();
  const std::uint64_t q = params.modulus();
  auto [read_text, write_text] = formula_text(params.scheme());
  nlohmann::json j;
  j["params"] = {{"case", scheme_id(params.scheme())},
                 {"N", params.num_databases()},
                 {"P", p},
                 {"B", params.num_segments()},
                 {"ell", params.ell()},
                 {"L", params.model_size()},
                 {"Pr", params.uplink_count()},
                 {"Pr_prime", params.downlink_count()},
                 {"q", q}};
  j["read_cost"] = {{"measured", detail::cost_json(rep.read, p, q)},
                    {"formula", detail::cost_json(rep.read_formula, p, q)},
                    {"expression", read_text},
                    {"equal", rep.read == rep.read_formula}};
  j["write_cost"] = {{"measured", detail::cost_json(rep.write, p, q)},
                     {"formula", detail::cost_json(rep.write_formula, p, q)},
                     {"expression", write_text},
                     {"equal", rep.write == rep.write_formula}};
  nlohmann::json measured = nlohmann::json::array();
  for (const auto& s : rep.storage) measured.push_back(detail::storage_json(s));
  j["storage"] = {{"measured_per_database", measured},
                  {"formula", detail::storage_json(rep.storage_formula)},
                  {"order", rep.storage_order},
                  {"equal", rep.storage_matches()}};
  return j;
}

/// The segment count with the smallest storage among divisors B < P whose
/// leakage (uniform sparse sets) stays below eps; ties go to the smaller B.
inline std::optional<std::size_t> choose_segments(Scheme s, std::size_t n,
                                                  std::size_t p, std::size_t pr,
                                                  double eps) {
  std::vector<std::size_t> divisors;
  for (std::size_t b = 1; b < p; ++b)
    if (p % b == 0) divisors.push_back(b);
  auto rows = leakage_curve(p, pr, divisors);
  std::optional<std::size_t> best;
  std::uint64_t best_total = 0;
  for (const auto& row : rows) {
    double h = has_inter(s) ? row.h_tilde.bits : row.h_hat.bits;
    if (!(h < eps)) continue;
    SchemeParams params(s, n, p, row.segments, pr, pr);
    std::uint64_t total = storage_complexity(params).total();
    if (!best || total < best_total) {
      best = row.segments;
      best_total = total;
    }
  }
  return best;
}

}  // namespace pruw
