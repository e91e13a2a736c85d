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
#include <ostream>
#include <vector>

#include "pruw/database.hpp"
#include "pruw/field.hpp"
#include "pruw/scheme.hpp"

namespace pruw {

/// One downloaded subpacket: the N answers and what the user made of them.
struct ReadRecord {
  std::size_t user = 0;
  PermutedId target;
  SubpacketId real;
  Vec answers;  // indexed by database
  Vec decoded;
  friend bool operator==(const ReadRecord&, const ReadRecord&) = default;
};

/// One user's upload: per_db[n] is what database n received.
struct WriteRecord {
  std::size_t user = 0;
  std::vector<SubpacketId> chosen;  // user-side only, never sent
  std::vector<std::vector<UpdateTuple>> per_db;
  friend bool operator==(const WriteRecord&, const WriteRecord&) = default;
};

struct RoundTranscript {
  std::uint64_t round = 0;
  std::size_t num_databases = 0;
  DownlinkSelection downlink;
  std::vector<ReadRecord> reads;
  std::vector<WriteRecord> writes;
  /// Downloaded subpackets whose decode disagreed with the oracle model.
  std::size_t read_mismatches = 0;

  friend bool operator==(const RoundTranscript&, const RoundTranscript&) = default;
};

/// Text dump, one message per line: direction round party payload.
/// Indices are printed 1-based as (subpacket,segment).
inline void write_transcript(std::ostream& os, const RoundTranscript& t) {
  os << "down " << t.round << " db1 select";
  for (const auto& id : t.downlink.targets) os << ' ' << id;
  os << '\n';
  for (const auto& r : t.reads) {
    for (std::size_t n = 0; n < r.answers.size(); ++n) {
      os << "down " << t.round << " db" << n + 1 << "->u" << r.user << " answer "
         << r.target << ' ' << r.answers[n] << '\n';
    }
  }
  for (const auto& w : t.writes) {
    for (std::size_t n = 0; n < w.per_db.size(); ++n) {
      for (const auto& tu : w.per_db[n]) {
        os << "up " << t.round << " u" << w.user << "->db" << n + 1 << " tuple ("
           << tu.update << ',' << tu.subpacket + 1 << ',' << tu.segment + 1 << ")\n";
      }
    }
  }
}

}  // namespace pruw
