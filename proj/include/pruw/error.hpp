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

#include <stdexcept>
#include <string>
#include <string_view>

namespace pruw {

enum class Errc {
  zero_inverse,
  singular_system,
  invalid_case,
  dimension_mismatch,
  index_out_of_range,
  inadmissible_n,
  config_error,
  duplicate_index,
  infeasible_enumeration,
  invalid_b,
  malformed_transcript,
  malformed_snapshot,
};

constexpr std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::zero_inverse: return "ZeroInverse";
    case Errc::singular_system: return "SingularSystem";
    case Errc::invalid_case: return "InvalidCase";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::inadmissible_n: return "InadmissibleN";
    case Errc::config_error: return "ConfigError";
    case Errc::duplicate_index: return "DuplicateIndex";
    case Errc::infeasible_enumeration: return "InfeasibleEnumeration";
    case Errc::invalid_b: return "InvalidB";
    case Errc::malformed_transcript: return "MalformedTranscript";
    case Errc::malformed_snapshot: return "MalformedSnapshot";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI's exit-status mapping) can branch without parsing
/// message text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

#define PRUW_ENFORCE(cond, code, msg)        \
  do {                                       \
    if (!(cond)) {                           \
      throw ::pruw::Error((code), (msg));    \
    }                                        \
  } while (false)

}  // namespace pruw
