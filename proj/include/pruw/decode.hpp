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
#include <span>
#include <string>

#include "pruw/error.hpp"
#include "pruw/field.hpp"
#include "pruw/matrix.hpp"
#include "pruw/scheme.hpp"

namespace pruw {

/// Shape of the N x N system a user solves to recover one subpacket from
/// the N answers. Uncoded schemes put the ell terms 1/(f_k - alpha_n) first;
/// coded schemes put alpha_n^-ell .. alpha_n^-1 first. The rest is a
/// Vandermonde block for the interference polynomial of degree
/// noise_degree().
struct DecodeLayout {
  Scheme scheme;
  std::size_t ell;

  std::size_t noise_degree() const noexcept {
    switch (scheme) {
      case Scheme::uncoded: return ell + 1;
      case Scheme::coded: return 2 * ell;
      case Scheme::uncoded_two_level: return ell + 3;
      case Scheme::coded_two_level: return 4 * ell;
    }
    return 0;
  }

  std::size_t system_size() const noexcept { return ell + noise_degree() + 1; }
};

/// Row n: the layout evaluated at alpha_n.
inline Matrix decode_matrix(const DecodeLayout& layout, const FieldConfig& cfg) {
  PRUW_ENFORCE(cfg.ell() == layout.ell, Errc::config_error,
               "field config ell does not match layout");
  const std::size_t n = layout.system_size();
  PRUW_ENFORCE(cfg.num_databases() == n, Errc::config_error,
               "decode system needs exactly " + std::to_string(n) +
                   " databases, config has " +
                   std::to_string(cfg.num_databases()));
  const Field& F = cfg.field();
  const auto ell = static_cast<std::int64_t>(layout.ell);
  Matrix m(n, n);
  for (std::size_t row = 0; row < n; ++row) {
    std::size_t c = 0;
    if (is_coded(layout.scheme)) {
      for (std::int64_t e = -ell; e <= -1; ++e) m(row, c++) = cfg.alpha_pow(row, e);
    } else {
      for (std::size_t k = 0; k < layout.ell; ++k)
        m(row, c++) = cfg.inv_f_minus_alpha(k, row);
    }
    Elem p = F.one();
    for (std::size_t d = 0; d <= layout.noise_degree(); ++d) {
      m(row, c++) = p;
      p = F.mul(p, cfg.alpha(row));
    }
  }
  return m;
}

/// Solves rows * x = rhs. For coded layouts the first ell entries come out
/// as W_ell, ..., W_1.
inline Vec solve_mixed_vandermonde(const Field& F, const Matrix& rows,
                                   std::span<const Elem> rhs,
                                   const DecodeLayout& layout) {
  PRUW_ENFORCE(rows.square() && rows.rows() == layout.system_size() &&
                   rhs.size() == rows.rows(),
               Errc::dimension_mismatch,
               "decode system must be " + std::to_string(layout.system_size()) +
                   " x " + std::to_string(layout.system_size()));
  return solve_linear(F, rows, Vec(rhs.begin(), rhs.end()));
}

/// Precomputes the first ell rows of the inverse decode matrix so each
/// subpacket costs ell dot products. Output is always W_1..W_ell.
class SubpacketDecoder {
 public:
  SubpacketDecoder(const DecodeLayout& layout, const FieldConfig& cfg)
      : layout_(layout), field_(cfg.field()) {
    Matrix inv = invert(field_, decode_matrix(layout, cfg));
    head_ = submatrix(inv, 0, 0, layout.ell, inv.cols());
  }

  const DecodeLayout& layout() const noexcept { return layout_; }

  Vec decode(std::span<const Elem> answers) const {
    PRUW_ENFORCE(answers.size() == head_.cols(), Errc::dimension_mismatch,
                 "need one answer per database");
    Vec w = mul(field_, head_, answers);
    if (is_coded(layout_.scheme)) std::reverse(w.begin(), w.end());
    return w;
  }

 private:
  DecodeLayout layout_;
  Field field_;
  Matrix head_;
};

}  // namespace pruw
