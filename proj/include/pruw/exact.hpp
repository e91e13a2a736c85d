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
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pruw {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Prime factorization by trial division. Fine for the integers that show up
/// as probability numerators and denominators here (well under 2^64).
inline std::map<BigInt, unsigned> factorize(BigInt n) {
  std::map<BigInt, unsigned> out;
  if (n < 2) return out;
  for (BigInt p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  if (n > 1) ++out[n];
  return out;
}

/// sum_p c_p * log2(p) over primes p with rational c_p. Logs of distinct
/// primes are linearly independent over the rationals, so two values are
/// equal exactly when their coefficient maps are.
class LogLinear {
 public:
  LogLinear() = default;

  /// log2(x) for a positive rational x.
  static LogLinear log2_of(const Rational& x) {
    LogLinear out;
    for (const auto& [p, e] : factorize(boost::multiprecision::numerator(x)))
      out.coef_[p] += Rational(e);
    for (const auto& [p, e] : factorize(boost::multiprecision::denominator(x)))
      out.coef_[p] -= Rational(e);
    out.normalize();
    return out;
  }

  LogLinear& operator+=(const LogLinear& o) {
    for (const auto& [p, c] : o.coef_) coef_[p] += c;
    normalize();
    return *this;
  }
  LogLinear& operator-=(const LogLinear& o) {
    for (const auto& [p, c] : o.coef_) coef_[p] -= c;
    normalize();
    return *this;
  }
  LogLinear& operator*=(const Rational& s) {
    for (auto& [p, c] : coef_) c *= s;
    normalize();
    return *this;
  }
  friend LogLinear operator+(LogLinear a, const LogLinear& b) { return a += b; }
  friend LogLinear operator-(LogLinear a, const LogLinear& b) { return a -= b; }
  friend LogLinear operator*(LogLinear a, const Rational& s) { return a *= s; }

  bool is_zero() const noexcept { return coef_.empty(); }
  const std::map<BigInt, Rational>& coefficients() const noexcept { return coef_; }

  double value() const {
    double v = 0.0;
    for (const auto& [p, c] : coef_) v += to_double(c) * std::log2(p.convert_to<double>());
    return v;
  }

  friend bool operator==(const LogLinear& a, const LogLinear& b) { return a.coef_ == b.coef_; }

  friend std::ostream& operator<<(std::ostream& os, const LogLinear& x) {
    if (x.coef_.empty()) return os << "0";
    bool first = true;
    for (const auto& [p, c] : x.coef_) {
      if (!first) os << " + ";
      first = false;
      os << '(' << c << ")*log2(" << p << ')';
    }
    return os;
  }

 private:
  void normalize() {
    for (auto it = coef_.begin(); it != coef_.end();) {
      if (it->second == 0) it = coef_.erase(it);
      else ++it;
    }
  }

  std::map<BigInt, Rational> coef_;
};

/// -sum p log2 p accumulated both exactly and in double precision.
class EntropyAccumulator {
 public:
  explicit EntropyAccumulator(bool exact) : exact_(exact) {}

  void add(const Rational& p) {
    if (p == 0) return;
    double d = to_double(p);
    bits_ -= d * std::log2(d);
    if (exact_) exact_value_ -= LogLinear::log2_of(p) * p;
  }

  double bits() const noexcept { return bits_; }
  bool exact() const noexcept { return exact_; }
  const LogLinear& exact_value() const noexcept { return exact_value_; }

 private:
  bool exact_;
  double bits_ = 0.0;
  LogLinear exact_value_;
};

}  // namespace pruw
