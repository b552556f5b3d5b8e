// Copyright 2026 The mscc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MSCC_COMBINATORICS_H_
#define MSCC_COMBINATORICS_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace mscc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Largest user count representable by UserSet.
inline constexpr int kMaxUsers = 64;

// A set of user ids in [0, 64), stored as a bitmask. For subsets of equal
// size, numeric order of the mask is colexicographic order of the sets.
class UserSet {
 public:
  constexpr UserSet() = default;
  constexpr explicit UserSet(std::uint64_t bits) : bits_(bits) {}

  static UserSet FromIds(const std::vector<int>& ids);
  static constexpr UserSet Single(int user) {
    return UserSet(std::uint64_t{1} << user);
  }
  // {0, 1, ..., count - 1}
  static constexpr UserSet Prefix(int count) {
    return UserSet(count >= 64 ? ~std::uint64_t{0}
                               : (std::uint64_t{1} << count) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int user) const { return (bits_ >> user) & 1u; }
  constexpr bool IsSubsetOf(UserSet other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  // Smallest member; undefined on the empty set.
  constexpr int front() const { return std::countr_zero(bits_); }

  constexpr UserSet With(int user) const {
    return UserSet(bits_ | (std::uint64_t{1} << user));
  }
  constexpr UserSet Without(int user) const {
    return UserSet(bits_ & ~(std::uint64_t{1} << user));
  }

  friend constexpr UserSet operator&(UserSet a, UserSet b) {
    return UserSet(a.bits_ & b.bits_);
  }
  friend constexpr UserSet operator|(UserSet a, UserSet b) {
    return UserSet(a.bits_ | b.bits_);
  }
  // Set difference.
  friend constexpr UserSet operator-(UserSet a, UserSet b) {
    return UserSet(a.bits_ & ~b.bits_);
  }
  friend constexpr auto operator<=>(UserSet, UserSet) = default;

  std::vector<int> ids() const;
  // "{0,2,5}"
  std::string ToString() const;

  template <typename Fn>
  void ForEach(Fn&& fn) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) fn(std::countr_zero(b));
  }

 private:
  std::uint64_t bits_ = 0;
};

struct UserSetHash {
  std::size_t operator()(UserSet s) const noexcept {
    return std::hash<std::uint64_t>{}(s.bits());
  }
};

// C(n, k) with the convention C(n, k) = 0 when k < 0, n < 0 or k > n.
// Exact for all n <= 64; throws std::overflow_error beyond uint64 range.
std::uint64_t Binomial(int n, int k);
BigInt BigBinomial(int n, int k);

// All subsets of size `size` of the `universe` members, in colexicographic
// order.
std::vector<UserSet> SubsetsOf(UserSet universe, int size);

// Visits every size-`size` subset of {0..n-1} in colexicographic order.
template <typename Fn>
void ForEachSubset(int n, int size, Fn&& fn) {
  if (size < 0 || size > n) return;
  if (size == 0) {
    fn(UserSet());
    return;
  }
  const std::uint64_t last =
      (n == 64 && size == 64) ? ~std::uint64_t{0}
                              : ((std::uint64_t{1} << size) - 1)
                                    << (n - size);
  std::uint64_t v = (size == 64) ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << size) - 1;
  while (true) {
    fn(UserSet(v));
    if (v == last) break;
    // Gosper's hack: next integer with the same popcount.
    const std::uint64_t c = v & (~v + 1);
    const std::uint64_t r = v + c;
    v = (((r ^ v) >> 2) / c) | r;
  }
}

// "p/q" (or "p" when q == 1).
std::string ToString(const Rational& r);
double ToDouble(const Rational& r);
// Parses "p/q", "p" or a finite decimal such as "0.3". Throws
// std::invalid_argument on malformed input or a zero denominator.
Rational ParseRational(const std::string& text);

}  // namespace mscc

#endif  // MSCC_COMBINATORICS_H_
