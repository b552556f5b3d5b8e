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

#include "mscc/combinatorics.h"

#include <cctype>
#include <limits>
#include <stdexcept>

namespace mscc {

UserSet UserSet::FromIds(const std::vector<int>& ids) {
  UserSet s;
  for (int id : ids) {
    if (id < 0 || id >= kMaxUsers) {
      throw std::invalid_argument("user id out of range: " +
                                  std::to_string(id));
    }
    s = s.With(id);
  }
  return s;
}

std::vector<int> UserSet::ids() const {
  std::vector<int> out;
  out.reserve(size());
  ForEach([&](int u) { out.push_back(u); });
  return out;
}

std::string UserSet::ToString() const {
  std::string out = "{";
  bool first = true;
  ForEach([&](int u) {
    if (!first) out += ',';
    out += std::to_string(u);
    first = false;
  });
  out += '}';
  return out;
}

std::uint64_t Binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  // Multiplicative form; each prefix product is itself a binomial, so the
  // division is exact. 128-bit intermediate avoids overflow for n <= 64.
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("binomial overflows uint64");
    }
  }
  return static_cast<std::uint64_t>(r);
}

BigInt BigBinomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

std::vector<UserSet> SubsetsOf(UserSet universe, int size) {
  std::vector<UserSet> out;
  const std::vector<int> members = universe.ids();
  const int n = static_cast<int>(members.size());
  ForEachSubset(n, size, [&](UserSet local) {
    UserSet s;
    local.ForEach([&](int i) { s = s.With(members[i]); });
    out.push_back(s);
  });
  return out;
}

std::string ToString(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double ToDouble(const Rational& r) { return r.convert_to<double>(); }

namespace {

BigInt ParseInteger(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty number");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) throw std::invalid_argument("malformed number: " + s);
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) {
      throw std::invalid_argument("malformed number: " + s);
    }
  }
  return BigInt(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational ParseRational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const BigInt num = ParseInteger(text.substr(0, slash));
    const BigInt den = ParseInteger(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot != std::string::npos) {
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty()) throw std::invalid_argument("malformed number: " + text);
    const bool negative = !whole.empty() && whole[0] == '-';
    BigInt w = (whole.empty() || whole == "-" || whole == "+")
                   ? BigInt(0)
                   : ParseInteger(whole);
    BigInt scale = boost::multiprecision::pow(BigInt(10),
                                              static_cast<unsigned>(frac.size()));
    BigInt f = ParseInteger(frac);
    if (negative) f = -f;
    return Rational(w * scale + f, scale);
  }
  return Rational(ParseInteger(text));
}

}  // namespace mscc
