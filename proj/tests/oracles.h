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


// Slow, independent reference implementations used only by tests.

#ifndef MSCC_TESTS_ORACLES_H_
#define MSCC_TESTS_ORACLES_H_

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mscc/combinatorics.h"
#include "mscc/mn_scheme.h"
#include "mscc/system_model.h"

namespace mscc::oracle {

// Pascal's triangle in big integers.
inline BigInt PascalBinomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  std::vector<BigInt> row(1, 1);
  for (int i = 1; i <= n; ++i) {
    std::vector<BigInt> next(i + 1, 1);
    for (int j = 1; j < i; ++j) next[j] = row[j - 1] + row[j];
    row = std::move(next);
  }
  return row[k];
}

// Every size-`size` subset of {0..n-1} by recursive choice, sorted as sets.
inline std::vector<std::vector<int>> AllSubsets(int n, int size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(cur.size()) == size) {
      out.push_back(cur);
      return;
    }
    for (int i = next; i < n; ++i) {
      cur.push_back(i);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline UserSet ToSet(const std::vector<int>& ids) { return UserSet::FromIds(ids); }

// Effective-pair predicate written with std::set differences.
inline bool EffectivePair(const std::vector<int>& s1, const std::vector<int>& s2,
                          const std::set<int>& side_a,
                          const std::set<int>& side_b) {
  if (s1 == s2) return false;
  std::vector<int> d12;
  std::vector<int> d21;
  std::set_difference(s1.begin(), s1.end(), s2.begin(), s2.end(),
                      std::back_inserter(d12));
  std::set_difference(s2.begin(), s2.end(), s1.begin(), s1.end(),
                      std::back_inserter(d21));
  for (int u : d12) {
    if (!side_a.count(u)) return false;
  }
  for (int u : d21) {
    if (!side_b.count(u)) return false;
  }
  return true;
}

// Either orientation, from sorted id lists and per-user sides.
inline bool Adjacent(UserSet x, UserSet y, const SystemConfig& config) {
  if (x == y) return false;
  const std::vector<int> xs = x.ids();
  const std::vector<int> ys = y.ids();
  std::vector<int> only_x;
  std::vector<int> only_y;
  std::set_difference(xs.begin(), xs.end(), ys.begin(), ys.end(),
                      std::back_inserter(only_x));
  std::set_difference(ys.begin(), ys.end(), xs.begin(), xs.end(),
                      std::back_inserter(only_y));
  auto all_on = [&](const std::vector<int>& ids, Server side) {
    return std::all_of(ids.begin(), ids.end(),
                       [&](int u) { return config.SideOf(u) == side; });
  };
  return (all_on(only_x, Server::kA) && all_on(only_y, Server::kB)) ||
         (all_on(only_x, Server::kB) && all_on(only_y, Server::kA));
}

// Span membership by plain Gaussian elimination over every packet column the
// problem touches, cached packets included as explicit unit rows. Returns
// rank(rows + target) == rank(rows).
inline bool InSpan(const Cache& cache, const std::vector<Broadcast>& broadcasts,
                   const PacketId& target) {
  std::map<PacketId, int> col;
  auto intern = [&](const PacketId& p) {
    return col.emplace(p, static_cast<int>(col.size())).first->second;
  };
  std::vector<std::set<int>> rows;
  for (const Broadcast& b : broadcasts) {
    std::set<int> row;
    for (const PacketId& p : b.payload.terms()) row.insert(intern(p));
    rows.push_back(row);
  }
  const int target_col = intern(target);
  const std::size_t touched = col.size();
  std::vector<PacketId> touched_packets(touched);
  for (const auto& [p, c] : col) touched_packets[c] = p;
  for (const PacketId& p : touched_packets) {
    if (cache.Contains(p)) rows.push_back({col[p]});
  }
  auto rank = [](std::vector<std::set<int>> m) {
    int r = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      // Pick the row with the smallest leading column among the rest.
      std::size_t best = m.size();
      for (std::size_t j = i; j < m.size(); ++j) {
        if (m[j].empty()) continue;
        if (best == m.size() || *m[j].begin() < *m[best].begin()) best = j;
      }
      if (best == m.size()) break;
      std::swap(m[i], m[best]);
      const int lead = *m[i].begin();
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        if (m[j].count(lead)) {
          for (int c : m[i]) {
            if (!m[j].erase(c)) m[j].insert(c);
          }
        }
      }
      ++r;
    }
    return r;
  };
  const int base = rank(rows);
  rows.push_back({target_col});
  return rank(rows) == base;
}

// Forward substitution: repeatedly take a message with exactly one unknown
// term and learn it. Sound but incomplete in general; complete on MN plans.
inline std::set<PacketId> Peel(const Cache& cache,
                               const std::vector<Broadcast>& broadcasts) {
  std::set<PacketId> known;
  bool progress = true;
  while (progress) {
    progress = false;
    for (const Broadcast& b : broadcasts) {
      const PacketId* unknown = nullptr;
      int count = 0;
      for (const PacketId& p : b.payload.terms()) {
        if (cache.Contains(p) || known.count(p)) continue;
        unknown = &p;
        ++count;
      }
      if (count == 1) {
        known.insert(*unknown);
        progress = true;
      }
    }
  }
  return known;
}

// Maximum matching size by exhaustive branching. Guarded: at most 20
// vertices and 60 edges.
inline int ExhaustiveMaxMatching(const std::vector<UserSet>& x,
                                 const std::vector<UserSet>& y,
                                 const SystemConfig& config) {
  if (x.size() + y.size() > 20) {
    throw std::length_error("exhaustive matching limited to 20 vertices");
  }
  std::vector<std::vector<int>> adj(x.size());
  std::size_t edges = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (Adjacent(x[i], y[j], config)) {
        adj[i].push_back(static_cast<int>(j));
        ++edges;
      }
    }
  }
  if (edges > 60) {
    throw std::length_error("exhaustive matching limited to 60 edges");
  }
  std::vector<bool> used(y.size(), false);
  auto best = [&](auto&& self, std::size_t i) -> int {
    if (i == x.size()) return 0;
    int result = self(self, i + 1);  // leave x[i] unmatched
    for (int j : adj[i]) {
      if (used[j]) continue;
      used[j] = true;
      result = std::max(result, 1 + self(self, i + 1));
      used[j] = false;
    }
    return result;
  };
  return best(best, 0);
}

// Members of layer w counted by scanning every (t+1)-subset.
inline std::uint64_t LayerCount(const SystemConfig& config, int w) {
  std::uint64_t n = 0;
  for (const auto& s : AllSubsets(config.K(), config.t() + 1)) {
    int in_a = 0;
    for (int u : s) in_a += config.SideOf(u) == Server::kA;
    n += in_a == w;
  }
  return n;
}

}  // namespace mscc::oracle

#endif  // MSCC_TESTS_ORACLES_H_
