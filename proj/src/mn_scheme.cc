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

#include "mscc/mn_scheme.h"

#include <algorithm>
#include <bit>

#include "mscc/parallel.h"

namespace mscc {

std::string OriginName(Origin o) {
  switch (o) {
    case Origin::kSingle:
      return "S";
    case Origin::kA:
      return "A";
    case Origin::kB:
      return "B";
    case Origin::kP:
      return "P";
  }
  return "?";
}

Origin ParseOrigin(const std::string& s) {
  if (s == "S") return Origin::kSingle;
  if (s == "A") return Origin::kA;
  if (s == "B") return Origin::kB;
  if (s == "P") return Origin::kP;
  throw ConfigError("unknown broadcast origin '" + s + "'");
}

bool RespectsOrigin(const Broadcast& b) {
  switch (b.origin) {
    case Origin::kSingle:
      return true;
    case Origin::kA:
    case Origin::kB: {
      const Server s = b.origin == Origin::kA ? Server::kA : Server::kB;
      return std::all_of(b.payload.terms().begin(), b.payload.terms().end(),
                         [s](const PacketId& p) { return p.server == s; });
    }
    case Origin::kP:
      return b.payload.IsTwinPaired();
  }
  return false;
}

GF2Combination MnSignal(UserSet s, const Demand& demand) {
  std::vector<PacketId> terms;
  terms.reserve(s.size());
  s.ForEach([&](int k) {
    terms.push_back({demand[k].server, demand[k].index, s.Without(k)});
  });
  return GF2Combination::FromTerms(std::move(terms));
}

std::vector<Broadcast> MnDelivery(const SystemConfig& config,
                                  const Demand& demand) {
  ValidateDemand(config, demand);
  std::vector<Broadcast> out;
  out.reserve(Binomial(config.K(), config.t() + 1));
  ForEachSubset(config.K(), config.t() + 1, [&](UserSet s) {
    out.push_back({Origin::kSingle, {s}, MnSignal(s, demand)});
  });
  return out;
}

Decoder::Decoder(const Cache& cache, std::span<const Broadcast> broadcasts)
    : user_(cache.user()) {
  // Intern every uncached coordinate first so rows have a fixed width.
  for (const Broadcast& b : broadcasts) {
    for (const PacketId& p : b.payload.terms()) {
      if (!cache.Contains(p)) {
        column_.try_emplace(p, static_cast<int>(column_.size()));
      }
    }
  }
  const std::size_t words = (column_.size() + 63) / 64;

  for (const Broadcast& b : broadcasts) {
    Row row(words, 0);
    bool any = false;
    for (const PacketId& p : b.payload.terms()) {
      if (cache.Contains(p)) continue;
      const int c = column_.at(p);
      row[c / 64] ^= std::uint64_t{1} << (c % 64);
      any = true;
    }
    if (!any) continue;

    for (const auto& [col, idx] : pivot_row_) {
      if ((row[col / 64] >> (col % 64)) & 1u) {
        const Row& pivot = rows_[idx];
        for (std::size_t w = 0; w < words; ++w) row[w] ^= pivot[w];
      }
    }
    int pivot_col = -1;
    for (std::size_t w = 0; w < words; ++w) {
      if (row[w] != 0) {
        pivot_col = static_cast<int>(w * 64) + std::countr_zero(row[w]);
        break;
      }
    }
    if (pivot_col < 0) continue;

    // Keep the basis fully reduced: clear the new pivot from older rows.
    for (Row& other : rows_) {
      if ((other[pivot_col / 64] >> (pivot_col % 64)) & 1u) {
        for (std::size_t w = 0; w < words; ++w) other[w] ^= row[w];
      }
    }
    pivot_row_.emplace(pivot_col, static_cast<int>(rows_.size()));
    rows_.push_back(std::move(row));
  }
}

bool Decoder::CanDecode(const PacketId& target) const {
  if (target.subset.contains(user_)) return true;
  const auto col = column_.find(target);
  if (col == column_.end()) return false;
  const auto it = pivot_row_.find(col->second);
  if (it == pivot_row_.end()) return false;
  // In reduced form e_x is in the row space iff the pivot row of x is e_x.
  const Row& row = rows_[it->second];
  int weight = 0;
  for (std::uint64_t w : row) weight += std::popcount(w);
  return weight == 1;
}

bool UserCanDecode(const Cache& cache, std::span<const Broadcast> broadcasts,
                   const PacketId& target) {
  if (cache.Contains(target)) return true;
  return Decoder(cache, broadcasts).CanDecode(target);
}

bool RecoveryReport::all_ok() const {
  return std::all_of(users.begin(), users.end(),
                     [](const UserRecovery& u) { return u.ok; });
}

RecoveryReport VerifyFullRecovery(const SystemConfig& config,
                                  const Demand& demand,
                                  std::span<const Broadcast> broadcasts,
                                  int jobs) {
  RecoveryReport report;
  report.users.resize(config.K());
  ParallelFor(static_cast<std::size_t>(config.K()), jobs, [&](std::size_t i) {
    const int user = static_cast<int>(i);
    const Cache cache(config, user);
    const Decoder decoder(cache, broadcasts);
    UserRecovery& r = report.users[i];
    r.user = user;
    const FileRef want = demand[user];
    ForEachSubset(config.K(), config.t(), [&](UserSet t_subset) {
      if (t_subset.contains(user)) return;
      const PacketId p{want.server, want.index, t_subset};
      if (!decoder.CanDecode(p)) {
        r.ok = false;
        ++r.missing;
        if (!r.first_failure) r.first_failure = p;
      }
    });
  });
  return report;
}

}  // namespace mscc
