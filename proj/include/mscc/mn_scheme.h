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

#ifndef MSCC_MN_SCHEME_H_
#define MSCC_MN_SCHEME_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mscc/system_model.h"

namespace mscc {

// Who transmits a broadcast: the single MN server, a data server or the
// parity server.
enum class Origin : std::uint8_t { kSingle, kA, kB, kP };

std::string OriginName(Origin o);
Origin ParseOrigin(const std::string& s);

struct Broadcast {
  Origin origin = Origin::kSingle;
  // The one or two (t+1)-subsets this message serves. Informational: every
  // user hears every broadcast.
  std::vector<UserSet> index_sets;
  GF2Combination payload;
};

// True when the payload respects what the origin stores: A sends only
// server-A packets, B only server-B packets, P only sums of twin parities.
bool RespectsOrigin(const Broadcast& b);

// Single-server MN delivery: one broadcast per (t+1)-subset S, in colex
// order, carrying XOR_{k in S} W_{d_k, S \ {k}}.
std::vector<Broadcast> MnDelivery(const SystemConfig& config,
                                  const Demand& demand);

// MN signal for one index set.
GF2Combination MnSignal(UserSet s, const Demand& demand);

// GF(2) span test for one user: the cached packets are unit vectors, the
// broadcasts arbitrary rows. Cached coordinates are quotiented out and the
// remaining rows are brought to reduced row echelon form once, so repeated
// queries are cheap.
class Decoder {
 public:
  Decoder(const Cache& cache, std::span<const Broadcast> broadcasts);

  // True iff the unit vector of `target` lies in the span.
  bool CanDecode(const PacketId& target) const;
  int rank() const { return static_cast<int>(pivot_row_.size()); }

 private:
  using Row = std::vector<std::uint64_t>;

  int user_;
  std::unordered_map<PacketId, int, PacketIdHash> column_;
  std::vector<Row> rows_;
  // column -> index into rows_ of the row holding that pivot
  std::unordered_map<int, int> pivot_row_;
};

bool UserCanDecode(const Cache& cache, std::span<const Broadcast> broadcasts,
                   const PacketId& target);

struct UserRecovery {
  int user = 0;
  bool ok = true;
  std::uint64_t missing = 0;  // undecodable packets of the requested file
  std::optional<PacketId> first_failure;
};

struct RecoveryReport {
  std::vector<UserRecovery> users;
  bool all_ok() const;
};

// Checks, for each user k, that every packet of file d_k not in k's cache
// is decodable from the cache plus all broadcasts. Users are checked in
// parallel on up to `jobs` threads (0 = hardware concurrency).
RecoveryReport VerifyFullRecovery(const SystemConfig& config,
                                  const Demand& demand,
                                  std::span<const Broadcast> broadcasts,
                                  int jobs = 0);

}  // namespace mscc

#endif  // MSCC_MN_SCHEME_H_
