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

// The (K, M, N) caching system: configuration, symbolic packets, demands and
// the uncoded MN placement. Nothing here depends on a delivery strategy.

#ifndef MSCC_SYSTEM_MODEL_H_
#define MSCC_SYSTEM_MODEL_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mscc/combinatorics.h"

namespace mscc {

// Rejection of an invalid system description. The message names the
// violated constraint.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Data server holding a file. Parity symbols are never a Server; they are
// GF2Combinations of twin packets.
enum class Server : std::uint8_t { kA = 0, kB = 1 };

char ServerChar(Server s);
Server ParseServer(const std::string& s);
inline Server Other(Server s) { return s == Server::kA ? Server::kB : Server::kA; }

// Explicit split of the users into the A-requesting and B-requesting sides.
// Order matters: the first entry of each list is the distinguished a_1 / b_1.
struct UserPartition {
  std::vector<int> users_a;
  std::vector<int> users_b;
};

class SystemConfig {
 public:
  int K() const { return k_; }
  int M() const { return m_; }
  int N() const { return n_; }
  // t = K M / N, the number of users caching each packet.
  int t() const { return t_; }
  // M / N
  const Rational& lambda() const { return lambda_; }

  const std::vector<int>& users_a() const { return users_a_; }
  const std::vector<int>& users_b() const { return users_b_; }
  int KA() const { return static_cast<int>(users_a_.size()); }
  int KB() const { return static_cast<int>(users_b_.size()); }
  UserSet mask_a() const { return mask_a_; }
  UserSet mask_b() const { return mask_b_; }
  UserSet all_users() const { return mask_a_ | mask_b_; }
  bool symmetric() const { return KA() == KB(); }

  Server SideOf(int user) const {
    return mask_a_.contains(user) ? Server::kA : Server::kB;
  }
  // 1-based position of `user` in its side's list.
  int RankInSide(int user) const { return rank_[user]; }

  // Files per data server.
  int FilesPerServer() const { return n_ / 2; }
  // Packets per file, F = C(K, t).
  std::uint64_t PacketsPerFile() const { return Binomial(k_, t_); }

 private:
  friend SystemConfig BuildConfig(int, int, int,
                                  const std::optional<UserPartition>&);
  int k_ = 0;
  int m_ = 0;
  int n_ = 0;
  int t_ = 0;
  Rational lambda_;
  std::vector<int> users_a_;
  std::vector<int> users_b_;
  UserSet mask_a_;
  UserSet mask_b_;
  std::vector<int> rank_;
};

// Validates and builds a configuration. Without an explicit partition the
// split is users_a = [0, K/2), users_b = [K/2, K) and K must be even.
// Throws ConfigError when t = KM/N is not an integer in [1, K-1], N is odd,
// K is odd in symmetric mode, or the partition is malformed.
SystemConfig BuildConfig(int K, int M, int N,
                         const std::optional<UserPartition>& partition = {});

// Config for K users at cache fraction lambda with N = K files, so that the
// all-distinct demand exists. Throws ConfigError when K * lambda is not an
// integer.
SystemConfig BuildConfigForLambda(int K, const Rational& lambda);

// A requested file: the data server and the 1-based index on that server.
struct FileRef {
  Server server = Server::kA;
  int index = 1;
  friend auto operator<=>(const FileRef&, const FileRef&) = default;
};

// One MN segment W_{i,T}.
struct PacketId {
  Server server = Server::kA;
  int file = 1;
  UserSet subset;

  friend auto operator<=>(const PacketId&, const PacketId&) = default;
  // "(A,1,{0,1})"
  std::string ToString() const;
};

struct PacketIdHash {
  std::size_t operator()(const PacketId& p) const noexcept {
    std::uint64_t h = p.subset.bits() * 0x9E3779B97F4A7C15ull;
    h ^= (static_cast<std::uint64_t>(p.file) << 1 |
          static_cast<std::uint64_t>(p.server)) +
         0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

// The packet with the same file index and subset on the other data server.
inline PacketId Twin(const PacketId& p) {
  return PacketId{Other(p.server), p.file, p.subset};
}

// A sum over GF(2) of packets, kept as a sorted duplicate-free vector.
class GF2Combination {
 public:
  GF2Combination() = default;
  // Terms appearing an even number of times cancel.
  static GF2Combination FromTerms(std::vector<PacketId> terms);

  const std::vector<PacketId>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  bool Contains(const PacketId& p) const;

  GF2Combination& operator^=(const GF2Combination& other);
  friend GF2Combination operator^(GF2Combination a, const GF2Combination& b) {
    a ^= b;
    return a;
  }
  friend bool operator==(const GF2Combination&, const GF2Combination&) = default;

  // True when the terms split into (A, i, T), (B, i, T) twin pairs, i.e. the
  // combination is a sum of parity symbols A_i ^ B_i.
  bool IsTwinPaired() const;

 private:
  std::vector<PacketId> terms_;
};

// Requested file per user id.
class Demand {
 public:
  Demand() = default;
  explicit Demand(std::vector<FileRef> files) : files_(std::move(files)) {}

  const FileRef& operator[](int user) const { return files_[user]; }
  int size() const { return static_cast<int>(files_.size()); }
  const std::vector<FileRef>& files() const { return files_; }
  friend bool operator==(const Demand&, const Demand&) = default;

 private:
  std::vector<FileRef> files_;
};

// Checks the demand against the config: one file per user, valid indices,
// and in symmetric mode each user asks its own side's server. Throws
// ConfigError.
void ValidateDemand(const SystemConfig& config, const Demand& demand);

// All users request distinct files: the j-th user of each side asks file j
// of its side's server. Requires N/2 >= max(K_A, K_B).
Demand WorstCaseDemand(const SystemConfig& config);

// Each user asks a file drawn uniformly from its own side's server.
// Deterministic in `seed`.
Demand RandomDemand(const SystemConfig& config, std::uint64_t seed);

// Contents of one user's cache under MN placement: every packet whose
// subset contains the user, for every file.
class Cache {
 public:
  Cache(const SystemConfig& config, int user) : config_(&config), user_(user) {}

  int user() const { return user_; }
  bool Contains(const PacketId& p) const { return p.subset.contains(user_); }
  // Materialized, sorted; N * C(K-1, t-1) packets.
  std::vector<PacketId> Packets() const;

 private:
  const SystemConfig* config_;
  int user_;
};

// One cache per user id. The config must outlive the returned caches.
std::vector<Cache> PlaceCaches(const SystemConfig& config);

}  // namespace mscc

#endif  // MSCC_SYSTEM_MODEL_H_
