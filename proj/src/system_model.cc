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

#include "mscc/system_model.h"

#include <algorithm>
#include <random>

namespace mscc {

char ServerChar(Server s) { return s == Server::kA ? 'A' : 'B'; }

Server ParseServer(const std::string& s) {
  if (s == "A") return Server::kA;
  if (s == "B") return Server::kB;
  throw ConfigError("unknown data server '" + s + "' (expected A or B)");
}

SystemConfig BuildConfig(int K, int M, int N,
                         const std::optional<UserPartition>& partition) {
  if (K < 2 || K > kMaxUsers) {
    throw ConfigError("K must lie in [2, " + std::to_string(kMaxUsers) +
                      "], got " + std::to_string(K));
  }
  if (N < 2) throw ConfigError("N must be at least 2");
  if (M <= 0 || M >= N) {
    throw ConfigError("lambda = M/N must satisfy 0 < lambda < 1 (M=" +
                      std::to_string(M) + ", N=" + std::to_string(N) + ")");
  }
  if ((static_cast<long long>(K) * M) % N != 0) {
    throw ConfigError("t = K*M/N = " + std::to_string(K * M) + "/" +
                      std::to_string(N) + " is not an integer");
  }
  if (N % 2 != 0) {
    throw ConfigError("N must be even (files split equally over servers A "
                      "and B), got " + std::to_string(N));
  }
  const int t = static_cast<int>(static_cast<long long>(K) * M / N);
  if (t < 1 || t > K - 1) {
    throw ConfigError("t = K*M/N must lie in [1, K-1], got " +
                      std::to_string(t));
  }

  SystemConfig c;
  c.k_ = K;
  c.m_ = M;
  c.n_ = N;
  c.t_ = t;
  c.lambda_ = Rational(M, N);

  if (partition) {
    c.users_a_ = partition->users_a;
    c.users_b_ = partition->users_b;
  } else {
    if (K % 2 != 0) {
      throw ConfigError("symmetric mode needs an even K, got " +
                        std::to_string(K));
    }
    for (int u = 0; u < K / 2; ++u) c.users_a_.push_back(u);
    for (int u = K / 2; u < K; ++u) c.users_b_.push_back(u);
  }

  if (c.users_a_.empty() || c.users_b_.empty()) {
    throw ConfigError("both user sides must be nonempty");
  }
  c.rank_.assign(K, 0);
  auto add_side = [&](const std::vector<int>& side, UserSet& mask) {
    for (std::size_t i = 0; i < side.size(); ++i) {
      const int u = side[i];
      if (u < 0 || u >= K) {
        throw ConfigError("user id " + std::to_string(u) +
                          " outside [0, K)");
      }
      if (c.mask_a_.contains(u) || c.mask_b_.contains(u)) {
        throw ConfigError("user id " + std::to_string(u) +
                          " listed twice in the partition");
      }
      mask = mask.With(u);
      c.rank_[u] = static_cast<int>(i) + 1;
    }
  };
  add_side(c.users_a_, c.mask_a_);
  add_side(c.users_b_, c.mask_b_);
  if ((c.mask_a_ | c.mask_b_) != UserSet::Prefix(K)) {
    throw ConfigError("partition must cover all K users");
  }
  return c;
}

SystemConfig BuildConfigForLambda(int K, const Rational& lambda) {
  if (lambda <= 0 || lambda >= 1) {
    throw ConfigError("lambda must satisfy 0 < lambda < 1, got " +
                      ToString(lambda));
  }
  const Rational t = lambda * K;
  if (boost::multiprecision::denominator(t) != 1) {
    throw ConfigError("t = K*lambda = " + ToString(t) + " is not an integer");
  }
  // N = K keeps every all-distinct demand feasible; then M = t.
  return BuildConfig(K, static_cast<int>(boost::multiprecision::numerator(t)),
                     K);
}

std::string PacketId::ToString() const {
  return std::string("(") + ServerChar(server) + "," + std::to_string(file) +
         "," + subset.ToString() + ")";
}

GF2Combination GF2Combination::FromTerms(std::vector<PacketId> terms) {
  std::sort(terms.begin(), terms.end());
  GF2Combination out;
  out.terms_.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size();) {
    std::size_t j = i;
    while (j < terms.size() && terms[j] == terms[i]) ++j;
    if ((j - i) % 2 == 1) out.terms_.push_back(terms[i]);
    i = j;
  }
  return out;
}

bool GF2Combination::Contains(const PacketId& p) const {
  return std::binary_search(terms_.begin(), terms_.end(), p);
}

GF2Combination& GF2Combination::operator^=(const GF2Combination& other) {
  std::vector<PacketId> merged;
  merged.reserve(terms_.size() + other.terms_.size());
  std::set_symmetric_difference(terms_.begin(), terms_.end(),
                                other.terms_.begin(), other.terms_.end(),
                                std::back_inserter(merged));
  terms_ = std::move(merged);
  return *this;
}

bool GF2Combination::IsTwinPaired() const {
  for (const PacketId& p : terms_) {
    if (!Contains(Twin(p))) return false;
  }
  return true;
}

void ValidateDemand(const SystemConfig& config, const Demand& demand) {
  if (demand.size() != config.K()) {
    throw ConfigError("demand lists " + std::to_string(demand.size()) +
                      " users, expected K = " + std::to_string(config.K()));
  }
  for (int u = 0; u < config.K(); ++u) {
    const FileRef& f = demand[u];
    if (f.index < 1 || f.index > config.FilesPerServer()) {
      throw ConfigError("user " + std::to_string(u) + " requests file index " +
                        std::to_string(f.index) + " outside [1, N/2]");
    }
    if (f.server != config.SideOf(u)) {
      throw ConfigError("user " + std::to_string(u) + " is on side " +
                        ServerChar(config.SideOf(u)) +
                        " but requests a file of server " +
                        ServerChar(f.server));
    }
  }
}

Demand WorstCaseDemand(const SystemConfig& config) {
  if (config.FilesPerServer() < std::max(config.KA(), config.KB())) {
    throw ConfigError("all-distinct demand needs N/2 >= max(K_A, K_B)");
  }
  std::vector<FileRef> files(config.K());
  for (int u = 0; u < config.K(); ++u) {
    files[u] = FileRef{config.SideOf(u), config.RankInSide(u)};
  }
  return Demand(std::move(files));
}

Demand RandomDemand(const SystemConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FileRef> files(config.K());
  const auto range = static_cast<std::uint64_t>(config.FilesPerServer());
  for (int u = 0; u < config.K(); ++u) {
    // mt19937_64 output is fixed by the standard; the distribution classes
    // are not, so reduce by modulo to keep runs reproducible across
    // toolchains.
    files[u] = FileRef{config.SideOf(u), static_cast<int>(rng() % range) + 1};
  }
  return Demand(std::move(files));
}

std::vector<PacketId> Cache::Packets() const {
  std::vector<PacketId> out;
  const int per_server = config_->FilesPerServer();
  const UserSet others = config_->all_users().Without(user_);
  const std::vector<UserSet> rests = SubsetsOf(others, config_->t() - 1);
  out.reserve(2 * per_server * rests.size());
  for (Server s : {Server::kA, Server::kB}) {
    for (int i = 1; i <= per_server; ++i) {
      for (UserSet rest : rests) out.push_back({s, i, rest.With(user_)});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cache> PlaceCaches(const SystemConfig& config) {
  std::vector<Cache> caches;
  caches.reserve(config.K());
  for (int u = 0; u < config.K(); ++u) caches.emplace_back(config, u);
  return caches;
}

}  // namespace mscc
