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

// Three-server delivery plans: effective pairs become (A, B, P) triples,
// unpaired index sets are carried by two servers, and subsets lying wholly
// on one side go out from that side's data server alone.

#ifndef MSCC_DELIVERY_H_
#define MSCC_DELIVERY_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mscc/mn_scheme.h"
#include "mscc/pair_engine.h"
#include "mscc/scheme.h"
#include "mscc/system_model.h"

namespace mscc {

// An inconsistent plan (coverage gap, invalid pair) detected while
// assembling.
class PlanError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ServerPair : std::uint8_t { kAB, kAP, kBP };

std::string ServerPairName(ServerPair p);
ServerPair ParseServerPair(const std::string& s);

struct PairTriple {
  UserSet s1;  // more A-users
  UserSet s2;
  Broadcast a;
  Broadcast b;
  Broadcast p;
};

struct UnpairedAssignment {
  UserSet s;
  ServerPair servers = ServerPair::kAB;
  Broadcast first;   // from the first server named in `servers`
  Broadcast second;  // from the second
};

struct SingleBroadcast {
  UserSet s;
  Server server = Server::kA;
  Broadcast message;
};

struct DeliveryPlan {
  SystemConfig config;
  Demand demand;
  Scheme scheme = Scheme::kLap;  // resolved
  int regime = 0;
  std::vector<PairTriple> paired;
  std::vector<UnpairedAssignment> unpaired;
  std::vector<SingleBroadcast> singles;
  std::vector<Broadcast> mn;  // kMn plans only
  // Index sets left unmatched by the pairing, including ones that were
  // routed to a single server because they lie on one side.
  std::uint64_t unmatched = 0;

  std::vector<Broadcast> AllBroadcasts() const;
};

struct PairMessages {
  Broadcast a;
  Broadcast b;
  Broadcast p;
};

// m^A = XOR_{k in S1} A_{d_k, S1\k}, m^B = XOR_{k in S2} B_{d_k, S2\k} and
// m^P = XOR_{k in S1∩S2∩B} (A^B)_{d_k, S1\k} ^ XOR_{k in S1∩S2∩A}
// (A^B)_{d_k, S2\k}, where (A^B)_{i,T} is the parity of the twin packets
// (A, i, T) and (B, i, T). Throws PlanError if (s1, s2) is not an
// effective pair.
PairMessages SynthesizePairMessages(UserSet s1, UserSet s2,
                                    const Demand& demand,
                                    const SystemConfig& config);

// The two broadcasts replacing the MN signal of `s` on a pair of servers.
// For {A,P} (and {B,P}) the data server sends the A-part (B-part) of every
// requester and the parity server the twin parities of the other side's
// requesters; their XOR is the MN signal.
std::pair<Broadcast, Broadcast> SynthesizeUnpaired(UserSet s,
                                                   ServerPair servers,
                                                   const Demand& demand,
                                                   const SystemConfig& config);

// MN signal of a one-sided subset from its own data server.
Broadcast SynthesizeSingle(UserSet s, Server server, const Demand& demand);

// Builds the full plan. Unmatched sets are assigned to server pairs by a
// greedy balancer: minimize the resulting max load, then the sum of squared
// loads, then follow the rotation {A,B} -> {A,P} -> {B,P}. Throws PlanError
// if some (t+1)-subset ends up served zero or several times.
DeliveryPlan AssemblePlan(const SystemConfig& config, const Demand& demand,
                          Scheme scheme, int regime,
                          const std::vector<Matching>& matchings,
                          const std::vector<UserSet>& unmatched,
                          const std::vector<UserSet>& singles);

// Whole pipeline: MN delivery for kMn, otherwise graphs, matchings and
// AssemblePlan.
DeliveryPlan BuildPlan(const SystemConfig& config, const Demand& demand,
                       Scheme scheme);

struct Loads {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  std::uint64_t p = 0;
  std::uint64_t single = 0;  // kMn plans
  std::uint64_t max() const;
};

struct RateReport {
  Loads loads;
  std::uint64_t packets_per_file = 0;  // F = C(K, t)
  Rational rate;                       // max load / F
  Rational delta_measured;             // unmatched / C(K, t+1)
  Rational delta_formula;              // closed form for the scheme (0 for even t)
  Rational formula_rate;
  Rational slack;                      // rate - formula_rate
  std::uint64_t pairs = 0;
  std::uint64_t unpaired = 0;
  std::uint64_t singles = 0;
};

RateReport MeasureRate(const DeliveryPlan& plan);

// ---------------------------------------------------------------------------
// Audits. Failures are data.

struct CoverageAudit {
  std::vector<UserSet> orphaned;    // served nowhere
  std::vector<UserSet> duplicated;  // served more than once
  std::vector<UserSet> malformed;   // not a (t+1)-subset of the users
  bool ok() const {
    return orphaned.empty() && duplicated.empty() && malformed.empty();
  }
};

CoverageAudit AuditCoverage(const DeliveryPlan& plan);

// One line per broadcast violating the origin invariant or per triple that
// is not an effective pair.
std::vector<std::string> AuditOrigins(const DeliveryPlan& plan);

struct PlanAudit {
  CoverageAudit coverage;
  std::vector<std::string> origin_violations;
  RecoveryReport recovery;
  bool ok() const {
    return coverage.ok() && origin_violations.empty() && recovery.all_ok();
  }
  // Name of the first failing audit, or "" when everything passed.
  std::string FirstFailure() const;
};

PlanAudit AuditPlan(const DeliveryPlan& plan, int jobs = 0);

}  // namespace mscc

#endif  // MSCC_DELIVERY_H_
