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

#include "mscc/delivery.h"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "mscc/analysis.h"

namespace mscc {

std::string ServerPairName(ServerPair p) {
  switch (p) {
    case ServerPair::kAB:
      return "AB";
    case ServerPair::kAP:
      return "AP";
    case ServerPair::kBP:
      return "BP";
  }
  return "?";
}

ServerPair ParseServerPair(const std::string& s) {
  if (s == "AB") return ServerPair::kAB;
  if (s == "AP") return ServerPair::kAP;
  if (s == "BP") return ServerPair::kBP;
  throw ConfigError("unknown server pair '" + s + "'");
}

std::vector<Broadcast> DeliveryPlan::AllBroadcasts() const {
  std::vector<Broadcast> out = mn;
  for (const PairTriple& tr : paired) {
    out.push_back(tr.a);
    out.push_back(tr.b);
    out.push_back(tr.p);
  }
  for (const UnpairedAssignment& u : unpaired) {
    out.push_back(u.first);
    out.push_back(u.second);
  }
  for (const SingleBroadcast& s : singles) out.push_back(s.message);
  return out;
}

namespace {

// XOR over k in `who` of (server, d_k index, s \ {k}).
void AddTerms(std::vector<PacketId>& terms, Server server, UserSet s,
              UserSet who, const Demand& demand) {
  who.ForEach([&](int k) {
    terms.push_back({server, demand[k].index, s.Without(k)});
  });
}

// Twin parities (A^B) over k in `who` on s \ {k}.
void AddParities(std::vector<PacketId>& terms, UserSet s, UserSet who,
                 const Demand& demand) {
  AddTerms(terms, Server::kA, s, who, demand);
  AddTerms(terms, Server::kB, s, who, demand);
}

Origin OriginOf(Server s) { return s == Server::kA ? Origin::kA : Origin::kB; }

}  // namespace

PairMessages SynthesizePairMessages(UserSet s1, UserSet s2,
                                    const Demand& demand,
                                    const SystemConfig& config) {
  if (!IsEffectivePair(s1, s2, config)) {
    throw PlanError("not an effective pair: " + s1.ToString() + ", " +
                    s2.ToString());
  }
  const UserSet common = s1 & s2;
  const UserSet q_a = common & config.mask_a();
  const UserSet q_b = common & config.mask_b();

  std::vector<PacketId> a_terms;
  AddTerms(a_terms, Server::kA, s1, s1, demand);
  std::vector<PacketId> b_terms;
  AddTerms(b_terms, Server::kB, s2, s2, demand);
  std::vector<PacketId> p_terms;
  AddParities(p_terms, s1, q_b, demand);
  AddParities(p_terms, s2, q_a, demand);

  const std::vector<UserSet> sets = {s1, s2};
  return PairMessages{
      {Origin::kA, sets, GF2Combination::FromTerms(std::move(a_terms))},
      {Origin::kB, sets, GF2Combination::FromTerms(std::move(b_terms))},
      {Origin::kP, sets, GF2Combination::FromTerms(std::move(p_terms))}};
}

std::pair<Broadcast, Broadcast> SynthesizeUnpaired(UserSet s,
                                                   ServerPair servers,
                                                   const Demand& demand,
                                                   const SystemConfig& config) {
  const UserSet in_a = s & config.mask_a();
  const UserSet in_b = s & config.mask_b();
  std::vector<PacketId> first;
  std::vector<PacketId> second;
  Origin o1 = Origin::kA;
  Origin o2 = Origin::kB;
  switch (servers) {
    case ServerPair::kAB:
      AddTerms(first, Server::kA, s, in_a, demand);
      AddTerms(second, Server::kB, s, in_b, demand);
      break;
    case ServerPair::kAP:
      o2 = Origin::kP;
      AddTerms(first, Server::kA, s, s, demand);
      AddParities(second, s, in_b, demand);
      break;
    case ServerPair::kBP:
      o1 = Origin::kB;
      o2 = Origin::kP;
      AddTerms(first, Server::kB, s, s, demand);
      AddParities(second, s, in_a, demand);
      break;
  }
  return {Broadcast{o1, {s}, GF2Combination::FromTerms(std::move(first))},
          Broadcast{o2, {s}, GF2Combination::FromTerms(std::move(second))}};
}

Broadcast SynthesizeSingle(UserSet s, Server server, const Demand& demand) {
  std::vector<PacketId> terms;
  AddTerms(terms, server, s, s, demand);
  return Broadcast{OriginOf(server), {s},
                   GF2Combination::FromTerms(std::move(terms))};
}

DeliveryPlan AssemblePlan(const SystemConfig& config, const Demand& demand,
                          Scheme scheme, int regime,
                          const std::vector<Matching>& matchings,
                          const std::vector<UserSet>& unmatched,
                          const std::vector<UserSet>& singles) {
  ValidateDemand(config, demand);
  DeliveryPlan plan;
  plan.config = config;
  plan.demand = demand;
  plan.scheme = scheme;
  plan.regime = regime;

  for (const Matching& m : matchings) {
    for (const auto& [s1, s2] : m.pairs) {
      PairMessages msg = SynthesizePairMessages(s1, s2, demand, config);
      plan.paired.push_back(
          {s1, s2, std::move(msg.a), std::move(msg.b), std::move(msg.p)});
    }
  }

  std::array<std::uint64_t, 3> load{};  // A, B, P
  load[0] = load[1] = load[2] = plan.paired.size();

  auto add_single = [&](UserSet s) {
    const Server side = s.IsSubsetOf(config.mask_a()) ? Server::kA : Server::kB;
    plan.singles.push_back({s, side, SynthesizeSingle(s, side, demand)});
    ++load[side == Server::kA ? 0 : 1];
  };
  for (UserSet s : singles) {
    if (!s.IsSubsetOf(config.mask_a()) && !s.IsSubsetOf(config.mask_b())) {
      throw PlanError("single " + s.ToString() + " spans both sides");
    }
    add_single(s);
  }

  std::vector<UserSet> leftovers = unmatched;
  std::sort(leftovers.begin(), leftovers.end());
  plan.unmatched = leftovers.size();
  constexpr std::array<ServerPair, 3> kRotation = {
      ServerPair::kAB, ServerPair::kAP, ServerPair::kBP};
  constexpr std::array<std::array<int, 2>, 3> kServers = {
      std::array<int, 2>{0, 1}, {0, 2}, {1, 2}};
  std::size_t turn = 0;
  for (UserSet s : leftovers) {
    if (s.IsSubsetOf(config.mask_a()) || s.IsSubsetOf(config.mask_b())) {
      add_single(s);
      continue;
    }
    int best = -1;
    std::uint64_t best_max = 0;
    std::uint64_t best_sq = 0;
    for (std::size_t r = 0; r < 3; ++r) {
      const int c = static_cast<int>((turn + r) % 3);
      std::array<std::uint64_t, 3> next = load;
      ++next[kServers[c][0]];
      ++next[kServers[c][1]];
      const std::uint64_t mx = std::max({next[0], next[1], next[2]});
      const std::uint64_t sq =
          next[0] * next[0] + next[1] * next[1] + next[2] * next[2];
      if (best < 0 || mx < best_max || (mx == best_max && sq < best_sq)) {
        best = c;
        best_max = mx;
        best_sq = sq;
      }
    }
    ++load[kServers[best][0]];
    ++load[kServers[best][1]];
    ++turn;
    auto [first, second] = SynthesizeUnpaired(s, kRotation[best], demand, config);
    plan.unpaired.push_back(
        {s, kRotation[best], std::move(first), std::move(second)});
  }

  const CoverageAudit coverage = AuditCoverage(plan);
  if (!coverage.ok()) {
    std::string what = "plan does not cover every (t+1)-subset exactly once";
    if (!coverage.orphaned.empty()) {
      what += "; orphaned " + coverage.orphaned.front().ToString();
    }
    if (!coverage.duplicated.empty()) {
      what += "; duplicated " + coverage.duplicated.front().ToString();
    }
    throw PlanError(what);
  }
  return plan;
}

DeliveryPlan BuildPlan(const SystemConfig& config, const Demand& demand,
                       Scheme scheme) {
  if (scheme == Scheme::kMn) {
    DeliveryPlan plan;
    plan.config = config;
    plan.demand = demand;
    plan.scheme = Scheme::kMn;
    plan.mn = MnDelivery(config, demand);
    return plan;
  }
  const GraphSet graphs = BuildGraphs(config, scheme);
  std::vector<Matching> matchings;
  std::vector<UserSet> unmatched = graphs.fixed_unpaired;
  for (const PairGraph& g : graphs.graphs) {
    Matching m = MaxMatching(g, config);
    unmatched.insert(unmatched.end(), m.unmatched.begin(), m.unmatched.end());
    matchings.push_back(std::move(m));
  }
  return AssemblePlan(config, demand, graphs.scheme, graphs.regime, matchings,
                      unmatched, graphs.singles);
}

std::uint64_t Loads::max() const { return std::max({a, b, p, single}); }

RateReport MeasureRate(const DeliveryPlan& plan) {
  RateReport r;
  const SystemConfig& c = plan.config;
  r.loads.single = plan.mn.size();
  r.loads.a = r.loads.b = r.loads.p = plan.paired.size();
  for (const UnpairedAssignment& u : plan.unpaired) {
    switch (u.servers) {
      case ServerPair::kAB: ++r.loads.a; ++r.loads.b; break;
      case ServerPair::kAP: ++r.loads.a; ++r.loads.p; break;
      case ServerPair::kBP: ++r.loads.b; ++r.loads.p; break;
    }
  }
  for (const SingleBroadcast& s : plan.singles) {
    ++(s.server == Server::kA ? r.loads.a : r.loads.b);
  }
  r.packets_per_file = c.PacketsPerFile();
  r.rate = Rational(r.loads.max(), r.packets_per_file);
  r.delta_measured = Rational(plan.unmatched, Binomial(c.K(), c.t() + 1));
  r.pairs = plan.paired.size();
  r.unpaired = plan.unpaired.size();
  r.singles = plan.singles.size();

  if (plan.scheme == Scheme::kMn || c.t() % 2 == 0) {
    r.delta_formula = 0;
  } else if (plan.scheme == Scheme::kLap) {
    r.delta_formula = DeltaLapExact(c.K(), c.t());
  } else {
    r.delta_formula = DeltaImprovedExact(c.K(), c.t()).delta;
  }
  r.formula_rate = plan.scheme == Scheme::kMn
                       ? MnRate(c.K(), c.t())
                       : RateTheorem(c.K(), c.t(), plan.scheme);
  r.slack = r.rate - r.formula_rate;
  return r;
}

CoverageAudit AuditCoverage(const DeliveryPlan& plan) {
  CoverageAudit audit;
  const SystemConfig& c = plan.config;
  std::unordered_map<UserSet, int, UserSetHash> seen;
  auto note = [&](UserSet s) {
    if (s.size() != c.t() + 1 || !s.IsSubsetOf(c.all_users())) {
      audit.malformed.push_back(s);
      return;
    }
    ++seen[s];
  };
  for (const Broadcast& b : plan.mn) {
    for (UserSet s : b.index_sets) note(s);
  }
  for (const PairTriple& tr : plan.paired) {
    note(tr.s1);
    note(tr.s2);
  }
  for (const UnpairedAssignment& u : plan.unpaired) note(u.s);
  for (const SingleBroadcast& s : plan.singles) note(s.s);

  ForEachSubset(c.K(), c.t() + 1, [&](UserSet s) {
    const auto it = seen.find(s);
    if (it == seen.end()) {
      audit.orphaned.push_back(s);
    } else if (it->second > 1) {
      audit.duplicated.push_back(s);
    }
  });
  return audit;
}

std::vector<std::string> AuditOrigins(const DeliveryPlan& plan) {
  std::vector<std::string> out;
  auto check = [&](const Broadcast& b, const std::string& where) {
    if (!RespectsOrigin(b)) {
      out.push_back(where + ": origin " + OriginName(b.origin) +
                    " cannot send this payload");
    }
  };
  for (const PairTriple& tr : plan.paired) {
    const std::string where = "pair " + tr.s1.ToString() + "/" + tr.s2.ToString();
    if (tr.s1.size() != plan.config.t() + 1 ||
        tr.s2.size() != plan.config.t() + 1 ||
        !IsEffectivePair(tr.s1, tr.s2, plan.config)) {
      out.push_back(where + ": not an effective pair");
    }
    if (tr.a.origin != Origin::kA || tr.b.origin != Origin::kB ||
        tr.p.origin != Origin::kP) {
      out.push_back(where + ": triple must come from A, B and P");
    }
    check(tr.a, where);
    check(tr.b, where);
    check(tr.p, where);
  }
  for (const UnpairedAssignment& u : plan.unpaired) {
    const std::string where = "unpaired " + u.s.ToString();
    check(u.first, where);
    check(u.second, where);
  }
  for (const SingleBroadcast& s : plan.singles) {
    const std::string where = "single " + s.s.ToString();
    if (s.message.origin != (s.server == Server::kA ? Origin::kA : Origin::kB)) {
      out.push_back(where + ": sent by the wrong server");
    }
    check(s.message, where);
  }
  for (const Broadcast& b : plan.mn) {
    if (b.origin != Origin::kSingle) {
      out.push_back("mn broadcast with origin " + OriginName(b.origin));
    }
  }
  return out;
}

std::string PlanAudit::FirstFailure() const {
  if (!coverage.ok()) return "coverage";
  if (!origin_violations.empty()) return "origin-consistency";
  if (!recovery.all_ok()) return "decodability";
  return "";
}

PlanAudit AuditPlan(const DeliveryPlan& plan, int jobs) {
  PlanAudit audit;
  audit.coverage = AuditCoverage(plan);
  audit.origin_violations = AuditOrigins(plan);
  const std::vector<Broadcast> all = plan.AllBroadcasts();
  audit.recovery = VerifyFullRecovery(plan.config, plan.demand, all, jobs);
  return audit;
}

}  // namespace mscc
