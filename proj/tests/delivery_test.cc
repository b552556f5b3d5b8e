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

#include <array>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "mscc/analysis.h"
#include "oracles.h"

namespace mscc {
namespace {

std::vector<Broadcast> Flatten(const PairMessages& m) { return {m.a, m.b, m.p}; }

TEST(PairMessagesTest, DisjointPairHasEmptyParity) {
  // K=8, t=3: S1 = all four A-users (layer 4), S2 = all four B-users (layer 0).
  const SystemConfig c = BuildConfig(8, 3, 8);
  const Demand d = WorstCaseDemand(c);
  const UserSet s1 = c.mask_a();
  const UserSet s2 = c.mask_b();
  const PairMessages m = SynthesizePairMessages(s1, s2, d, c);
  EXPECT_TRUE(m.p.payload.empty());
  EXPECT_EQ(m.a.payload, MnSignal(s1, d));
  EXPECT_EQ(m.b.payload, MnSignal(s2, d));
}

TEST(PairMessagesTest, RejectsInvalidPair) {
  const SystemConfig c = BuildConfig(6, 3, 6);
  const Demand d = WorstCaseDemand(c);
  EXPECT_THROW(SynthesizePairMessages(UserSet::FromIds({0, 1, 3, 4}),
                                      UserSet::FromIds({0, 1, 3, 4}), d, c),
               PlanError);
  EXPECT_THROW(SynthesizePairMessages(UserSet::FromIds({0, 3, 4, 5}),
                                      UserSet::FromIds({0, 1, 3, 4}), d, c),
               PlanError);
}

TEST(PairMessagesTest, ConcretePairDecodesAtK6) {
  const SystemConfig c = BuildConfig(6, 3, 6);
  const Demand d = WorstCaseDemand(c);
  const UserSet s1 = UserSet::FromIds({0, 1, 2, 3});
  const UserSet s2 = UserSet::FromIds({0, 1, 3, 4});
  ASSERT_TRUE(IsEffectivePair(s1, s2, c));
  const std::vector<Broadcast> msgs = Flatten(SynthesizePairMessages(s1, s2, d, c));
  for (const Broadcast& b : msgs) EXPECT_TRUE(RespectsOrigin(b));
  for (int k : (s1 | s2).ids()) {
    const Cache cache(c, k);
    for (UserSet s : {s1, s2}) {
      if (!s.contains(k)) continue;
      const PacketId target{d[k].server, d[k].index, s.Without(k)};
      EXPECT_TRUE(UserCanDecode(cache, msgs, target)) << target.ToString();
      EXPECT_TRUE(oracle::InSpan(cache, msgs, target));
    }
  }
}

TEST(PairMessagesTest, SharedAUserRecoversBothSegments) {
  const SystemConfig c = BuildConfig(10, 5, 10);
  const Demand d = WorstCaseDemand(c);
  // S1 has A-users {0,1,2,3}, S2 swaps 2,3 for B-users 7,8. Users 0,1 are in
  // Q_A, user 5 in Q_B.
  const UserSet s1 = UserSet::FromIds({0, 1, 2, 3, 5, 6});
  const UserSet s2 = UserSet::FromIds({0, 1, 5, 6, 7, 8});
  const std::vector<Broadcast> msgs = Flatten(SynthesizePairMessages(s1, s2, d, c));
  for (int k : {0, 1}) {
    const Cache cache(c, k);
    EXPECT_TRUE(UserCanDecode(cache, msgs, {Server::kA, d[k].index, s1.Without(k)}));
    EXPECT_TRUE(UserCanDecode(cache, msgs, {Server::kA, d[k].index, s2.Without(k)}));
  }
  for (int k : (s1 | s2).ids()) {
    const Cache cache(c, k);
    for (UserSet s : {s1, s2}) {
      if (s.contains(k)) {
        EXPECT_TRUE(UserCanDecode(cache, msgs,
                                  {d[k].server, d[k].index, s.Without(k)}))
            << "user " << k;
      }
    }
  }
}

TEST(PairMessagesTest, EveryEffectivePairDecodesProperty) {
  std::mt19937_64 rng(21);
  for (int K : {6, 8}) {
    for (int t = 1; t < K; ++t) {
      const SystemConfig c = BuildConfig(K, t, K);
      const Demand d = RandomDemand(c, rng());
      const std::vector<UserSet> all = SubsetsOf(c.all_users(), t + 1);
      for (UserSet s1 : all) {
        for (UserSet s2 : all) {
          if (!IsEffectivePair(s1, s2, c)) continue;
          const PairMessages m = SynthesizePairMessages(s1, s2, d, c);
          ASSERT_TRUE(m.p.payload.IsTwinPaired());
          const std::vector<Broadcast> msgs = Flatten(m);
          for (int k : (s1 | s2).ids()) {
            const Decoder decoder(Cache(c, k), msgs);
            for (UserSet s : {s1, s2}) {
              if (!s.contains(k)) continue;
              ASSERT_TRUE(decoder.CanDecode({d[k].server, d[k].index, s.Without(k)}))
                  << s1.ToString() << " " << s2.ToString() << " user " << k;
            }
          }
        }
      }
    }
  }
}

TEST(UnpairedTest, ServerPairsReconstructTheMnSignal) {
  const SystemConfig c = BuildConfig(6, 3, 6);
  const Demand d = WorstCaseDemand(c);
  const UserSet s = UserSet::FromIds({0, 1, 3, 4});
  for (ServerPair sp : {ServerPair::kAB, ServerPair::kAP, ServerPair::kBP}) {
    const auto [first, second] = SynthesizeUnpaired(s, sp, d, c);
    EXPECT_EQ(first.payload ^ second.payload, MnSignal(s, d)) << ServerPairName(sp);
    EXPECT_TRUE(RespectsOrigin(first));
    EXPECT_TRUE(RespectsOrigin(second));
    const std::vector<Broadcast> msgs = {first, second};
    for (int k : s.ids()) {
      EXPECT_TRUE(UserCanDecode(Cache(c, k), msgs,
                                {d[k].server, d[k].index, s.Without(k)}));
    }
  }
  const auto [a, b] = SynthesizeUnpaired(s, ServerPair::kAB, d, c);
  EXPECT_EQ(a.origin, Origin::kA);
  EXPECT_EQ(b.origin, Origin::kB);
}

TEST(UnpairedTest, OneSidedSetLeavesOtherServerEmpty) {
  const SystemConfig c = BuildConfig(8, 3, 8);
  const Demand d = WorstCaseDemand(c);
  const auto [a, b] = SynthesizeUnpaired(c.mask_a(), ServerPair::kAB, d, c);
  EXPECT_TRUE(b.payload.empty());
  EXPECT_EQ(a.payload, MnSignal(c.mask_a(), d));
}

TEST(PlanTest, EvenTHasNoUnpaired) {
  const SystemConfig c = BuildConfig(8, 4, 8);
  const DeliveryPlan plan = BuildPlan(c, WorstCaseDemand(c), Scheme::kLap);
  EXPECT_TRUE(plan.unpaired.empty());
  const RateReport r = MeasureRate(plan);
  EXPECT_EQ(r.rate, Rational(2, 5));
  EXPECT_EQ(r.formula_rate, Rational(2, 5));
  EXPECT_EQ(r.slack, 0);
  EXPECT_EQ(r.loads.a, r.pairs + 0);
}

TEST(PlanTest, BaselineAtK6) {
  const SystemConfig c = BuildConfig(6, 3, 6);
  const DeliveryPlan plan = BuildPlan(c, WorstCaseDemand(c), Scheme::kLap);
  EXPECT_TRUE(AuditCoverage(plan).ok());
  EXPECT_EQ(2 * plan.paired.size() + plan.unpaired.size() + plan.singles.size(),
            15u);
  const RateReport r = MeasureRate(plan);
  EXPECT_EQ(r.unpaired, 3u);
  EXPECT_EQ(r.delta_measured, Rational(1, 5));
  EXPECT_EQ(r.formula_rate, Rational(2, 5));
  EXPECT_EQ(r.rate, Rational(2, 5));
  EXPECT_TRUE(AuditPlan(plan).ok());
}

TEST(PlanTest, MnPlanRate) {
  const SystemConfig c = BuildConfig(6, 3, 6);
  const DeliveryPlan plan = BuildPlan(c, WorstCaseDemand(c), Scheme::kMn);
  const RateReport r = MeasureRate(plan);
  EXPECT_EQ(r.loads.single, 15u);
  EXPECT_EQ(r.rate, Rational(3, 4));
  EXPECT_EQ(r.formula_rate, Rational(3, 4));
  EXPECT_TRUE(AuditPlan(plan).ok());
}

TEST(PlanTest, AssembleRejectsCoverageGap) {
  const SystemConfig c = BuildConfig(6, 3, 6);
  const Demand d = WorstCaseDemand(c);
  const GraphSet g = BuildGraphs(c, Scheme::kLap);
  std::vector<Matching> matchings;
  for (const PairGraph& pg : g.graphs) matchings.push_back(MaxMatching(pg, c));
  // Dropping the unmatched sets leaves them served nowhere.
  EXPECT_THROW(AssemblePlan(c, d, Scheme::kLap, 0, matchings, {}, g.singles),
               PlanError);
  std::vector<UserSet> unmatched;
  for (const Matching& m : matchings) {
    unmatched.insert(unmatched.end(), m.unmatched.begin(), m.unmatched.end());
  }
  std::vector<UserSet> doubled = unmatched;
  doubled.push_back(unmatched.front());
  EXPECT_THROW(AssemblePlan(c, d, Scheme::kLap, 0, matchings, doubled, g.singles),
               PlanError);
  EXPECT_NO_THROW(
      AssemblePlan(c, d, Scheme::kLap, 0, matchings, unmatched, g.singles));
}

// Loads contributed by unpaired assignments alone.
std::array<std::uint64_t, 3> UnpairedLoads(const DeliveryPlan& plan) {
  std::array<std::uint64_t, 3> load{};
  for (const UnpairedAssignment& u : plan.unpaired) {
    switch (u.servers) {
      case ServerPair::kAB: ++load[0]; ++load[1]; break;
      case ServerPair::kAP: ++load[0]; ++load[2]; break;
      case ServerPair::kBP: ++load[1]; ++load[2]; break;
    }
  }
  return load;
}

TEST(PlanTest, BalancerSplitsUnpairedEvenlyWithoutSingles) {
  for (auto [K, t] : {std::pair{6, 3}, std::pair{10, 5}, std::pair{12, 5},
                      std::pair{14, 7}, std::pair{12, 7}}) {
    for (Scheme s : {Scheme::kLap, Scheme::kImproved}) {
      const SystemConfig c = BuildConfig(K, t, K);
      const DeliveryPlan plan = BuildPlan(c, WorstCaseDemand(c), s);
      if (!plan.singles.empty()) continue;
      const auto load = UnpairedLoads(plan);
      const std::uint64_t n = plan.unpaired.size();
      const auto [lo, hi] = std::minmax({load[0], load[1], load[2]});
      EXPECT_LE(hi - lo, 1u) << K << " " << t;
      EXPECT_LE(hi, (2 * n + 2) / 3) << K << " " << t;
    }
  }
}

TEST(PlanTest, EndToEndAuditsProperty) {
  std::mt19937_64 rng(99);
  for (int K : {4, 6, 8, 10}) {
    for (int t = 1; t < K; ++t) {
      const SystemConfig c = BuildConfig(K, t, K);
      for (Scheme s : {Scheme::kLap, Scheme::kImproved, Scheme::kAuto}) {
        const Demand d = RandomDemand(c, rng());
        const DeliveryPlan plan = BuildPlan(c, d, s);
        const PlanAudit audit = AuditPlan(plan);
        ASSERT_TRUE(audit.ok()) << "K=" << K << " t=" << t << " "
                                << SchemeName(s) << ": " << audit.FirstFailure();
        const RateReport r = MeasureRate(plan);
        ASSERT_EQ(r.pairs + r.unpaired + r.singles + r.pairs,
                  Binomial(K, t + 1));
        ASSERT_EQ(r.delta_measured, r.delta_formula) << K << " " << t;
        // Integer loads round 2n/3 up by less than one transmission.
        ASSERT_LT(r.slack, Rational(1, r.packets_per_file));
        if (plan.singles.empty()) {
          ASSERT_GE(r.slack, 0);
        } else {
          ASSERT_GE(r.slack, -Rational(plan.singles.size(), r.packets_per_file));
        }
      }
    }
  }
}

TEST(PlanTest, EvenTExactHalvingProperty) {
  for (auto [K, t] : {std::pair{8, 4}, std::pair{12, 6}, std::pair{10, 6},
                      std::pair{12, 8}}) {
    const SystemConfig c = BuildConfig(K, t, K);
    const RateReport r =
        MeasureRate(BuildPlan(c, WorstCaseDemand(c), Scheme::kLap));
    EXPECT_EQ(r.rate, MnRate(K, t) / 2) << K << " " << t;
  }
}

TEST(PlanTest, SinglesGoToTheirOwnServer) {
  const SystemConfig c = BuildConfig(10, 3, 10);
  const DeliveryPlan plan = BuildPlan(c, WorstCaseDemand(c), Scheme::kLap);
  ASSERT_EQ(plan.singles.size(), 10u);
  for (const SingleBroadcast& s : plan.singles) {
    const Server side = s.s.IsSubsetOf(c.mask_a()) ? Server::kA : Server::kB;
    EXPECT_EQ(s.server, side);
    EXPECT_EQ(s.message.payload, MnSignal(s.s, plan.demand));
  }
  EXPECT_TRUE(AuditOrigins(plan).empty());
}

TEST(AuditTest, DetectsTampering) {
  const SystemConfig c = BuildConfig(6, 3, 6);
  const DeliveryPlan good = BuildPlan(c, WorstCaseDemand(c), Scheme::kLap);
  ASSERT_TRUE(AuditPlan(good).ok());

  DeliveryPlan missing = good;
  const PairTriple dropped = missing.paired.front();
  missing.paired.erase(missing.paired.begin());
  const PlanAudit a1 = AuditPlan(missing);
  EXPECT_EQ(a1.FirstFailure(), "coverage");
  EXPECT_EQ(a1.coverage.orphaned,
            (std::vector<UserSet>{std::min(dropped.s1, dropped.s2),
                                  std::max(dropped.s1, dropped.s2)}));

  DeliveryPlan forged = good;
  std::vector<PacketId> terms = forged.paired.front().p.payload.terms();
  ASSERT_FALSE(terms.empty());
  terms.pop_back();
  forged.paired.front().p.payload = GF2Combination::FromTerms(terms);
  EXPECT_EQ(AuditPlan(forged).FirstFailure(), "origin-consistency");

  DeliveryPlan wrong = good;
  wrong.paired.front().a.payload ^=
      GF2Combination::FromTerms({{Server::kA, 1, UserSet::FromIds({0, 1, 2})}});
  const PlanAudit a3 = AuditPlan(wrong);
  EXPECT_TRUE(a3.coverage.ok());
  EXPECT_TRUE(a3.origin_violations.empty());
  EXPECT_EQ(a3.FirstFailure(), "decodability");
}

TEST(ServerPairTest, NamesRoundTrip) {
  for (ServerPair p : {ServerPair::kAB, ServerPair::kAP, ServerPair::kBP}) {
    EXPECT_EQ(ParseServerPair(ServerPairName(p)), p);
  }
  EXPECT_THROW(ParseServerPair("AA"), ConfigError);
}

}  // namespace
}  // namespace mscc
