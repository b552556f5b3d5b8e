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

// Layers of (t+1)-subsets, their class partitions, effective-pair bipartite
// graphs and maximum matchings on them.
//
// Vocabulary:
//   layer w      all (t+1)-subsets S with |S ∩ users_a| = w
//   a_1, b_1     first entry of users_a / users_b
//   effective pair (S1, S2): S1 != S2, S1 \ S2 ⊆ users_a, S2 \ S1 ⊆ users_b.
//                S1 is the member with more A-users.
//
// For odd t the three middle layers lo = (t-1)/2, mid = (t+1)/2 and
// hi = (t+3)/2 are where pairing is imperfect. The baseline layout pairs
// lo ∪ hi against mid; the improved layouts split every middle layer into
// four classes by a_1 / b_1 membership and pair classes against each other,
// choosing one of three layouts by lambda = t/K.

#ifndef MSCC_PAIR_ENGINE_H_
#define MSCC_PAIR_ENGINE_H_

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mscc/combinatorics.h"
#include "mscc/scheme.h"
#include "mscc/system_model.h"

namespace mscc {

// ---------------------------------------------------------------------------
// Class descriptors shared with the closed-form analysis.

enum class Membership : std::uint8_t { kAny, kIn, kOut };

// A class of a layer selected by whether a_1 and b_1 are members.
struct ClassRef {
  int w = 0;
  Membership a1 = Membership::kAny;
  Membership b1 = Membership::kAny;

  bool Matches(UserSet s, const SystemConfig& config) const;
  // "V3" or "V3;a1,~b1"
  std::string Name() const;
  friend auto operator<=>(const ClassRef&, const ClassRef&) = default;
};

// One bipartite graph described by the classes on each side.
struct GraphSpec {
  std::string name;
  std::vector<ClassRef> x;
  std::vector<ClassRef> y;
};

// How the three middle layers of an odd-t system are paired.
struct RegimeLayout {
  Scheme scheme = Scheme::kLap;
  int regime = 0;  // 0 for the baseline layout, else 1, 2 or 3
  std::vector<GraphSpec> graphs;
  // Classes left out of every graph; all their members stay unpaired.
  std::vector<ClassRef> unpaired;
};

// Regime by lambda: 1 if lambda <= (3 - sqrt5)/2, 2 if lambda <=
// (sqrt5 - 1)/2, else 3. Boundaries belong to the lower regime. Decided in
// exact integer arithmetic.
int SelectRegime(const Rational& lambda);

// Middle-layer layout for odd t. `scheme` is kLap or kImproved; `regime` is
// ignored for kLap.
RegimeLayout MiddleLayout(Scheme scheme, int t, int regime);

// |class| in closed form from the side sizes.
BigInt ClassCardinality(int ka, int kb, int t, const ClassRef& c);

// Unpaired count implied by a layout when every graph saturates its smaller
// side: sum of left-out classes plus sum over graphs of ||X| - |Y||.
BigInt LayoutUnpaired(int ka, int kb, int t, const RegimeLayout& layout);

// ---------------------------------------------------------------------------
// Layers and the generalized (h1, h2) partition.

struct Layer {
  int w = 0;
  std::vector<UserSet> members;  // colex order
};

// Layers 0..t+1. Their union is every (t+1)-subset, each exactly once.
std::vector<Layer> BuildLayers(const SystemConfig& config);

enum class ClassDepth {
  kLeading,  // h ∈ {1, kNotFirst}: the four-way a_1 / b_1 split
  kFull,     // h = 1-based rank of the least-ranked member on that side
};

// (w, h1, h2): a_{h1} is the least-ranked A-user in S and b_{h2} the
// least-ranked B-user.
struct ClassKey {
  static constexpr int kAbsent = 0;     // no user of that side in S
  static constexpr int kNotFirst = -1;  // kLeading only: a_1 (b_1) not in S

  int w = 0;
  int h1 = kAbsent;
  int h2 = kAbsent;

  friend auto operator<=>(const ClassKey&, const ClassKey&) = default;
  std::string Name() const;
};

ClassKey ClassOf(UserSet s, const SystemConfig& config, ClassDepth depth);

std::map<ClassKey, std::vector<UserSet>> PartitionClasses(
    const Layer& layer, const SystemConfig& config, ClassDepth depth);

// Closed-form class size. kFull: C(K_A - h1, w - 1) * C(K_B - h2, t - w)
// with an absent side contributing 1 when that side has no users in S.
// kLeading: the four products in (K_A - 1, K_B - 1).
BigInt ClassSize(int ka, int kb, int t, const ClassKey& key, ClassDepth depth);

// ---------------------------------------------------------------------------
// Effective pairs and degrees.

// Throws std::invalid_argument unless |s1| = |s2| = t + 1.
bool IsEffectivePair(UserSet s1, UserSet s2, const SystemConfig& config);

// Every (t+1)-subset in layer `target_w` forming an effective pair with `s`
// (in either orientation), generated by swapping |w(s) - target_w| A-users
// for as many B-users. Colex order.
std::vector<UserSet> EffectiveNeighbors(UserSet s, int target_w,
                                        const SystemConfig& config);

// Number of members of `opposing` that form an effective pair with `s`.
int VertexDegree(UserSet s, const std::vector<UserSet>& opposing,
                 const SystemConfig& config);

// Members of one class, colex order.
std::vector<UserSet> ClassMembers(const SystemConfig& config,
                                  const ClassRef& c);

// ---------------------------------------------------------------------------
// Graphs and matchings.

struct PairGraph {
  std::string name;
  std::vector<UserSet> x;  // colex order
  std::vector<UserSet> y;  // colex order
};

struct GraphSet {
  Scheme scheme = Scheme::kLap;  // resolved, never kAuto or kMn
  int regime = 0;
  std::vector<PairGraph> graphs;
  // Middle-layer members the layout never offers for pairing.
  std::vector<UserSet> fixed_unpaired;
  // Layers 0 and t+1 when they are not part of a graph: each is served by
  // its own data server alone.
  std::vector<UserSet> singles;
};

// kAuto -> kLap or kImproved, whichever layout leaves fewer unpaired
// messages (ties and even t -> kLap). kLap / kImproved pass through.
// Throws std::invalid_argument for kMn.
Scheme ResolveScheme(const SystemConfig& config, Scheme scheme);

// For even t: G_w = (V_w, V_{t+1-w}) for 1 <= w < t+1-w. For odd t: the
// same outer graphs for w < (t-1)/2 plus the middle layout of the scheme.
// Throws ConfigError on an asymmetric config.
GraphSet BuildGraphs(const SystemConfig& config, Scheme scheme);

struct Matching {
  // (S1, S2) with S1 the member holding more A-users.
  std::vector<std::pair<UserSet, UserSet>> pairs;
  std::vector<UserSet> unmatched;
  // Both sides regular (each side's vertices share one degree).
  bool biregular = false;
  int degree_x = 0;  // meaningful when biregular
  int degree_y = 0;
};

// Maximum matching by Hopcroft-Karp. Deterministic: vertices and adjacency
// are scanned in colex order. When the graph is biregular with positive
// degrees, the smaller side (the one of larger degree) is saturated; a
// violation throws std::logic_error.
Matching MaxMatching(const PairGraph& graph, const SystemConfig& config);

struct UnpairedCount {
  std::uint64_t n = 0;      // graph vertices left unmatched plus fixed ones
  std::uint64_t pairs = 0;  // matched pairs over all graphs
  Rational delta;           // n / C(K, t+1)
};

// Builds the scheme's graphs, matches each and counts what stays unpaired.
UnpairedCount CountUnpaired(const SystemConfig& config, Scheme scheme);

}  // namespace mscc

#endif  // MSCC_PAIR_ENGINE_H_
