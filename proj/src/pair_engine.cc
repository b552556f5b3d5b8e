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

#include "mscc/pair_engine.h"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace mscc {

namespace {

constexpr Membership kIn = Membership::kIn;
constexpr Membership kOut = Membership::kOut;
constexpr Membership kAny = Membership::kAny;

int CountA(UserSet s, const SystemConfig& config) {
  return (s & config.mask_a()).size();
}

bool MembershipHolds(Membership m, bool present) {
  switch (m) {
    case Membership::kAny:
      return true;
    case Membership::kIn:
      return present;
    case Membership::kOut:
      return !present;
  }
  return false;
}

}  // namespace

// ---------------------------------------------------------------------------

bool ClassRef::Matches(UserSet s, const SystemConfig& config) const {
  return CountA(s, config) == w &&
         MembershipHolds(a1, s.contains(config.users_a().front())) &&
         MembershipHolds(b1, s.contains(config.users_b().front()));
}

std::string ClassRef::Name() const {
  std::string out = "V" + std::to_string(w);
  if (a1 == kAny && b1 == kAny) return out;
  out += ';';
  if (a1 != kAny) out += a1 == kIn ? "a1" : "~a1";
  if (a1 != kAny && b1 != kAny) out += ',';
  if (b1 != kAny) out += b1 == kIn ? "b1" : "~b1";
  return out;
}

int SelectRegime(const Rational& lambda) {
  const BigInt p = boost::multiprecision::numerator(lambda);
  const BigInt q = boost::multiprecision::denominator(lambda);
  // lambda <= (3 - sqrt5)/2  <=>  lambda^2 - 3 lambda + 1 >= 0 on (0, 1).
  if (p * p - 3 * p * q + q * q >= 0) return 1;
  // lambda <= (sqrt5 - 1)/2  <=>  lambda^2 + lambda - 1 <= 0 on (0, 1).
  if (p * p + p * q - q * q <= 0) return 2;
  return 3;
}

RegimeLayout MiddleLayout(Scheme scheme, int t, int regime) {
  if (t % 2 == 0) throw std::invalid_argument("middle layout needs odd t");
  const int lo = (t - 1) / 2;
  const int mid = (t + 1) / 2;
  const int hi = (t + 3) / 2;
  auto c = [](int w, Membership a, Membership b) { return ClassRef{w, a, b}; };

  RegimeLayout layout;
  layout.scheme = scheme;
  if (scheme == Scheme::kLap) {
    layout.regime = 0;
    layout.graphs = {{"G", {c(lo, kAny, kAny), c(hi, kAny, kAny)},
                      {c(mid, kAny, kAny)}}};
    return layout;
  }
  if (scheme != Scheme::kImproved) {
    throw std::invalid_argument("middle layout needs the lap or improved scheme");
  }
  layout.regime = regime;
  switch (regime) {
    case 1:
      layout.graphs = {
          {"G1", {c(mid, kOut, kOut)}, {c(lo, kOut, kIn), c(hi, kIn, kOut)}},
          {"G2", {c(mid, kOut, kIn)}, {c(hi, kOut, kIn)}},
          {"G3", {c(mid, kIn, kOut)}, {c(lo, kIn, kOut)}},
          {"G4", {c(lo, kOut, kOut)}, {c(hi, kOut, kOut)}},
          {"G5", {c(lo, kIn, kIn)}, {c(hi, kIn, kIn)}},
      };
      layout.unpaired = {c(mid, kIn, kIn)};
      break;
    case 2:
      layout.graphs = {
          {"G1", {c(mid, kIn, kIn)}, {c(lo, kOut, kIn)}},
          {"G2", {c(mid, kIn, kOut)}, {c(lo, kIn, kOut)}},
          {"G3", {c(mid, kOut, kIn)}, {c(hi, kOut, kIn)}},
          {"G4", {c(mid, kOut, kOut)}, {c(hi, kIn, kOut)}},
          {"G5", {c(lo, kIn, kIn)}, {c(hi, kIn, kIn)}},
          {"G6", {c(lo, kOut, kOut)}, {c(hi, kOut, kOut)}},
      };
      break;
    case 3:
      layout.graphs = {
          {"G1", {c(mid, kIn, kIn)}, {c(lo, kOut, kIn), c(hi, kIn, kOut)}},
          {"G2", {c(mid, kIn, kOut)}, {c(lo, kIn, kOut)}},
          {"G3", {c(mid, kOut, kIn)}, {c(hi, kOut, kIn)}},
          {"G4", {c(lo, kOut, kOut)}, {c(hi, kOut, kOut)}},
          {"G5", {c(lo, kIn, kIn)}, {c(hi, kIn, kIn)}},
      };
      layout.unpaired = {c(mid, kOut, kOut)};
      break;
    default:
      throw std::invalid_argument("regime must be 1, 2 or 3");
  }
  return layout;
}

BigInt ClassCardinality(int ka, int kb, int t, const ClassRef& c) {
  const int wb = t + 1 - c.w;
  BigInt a;
  switch (c.a1) {
    case Membership::kAny: a = BigBinomial(ka, c.w); break;
    case Membership::kIn: a = BigBinomial(ka - 1, c.w - 1); break;
    case Membership::kOut: a = BigBinomial(ka - 1, c.w); break;
  }
  BigInt b;
  switch (c.b1) {
    case Membership::kAny: b = BigBinomial(kb, wb); break;
    case Membership::kIn: b = BigBinomial(kb - 1, wb - 1); break;
    case Membership::kOut: b = BigBinomial(kb - 1, wb); break;
  }
  return a * b;
}

BigInt LayoutUnpaired(int ka, int kb, int t, const RegimeLayout& layout) {
  BigInt n = 0;
  for (const ClassRef& c : layout.unpaired) n += ClassCardinality(ka, kb, t, c);
  for (const GraphSpec& g : layout.graphs) {
    BigInt x = 0;
    BigInt y = 0;
    for (const ClassRef& c : g.x) x += ClassCardinality(ka, kb, t, c);
    for (const ClassRef& c : g.y) y += ClassCardinality(ka, kb, t, c);
    n += x > y ? x - y : y - x;
  }
  return n;
}

// ---------------------------------------------------------------------------

std::vector<Layer> BuildLayers(const SystemConfig& config) {
  const int t = config.t();
  std::vector<Layer> layers(t + 2);
  for (int w = 0; w <= t + 1; ++w) layers[w].w = w;
  ForEachSubset(config.K(), t + 1, [&](UserSet s) {
    layers[CountA(s, config)].members.push_back(s);
  });
  return layers;
}

std::string ClassKey::Name() const {
  auto h = [](int v) {
    if (v == kAbsent) return std::string("-");
    if (v == kNotFirst) return std::string(">1");
    return std::to_string(v);
  };
  return "V" + std::to_string(w) + ";h1=" + h(h1) + ",h2=" + h(h2);
}

ClassKey ClassOf(UserSet s, const SystemConfig& config, ClassDepth depth) {
  ClassKey key;
  key.w = CountA(s, config);
  if (depth == ClassDepth::kLeading) {
    key.h1 = s.contains(config.users_a().front()) ? 1 : ClassKey::kNotFirst;
    key.h2 = s.contains(config.users_b().front()) ? 1 : ClassKey::kNotFirst;
    return key;
  }
  int h1 = std::numeric_limits<int>::max();
  int h2 = std::numeric_limits<int>::max();
  s.ForEach([&](int u) {
    const int r = config.RankInSide(u);
    if (config.SideOf(u) == Server::kA) {
      h1 = std::min(h1, r);
    } else {
      h2 = std::min(h2, r);
    }
  });
  key.h1 = h1 == std::numeric_limits<int>::max() ? ClassKey::kAbsent : h1;
  key.h2 = h2 == std::numeric_limits<int>::max() ? ClassKey::kAbsent : h2;
  return key;
}

std::map<ClassKey, std::vector<UserSet>> PartitionClasses(
    const Layer& layer, const SystemConfig& config, ClassDepth depth) {
  std::map<ClassKey, std::vector<UserSet>> classes;
  for (UserSet s : layer.members) {
    classes[ClassOf(s, config, depth)].push_back(s);
  }
  return classes;
}

BigInt ClassSize(int ka, int kb, int t, const ClassKey& key, ClassDepth depth) {
  const int w = key.w;
  const int wb = t + 1 - w;
  if (depth == ClassDepth::kLeading) {
    const BigInt a = key.h1 == 1 ? BigBinomial(ka - 1, w - 1)
                                 : BigBinomial(ka - 1, w);
    const BigInt b = key.h2 == 1 ? BigBinomial(kb - 1, wb - 1)
                                 : BigBinomial(kb - 1, wb);
    return a * b;
  }
  const BigInt a = key.h1 == ClassKey::kAbsent
                       ? BigInt(w == 0 ? 1 : 0)
                       : BigBinomial(ka - key.h1, w - 1);
  const BigInt b = key.h2 == ClassKey::kAbsent
                       ? BigInt(wb == 0 ? 1 : 0)
                       : BigBinomial(kb - key.h2, wb - 1);
  return a * b;
}

// ---------------------------------------------------------------------------

bool IsEffectivePair(UserSet s1, UserSet s2, const SystemConfig& config) {
  const int size = config.t() + 1;
  if (s1.size() != size || s2.size() != size) {
    throw std::invalid_argument("effective pair operands must have t+1 = " +
                                std::to_string(size) + " users");
  }
  if (s1 == s2) return false;
  return (s1 - s2).IsSubsetOf(config.mask_a()) &&
         (s2 - s1).IsSubsetOf(config.mask_b());
}

std::vector<UserSet> EffectiveNeighbors(UserSet s, int target_w,
                                        const SystemConfig& config) {
  const int w = CountA(s, config);
  std::vector<UserSet> out;
  if (w == target_w) return out;
  const int d = w > target_w ? w - target_w : target_w - w;
  // Moving toward fewer A-users: drop d A-members, add d outside B-users.
  // Toward more: drop d B-members, add d outside A-users.
  const Server drop_side = w > target_w ? Server::kA : Server::kB;
  const UserSet drop_pool =
      s & (drop_side == Server::kA ? config.mask_a() : config.mask_b());
  const UserSet add_pool =
      (drop_side == Server::kA ? config.mask_b() : config.mask_a()) - s;
  const std::vector<UserSet> drops = SubsetsOf(drop_pool, d);
  const std::vector<UserSet> adds = SubsetsOf(add_pool, d);
  out.reserve(drops.size() * adds.size());
  for (UserSet drop : drops) {
    for (UserSet add : adds) out.push_back((s - drop) | add);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int VertexDegree(UserSet s, const std::vector<UserSet>& opposing,
                 const SystemConfig& config) {
  int degree = 0;
  for (UserSet o : opposing) {
    if (IsEffectivePair(s, o, config) || IsEffectivePair(o, s, config)) {
      ++degree;
    }
  }
  return degree;
}

std::vector<UserSet> ClassMembers(const SystemConfig& config,
                                  const ClassRef& c) {
  std::vector<UserSet> out;
  const int t = config.t();
  if (c.w < 0 || c.w > t + 1) return out;
  const std::vector<UserSet> a_parts = SubsetsOf(config.mask_a(), c.w);
  const std::vector<UserSet> b_parts = SubsetsOf(config.mask_b(), t + 1 - c.w);
  for (UserSet a : a_parts) {
    for (UserSet b : b_parts) {
      const UserSet s = a | b;
      if (c.Matches(s, config)) out.push_back(s);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

Scheme ResolveScheme(const SystemConfig& config, Scheme scheme) {
  if (scheme == Scheme::kMn) {
    throw std::invalid_argument("the mn scheme has no pairing graphs");
  }
  if (scheme != Scheme::kAuto) return scheme;
  const int t = config.t();
  if (t % 2 == 0) return Scheme::kLap;
  const int ka = config.KA();
  const int kb = config.KB();
  const BigInt lap = LayoutUnpaired(ka, kb, t, MiddleLayout(Scheme::kLap, t, 0));
  const BigInt improved = LayoutUnpaired(
      ka, kb, t,
      MiddleLayout(Scheme::kImproved, t, SelectRegime(config.lambda())));
  return improved < lap ? Scheme::kImproved : Scheme::kLap;
}

namespace {

std::vector<UserSet> CollectSide(const SystemConfig& config,
                                 const std::vector<ClassRef>& classes) {
  std::vector<UserSet> out;
  for (const ClassRef& c : classes) {
    const std::vector<UserSet> m = ClassMembers(config, c);
    out.insert(out.end(), m.begin(), m.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

GraphSet BuildGraphs(const SystemConfig& config, Scheme scheme) {
  if (!config.symmetric()) {
    throw ConfigError("pairing graphs need a symmetric partition (K_A = K_B)");
  }
  GraphSet set;
  set.scheme = ResolveScheme(config, scheme);
  const int t = config.t();
  const std::vector<Layer> layers = BuildLayers(config);

  // Outer layers pair w with t+1-w; for odd t stop below the middle.
  const int outer_end = t % 2 == 0 ? t / 2 : (t - 1) / 2 - 1;
  for (int w = 1; w <= outer_end; ++w) {
    set.graphs.push_back({"G_" + std::to_string(w) + "=(V" +
                              std::to_string(w) + ",V" +
                              std::to_string(t + 1 - w) + ")",
                          layers[w].members, layers[t + 1 - w].members});
  }

  bool middle_has_ends = false;
  if (t % 2 == 1) {
    const RegimeLayout layout =
        MiddleLayout(set.scheme, t,
                     set.scheme == Scheme::kImproved
                         ? SelectRegime(config.lambda())
                         : 0);
    set.regime = layout.regime;
    for (const GraphSpec& g : layout.graphs) {
      set.graphs.push_back(
          {g.name, CollectSide(config, g.x), CollectSide(config, g.y)});
    }
    set.fixed_unpaired = CollectSide(config, layout.unpaired);
    middle_has_ends = (t - 1) / 2 == 0;  // t = 1: layers 0 and 2 are middle
  }
  if (!middle_has_ends) {
    for (int w : {t + 1, 0}) {
      set.singles.insert(set.singles.end(), layers[w].members.begin(),
                         layers[w].members.end());
    }
  }
  return set;
}

// ---------------------------------------------------------------------------

namespace {

// Hopcroft-Karp on adjacency lists over indices.
class HopcroftKarp {
 public:
  HopcroftKarp(const std::vector<std::vector<int>>& adj, int ny)
      : adj_(adj), match_x_(adj.size(), -1), match_y_(ny, -1),
        dist_(adj.size()) {}

  void Run() {
    while (Bfs()) {
      for (std::size_t x = 0; x < adj_.size(); ++x) {
        if (match_x_[x] < 0) Dfs(static_cast<int>(x));
      }
    }
  }

  const std::vector<int>& match_x() const { return match_x_; }
  const std::vector<int>& match_y() const { return match_y_; }

 private:
  static constexpr int kInf = std::numeric_limits<int>::max();

  bool Bfs() {
    std::queue<int> q;
    for (std::size_t x = 0; x < adj_.size(); ++x) {
      if (match_x_[x] < 0) {
        dist_[x] = 0;
        q.push(static_cast<int>(x));
      } else {
        dist_[x] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      const int x = q.front();
      q.pop();
      for (int y : adj_[x]) {
        const int next = match_y_[y];
        if (next < 0) {
          found = true;
        } else if (dist_[next] == kInf) {
          dist_[next] = dist_[x] + 1;
          q.push(next);
        }
      }
    }
    return found;
  }

  bool Dfs(int x) {
    for (int y : adj_[x]) {
      const int next = match_y_[y];
      if (next < 0 || (dist_[next] == dist_[x] + 1 && Dfs(next))) {
        match_x_[x] = y;
        match_y_[y] = x;
        return true;
      }
    }
    dist_[x] = kInf;
    return false;
  }

  const std::vector<std::vector<int>>& adj_;
  std::vector<int> match_x_;
  std::vector<int> match_y_;
  std::vector<int> dist_;
};

}  // namespace

Matching MaxMatching(const PairGraph& graph, const SystemConfig& config) {
  Matching result;
  std::unordered_map<UserSet, int, UserSetHash> y_index;
  y_index.reserve(graph.y.size());
  std::set<int> y_layers;
  for (std::size_t i = 0; i < graph.y.size(); ++i) {
    y_index.emplace(graph.y[i], static_cast<int>(i));
    y_layers.insert(CountA(graph.y[i], config));
  }

  std::vector<std::vector<int>> adj(graph.x.size());
  std::vector<int> degree_y(graph.y.size(), 0);
  for (std::size_t i = 0; i < graph.x.size(); ++i) {
    for (int w : y_layers) {
      for (UserSet n : EffectiveNeighbors(graph.x[i], w, config)) {
        const auto it = y_index.find(n);
        if (it != y_index.end()) adj[i].push_back(it->second);
      }
    }
    std::sort(adj[i].begin(), adj[i].end());
    for (int y : adj[i]) ++degree_y[y];
  }

  HopcroftKarp hk(adj, static_cast<int>(graph.y.size()));
  hk.Run();

  for (std::size_t i = 0; i < graph.x.size(); ++i) {
    const int y = hk.match_x()[i];
    if (y < 0) {
      result.unmatched.push_back(graph.x[i]);
      continue;
    }
    UserSet s1 = graph.x[i];
    UserSet s2 = graph.y[y];
    if (CountA(s1, config) < CountA(s2, config)) std::swap(s1, s2);
    result.pairs.emplace_back(s1, s2);
  }
  for (std::size_t j = 0; j < graph.y.size(); ++j) {
    if (hk.match_y()[j] < 0) result.unmatched.push_back(graph.y[j]);
  }
  std::sort(result.unmatched.begin(), result.unmatched.end());

  // Biregularity and the saturation it guarantees.
  const bool x_regular =
      graph.x.empty() || std::all_of(adj.begin(), adj.end(), [&](const auto& a) {
        return a.size() == adj.front().size();
      });
  const bool y_regular =
      graph.y.empty() ||
      std::all_of(degree_y.begin(), degree_y.end(),
                  [&](int d) { return d == degree_y.front(); });
  result.biregular = x_regular && y_regular;
  if (result.biregular) {
    result.degree_x = graph.x.empty() ? 0 : static_cast<int>(adj.front().size());
    result.degree_y = graph.y.empty() ? 0 : degree_y.front();
    if (result.degree_x > 0 && result.degree_y > 0) {
      const std::size_t smaller = std::min(graph.x.size(), graph.y.size());
      if (result.pairs.size() != smaller) {
        throw std::logic_error("biregular graph " + graph.name +
                               " was not saturated on its smaller side");
      }
    }
  }
  return result;
}

UnpairedCount CountUnpaired(const SystemConfig& config, Scheme scheme) {
  const GraphSet set = BuildGraphs(config, scheme);
  UnpairedCount count;
  count.n = set.fixed_unpaired.size();
  for (const PairGraph& g : set.graphs) {
    const Matching m = MaxMatching(g, config);
    count.n += m.unmatched.size();
    count.pairs += m.pairs.size();
  }
  count.delta = Rational(count.n, Binomial(config.K(), config.t() + 1));
  return count;
}

}  // namespace mscc
