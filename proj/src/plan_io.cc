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


#include "mscc/plan_io.h"

#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>

namespace mscc {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Lists in reports are truncated to this many entries; counts stay exact.
constexpr std::size_t kMaxListed = 50;

ordered_json SetToJson(UserSet s) { return s.ids(); }

ordered_json PayloadToJson(const GF2Combination& c) {
  ordered_json out = ordered_json::array();
  for (const PacketId& p : c.terms()) {
    out.push_back(ordered_json::array(
        {std::string(1, ServerChar(p.server)), p.file, SetToJson(p.subset)}));
  }
  return out;
}

ordered_json BroadcastLine(const Broadcast& b, const char* kind,
                           std::size_t group) {
  ordered_json line;
  line["type"] = "broadcast";
  line["kind"] = kind;
  line["group"] = group;
  line["origin"] = OriginName(b.origin);
  ordered_json sets = ordered_json::array();
  for (UserSet s : b.index_sets) sets.push_back(SetToJson(s));
  line["index_sets"] = std::move(sets);
  line["payload"] = PayloadToJson(b.payload);
  return line;
}

template <typename T>
T Field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw FormatError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad field '") + key + "': " + e.what());
  }
}

UserSet SetFromJson(const json& j, int K) {
  if (!j.is_array()) throw FormatError("user set must be an array");
  UserSet s;
  for (const json& v : j) {
    if (!v.is_number_integer()) throw FormatError("user id must be an integer");
    const int id = v.get<int>();
    if (id < 0 || id >= K) {
      throw FormatError("user id " + std::to_string(id) + " outside [0, K)");
    }
    if (s.contains(id)) throw FormatError("repeated user id in a set");
    s = s.With(id);
  }
  return s;
}

GF2Combination PayloadFromJson(const json& j, const SystemConfig& config) {
  if (!j.is_array()) throw FormatError("payload must be an array");
  std::vector<PacketId> terms;
  for (const json& term : j) {
    if (!term.is_array() || term.size() != 3 || !term[0].is_string() ||
        !term[1].is_number_integer()) {
      throw FormatError("payload term must be [server, file, subset]");
    }
    PacketId p;
    try {
      p.server = ParseServer(term[0].get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
    p.file = term[1].get<int>();
    if (p.file < 1 || p.file > config.FilesPerServer()) {
      throw FormatError("file index " + std::to_string(p.file) +
                        " outside [1, N/2]");
    }
    p.subset = SetFromJson(term[2], config.K());
    if (p.subset.size() != config.t()) {
      throw FormatError("packet subset " + p.subset.ToString() +
                        " does not have t members");
    }
    terms.push_back(p);
  }
  return GF2Combination::FromTerms(std::move(terms));
}

Broadcast BroadcastFromJson(const json& line, const SystemConfig& config) {
  Broadcast b;
  try {
    b.origin = ParseOrigin(Field<std::string>(line, "origin"));
  } catch (const FormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  const json sets = Field<json>(line, "index_sets");
  if (!sets.is_array()) throw FormatError("index_sets must be an array");
  for (const json& s : sets) b.index_sets.push_back(SetFromJson(s, config.K()));
  b.payload = PayloadFromJson(Field<json>(line, "payload"), config);
  return b;
}

ordered_json RationalJson(const Rational& r) { return ToString(r); }

ordered_json SetList(const std::vector<UserSet>& sets) {
  ordered_json out = ordered_json::array();
  for (std::size_t i = 0; i < sets.size() && i < kMaxListed; ++i) {
    out.push_back(sets[i].ToString());
  }
  return out;
}

}  // namespace

ordered_json DemandToJson(const Demand& demand) {
  ordered_json out = ordered_json::array();
  for (const FileRef& f : demand.files()) {
    out.push_back(ordered_json::array(
        {std::string(1, ServerChar(f.server)), f.index}));
  }
  return out;
}

Demand DemandFromJson(const json& j) {
  if (!j.is_array()) throw FormatError("demand must be an array");
  std::vector<FileRef> files;
  for (const json& f : j) {
    if (!f.is_array() || f.size() != 2 || !f[0].is_string() ||
        !f[1].is_number_integer()) {
      throw FormatError("demand entry must be [server, file]");
    }
    try {
      files.push_back({ParseServer(f[0].get<std::string>()), f[1].get<int>()});
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what());
    }
  }
  return Demand(std::move(files));
}

void WritePlan(std::ostream& out, const DeliveryPlan& plan) {
  const SystemConfig& c = plan.config;
  ordered_json header;
  header["type"] = "header";
  header["K"] = c.K();
  header["M"] = c.M();
  header["N"] = c.N();
  header["users_a"] = c.users_a();
  header["users_b"] = c.users_b();
  header["demand"] = DemandToJson(plan.demand);
  header["scheme"] = SchemeName(plan.scheme);
  header["regime"] = plan.regime;
  header["unmatched"] = plan.unmatched;
  out << header.dump() << '\n';

  std::size_t group = 0;
  for (const Broadcast& b : plan.mn) {
    out << BroadcastLine(b, "mn", group++).dump() << '\n';
  }
  for (const PairTriple& tr : plan.paired) {
    for (const Broadcast* b : {&tr.a, &tr.b, &tr.p}) {
      out << BroadcastLine(*b, "pair", group).dump() << '\n';
    }
    ++group;
  }
  for (const UnpairedAssignment& u : plan.unpaired) {
    for (const Broadcast* b : {&u.first, &u.second}) {
      ordered_json line = BroadcastLine(*b, "unpaired", group);
      line["servers"] = ServerPairName(u.servers);
      out << line.dump() << '\n';
    }
    ++group;
  }
  for (const SingleBroadcast& s : plan.singles) {
    out << BroadcastLine(s.message, "single", group++).dump() << '\n';
  }
}

DeliveryPlan ReadPlan(std::istream& in) {
  std::string text;
  int line_no = 0;
  auto next_line = [&](json& j) {
    while (std::getline(in, text)) {
      ++line_no;
      if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        j = json::parse(text);
      } catch (const json::parse_error& e) {
        throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
      }
      if (!j.is_object()) {
        throw FormatError("line " + std::to_string(line_no) +
                          ": expected an object");
      }
      return true;
    }
    return false;
  };

  json header;
  if (!next_line(header) || Field<std::string>(header, "type") != "header") {
    throw FormatError("plan must start with a header line");
  }
  const SystemConfig config = BuildConfig(
      Field<int>(header, "K"), Field<int>(header, "M"), Field<int>(header, "N"),
      UserPartition{Field<std::vector<int>>(header, "users_a"),
                    Field<std::vector<int>>(header, "users_b")});
  const Demand demand = DemandFromJson(Field<json>(header, "demand"));
  ValidateDemand(config, demand);
  DeliveryPlan plan;
  plan.config = config;
  plan.demand = demand;
  try {
    plan.scheme = ParseScheme(Field<std::string>(header, "scheme"));
  } catch (const FormatError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  plan.regime = Field<int>(header, "regime");
  plan.unmatched = Field<std::uint64_t>(header, "unmatched");

  struct PairSlots {
    std::vector<UserSet> sets;
    std::optional<Broadcast> slot[3];
  };
  std::map<std::size_t, PairSlots> pairs;
  std::map<std::size_t, std::vector<std::pair<ServerPair, Broadcast>>> unpaired;

  json line;
  while (next_line(line)) {
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (Field<std::string>(line, "type") != "broadcast") {
      throw FormatError(where + "expected a broadcast");
    }
    const std::string kind = Field<std::string>(line, "kind");
    const std::size_t group = Field<std::size_t>(line, "group");
    Broadcast b = BroadcastFromJson(line, config);
    if (kind == "mn") {
      plan.mn.push_back(std::move(b));
    } else if (kind == "pair") {
      PairSlots& slots = pairs[group];
      if (slots.sets.empty()) slots.sets = b.index_sets;
      int want = b.origin == Origin::kA   ? 0
                 : b.origin == Origin::kB ? 1
                 : b.origin == Origin::kP ? 2
                                          : -1;
      if (want < 0 || slots.slot[want]) {
        want = -1;
        for (int i = 0; i < 3 && want < 0; ++i) {
          if (!slots.slot[i]) want = i;
        }
      }
      if (want < 0) throw FormatError(where + "pair group with over 3 messages");
      slots.slot[want] = std::move(b);
    } else if (kind == "unpaired") {
      ServerPair servers;
      try {
        servers = ParseServerPair(Field<std::string>(line, "servers"));
      } catch (const FormatError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw FormatError(where + e.what());
      }
      auto& members = unpaired[group];
      if (members.size() == 2) {
        throw FormatError(where + "unpaired group with over 2 messages");
      }
      members.emplace_back(servers, std::move(b));
    } else if (kind == "single") {
      SingleBroadcast s;
      s.s = b.index_sets.empty() ? UserSet() : b.index_sets.front();
      s.server = b.origin == Origin::kB ? Server::kB : Server::kA;
      s.message = std::move(b);
      plan.singles.push_back(std::move(s));
    } else {
      throw FormatError(where + "unknown broadcast kind '" + kind + "'");
    }
  }

  for (auto& [group, slots] : pairs) {
    PairTriple tr;
    tr.s1 = slots.sets.size() > 0 ? slots.sets[0] : UserSet();
    tr.s2 = slots.sets.size() > 1 ? slots.sets[1] : UserSet();
    if (slots.slot[0]) tr.a = std::move(*slots.slot[0]);
    if (slots.slot[1]) tr.b = std::move(*slots.slot[1]);
    if (slots.slot[2]) tr.p = std::move(*slots.slot[2]);
    plan.paired.push_back(std::move(tr));
  }
  for (auto& [group, members] : unpaired) {
    UnpairedAssignment u;
    u.servers = members.front().first;
    u.first = std::move(members.front().second);
    u.s = u.first.index_sets.empty() ? UserSet() : u.first.index_sets.front();
    if (members.size() > 1) u.second = std::move(members.back().second);
    plan.unpaired.push_back(std::move(u));
  }
  return plan;
}

ordered_json ReportJson(const RunSummary& run) {
  const SystemConfig& c = *run.config;
  const RateReport& r = *run.rate;
  ordered_json j;
  j["K"] = c.K();
  j["N"] = c.N();
  j["M"] = c.M();
  j["t"] = c.t();
  j["lambda"] = RationalJson(c.lambda());
  j["scheme"] = SchemeName(run.requested);
  j["scheme_used"] = SchemeName(run.plan->scheme);
  j["regime"] = run.plan->regime;
  j["loads"] = {{"A", r.loads.a}, {"B", r.loads.b}, {"P", r.loads.p},
                {"S", r.loads.single}};
  j["F"] = r.packets_per_file;
  j["R"] = RationalJson(r.rate);
  j["R_float"] = ToDouble(r.rate);
  j["R_formula"] = RationalJson(r.formula_rate);
  j["R_formula_float"] = ToDouble(r.formula_rate);
  j["slack"] = RationalJson(r.slack);
  j["delta_measured"] = RationalJson(r.delta_measured);
  j["delta_formula"] = RationalJson(r.delta_formula);
  j["verified"] = run.audit->ok();
  j["unpaired"] = r.unpaired;
  j["pairs"] = r.pairs;
  j["singles"] = r.singles;

  const PlanAudit& a = *run.audit;
  ordered_json failures;
  failures["first"] = a.FirstFailure();
  failures["coverage"] = {
      {"orphaned_count", a.coverage.orphaned.size()},
      {"orphaned", SetList(a.coverage.orphaned)},
      {"duplicated_count", a.coverage.duplicated.size()},
      {"duplicated", SetList(a.coverage.duplicated)},
      {"malformed_count", a.coverage.malformed.size()},
      {"malformed", SetList(a.coverage.malformed)}};
  ordered_json origin = ordered_json::array();
  for (std::size_t i = 0; i < a.origin_violations.size() && i < kMaxListed; ++i) {
    origin.push_back(a.origin_violations[i]);
  }
  failures["origin_count"] = a.origin_violations.size();
  failures["origin"] = std::move(origin);
  ordered_json decode = ordered_json::array();
  for (const UserRecovery& u : a.recovery.users) {
    if (u.ok) continue;
    ordered_json entry;
    entry["user"] = u.user;
    entry["missing"] = u.missing;
    entry["first_failure"] =
        u.first_failure ? u.first_failure->ToString() : std::string();
    decode.push_back(std::move(entry));
  }
  failures["decodability"] = std::move(decode);
  j["failures"] = std::move(failures);
  return j;
}

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void WriteCurvesCsv(std::ostream& out, const CurveTable& table) {
  auto head = [&](const char* name) {
    out << name << ',' << name << "_num," << name << "_den";
  };
  head("lambda");
  out << ",K,t,regime,n_exact,ni_exact,";
  head("ni_over_n");
  out << ',';
  head("asymptote");
  out << ',';
  head("delta");
  out << ',';
  head("delta_prime");
  out << ',';
  head("delta_ratio");
  out << '\n';

  auto cell = [&](const std::optional<Rational>& r) {
    if (!r) {
      out << ",,";
      return;
    }
    out << FormatDouble(ToDouble(*r)) << ','
        << boost::multiprecision::numerator(*r) << ','
        << boost::multiprecision::denominator(*r);
  };
  for (const CurveRow& row : table.rows) {
    cell(row.lambda);
    out << ',' << row.K << ',' << row.t << ',' << row.regime << ','
        << row.n_exact << ',' << row.ni_exact << ',';
    cell(row.ni_over_n);
    out << ',';
    cell(row.asymptote);
    out << ',';
    cell(row.delta);
    out << ',';
    cell(row.delta_prime);
    out << ',';
    cell(row.delta_ratio);
    out << '\n';
  }
}

}  // namespace mscc
