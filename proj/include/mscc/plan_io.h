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


// Serialization: line-oriented plan files, the JSON rate report and the
// ratio-curve CSV.
//
// Plan file: the first line is a header object
//   {"type":"header","K":6,"M":3,"N":6,"users_a":[0,1,2],"users_b":[3,4,5],
//    "demand":[["A",1],...],"scheme":"lap","regime":0,"unmatched":3}
// followed by one broadcast per line
//   {"type":"broadcast","kind":"pair","group":0,"origin":"A",
//    "index_sets":[[0,1,2,3],[0,1,3,4]],"payload":[["A",1,[1,2,3]],...]}
// with kind one of pair / unpaired / single / mn. Broadcasts of one triple
// or one unpaired assignment share a group number; unpaired lines carry
// "servers" ("AB", "AP" or "BP"). Payload terms are sorted.

#ifndef MSCC_PLAN_IO_H_
#define MSCC_PLAN_IO_H_

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "mscc/analysis.h"
#include "mscc/delivery.h"

namespace mscc {

// Malformed plan, demand or report input.
class FormatError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

void WritePlan(std::ostream& out, const DeliveryPlan& plan);

// Rebuilds a plan from WritePlan output. Structural problems (bad JSON,
// unknown fields, packets outside the config) throw FormatError; semantic
// ones (missing triples, foreign packets in a P message) are left for the
// audits. A pair group missing a member gets a default broadcast in its
// slot, which the origin audit rejects.
DeliveryPlan ReadPlan(std::istream& in);

nlohmann::ordered_json DemandToJson(const Demand& demand);
// Accepts [["A",1],["B",2],...].
Demand DemandFromJson(const nlohmann::json& j);

struct RunSummary {
  const SystemConfig* config = nullptr;
  Scheme requested = Scheme::kAuto;
  const DeliveryPlan* plan = nullptr;
  const RateReport* rate = nullptr;
  const PlanAudit* audit = nullptr;
};

// {K, N, M, t, lambda, scheme, scheme_used, regime, loads{A,B,P,S}, F, R,
//  R_float, R_formula, R_formula_float, slack, delta_measured,
//  delta_formula, verified, unpaired, pairs, singles, failures}. Rationals
// are "p/q" strings.
nlohmann::ordered_json ReportJson(const RunSummary& run);

// Column order: lambda, K, t, regime, n_exact, ni_exact, ni_over_n,
// asymptote, delta, delta_prime, delta_ratio; every rational column is
// followed by its _num and _den. Floats use 12 significant digits; an
// undefined ratio (n = 0) leaves its three cells empty.
void WriteCurvesCsv(std::ostream& out, const CurveTable& table);

// 12 significant digits, "%.12g".
std::string FormatDouble(double v);

}  // namespace mscc

#endif  // MSCC_PLAN_IO_H_
