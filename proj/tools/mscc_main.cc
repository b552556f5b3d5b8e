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


// mscc: simulate three-server coded caching, verify exported plans and
// sweep the unpaired-ratio curves.
//
//   mscc simulate --K 8 --lambda 1/2 --scheme lap --demand worst
//   mscc curves --K 14,22,30 --lambda 1/3,1/2,2/3 --nearest --out curves.csv
//   mscc verify --plan plan.jsonl
//
// Exit status: 0 success, 1 verification failure, 2 invalid input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mscc/analysis.h"
#include "mscc/delivery.h"
#include "mscc/plan_io.h"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInvalid = 2;

struct SimulateArgs {
  int K = 0;
  std::string lambda;
  std::optional<int> M;
  std::optional<int> N;
  std::string scheme = "auto";
  std::string demand = "worst";
  std::optional<std::uint64_t> seed;
  std::string demand_file;
  std::string out;
  std::string plan_out;
  int jobs = 0;
};

struct CurvesArgs {
  std::vector<int> ks;
  std::vector<std::string> lambdas;
  bool nearest = false;
  std::string out;
  int jobs = 0;
};

struct VerifyArgs {
  std::string plan;
  std::string out;
  int jobs = 0;
};

// `path` if given, else `default_name` under $MSCC_OUTPUT_DIR, else "" for
// stdout.
std::string ResolveOutput(const std::string& path,
                          const std::string& default_name) {
  if (!path.empty()) return path;
  if (const char* dir = std::getenv("MSCC_OUTPUT_DIR"); dir && *dir) {
    return (std::filesystem::path(dir) / default_name).string();
  }
  return "";
}

void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

mscc::Demand LoadDemandFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw mscc::FormatError("cannot read demand file " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw mscc::FormatError("demand file: " + std::string(e.what()));
  }
  if (j.is_object() && j.contains("demand")) j = j["demand"];
  return mscc::DemandFromJson(j);
}

int RunSimulate(const SimulateArgs& args) {
  const bool by_lambda = !args.lambda.empty();
  if (by_lambda == (args.M.has_value() || args.N.has_value())) {
    throw mscc::ConfigError("give either --lambda or both --M and --N");
  }
  if (!by_lambda && !(args.M && args.N)) {
    throw mscc::ConfigError("--M and --N must be given together");
  }
  const mscc::SystemConfig config =
      by_lambda ? mscc::BuildConfigForLambda(args.K,
                                             mscc::ParseRational(args.lambda))
                : mscc::BuildConfig(args.K, *args.M, *args.N);
  const mscc::Scheme scheme = mscc::ParseScheme(args.scheme);

  mscc::Demand demand;
  if (args.demand == "worst") {
    if (args.seed || !args.demand_file.empty()) {
      throw mscc::ConfigError("--demand worst takes no --seed or --demand-file");
    }
    demand = mscc::WorstCaseDemand(config);
  } else if (args.demand == "random") {
    if (!args.seed) throw mscc::ConfigError("--demand random needs --seed");
    if (!args.demand_file.empty()) {
      throw mscc::ConfigError("--demand random takes no --demand-file");
    }
    demand = mscc::RandomDemand(config, *args.seed);
  } else {
    if (args.demand_file.empty()) {
      throw mscc::ConfigError("--demand file needs --demand-file");
    }
    if (args.seed) throw mscc::ConfigError("--demand file takes no --seed");
    demand = LoadDemandFile(args.demand_file);
  }
  mscc::ValidateDemand(config, demand);

  const mscc::DeliveryPlan plan = mscc::BuildPlan(config, demand, scheme);
  const mscc::RateReport rate = mscc::MeasureRate(plan);
  const mscc::PlanAudit audit = mscc::AuditPlan(plan, args.jobs);

  const std::string stem = "simulate_K" + std::to_string(config.K()) + "_t" +
                           std::to_string(config.t()) + "_" +
                           mscc::SchemeName(scheme);
  const nlohmann::ordered_json report =
      mscc::ReportJson({&config, scheme, &plan, &rate, &audit});
  Emit(ResolveOutput(args.out, stem + ".json"), report.dump(2) + "\n");
  if (!args.plan_out.empty()) {
    std::ostringstream text;
    mscc::WritePlan(text, plan);
    Emit(args.plan_out, text.str());
  }
  if (!audit.ok()) {
    std::cerr << "verification failed: " << audit.FirstFailure() << "\n";
    return kVerifyFailed;
  }
  return kOk;
}

int RunCurves(const CurvesArgs& args) {
  std::vector<mscc::Rational> lambdas;
  for (const std::string& s : args.lambdas) {
    lambdas.push_back(mscc::ParseRational(s));
  }
  const mscc::CurveTable table = mscc::RatioCurves(
      args.ks, lambdas,
      args.nearest ? mscc::GridMode::kNearestOdd : mscc::GridMode::kExact,
      args.jobs);
  for (const mscc::SkippedPoint& p : table.skipped) {
    std::cerr << "skipped K=" << p.K << " lambda=" << mscc::ToString(p.lambda)
              << ": " << p.reason << "\n";
  }
  if (table.rows.empty()) {
    std::cerr << "no admissible grid points\n";
    return kInvalid;
  }
  std::ostringstream csv;
  mscc::WriteCurvesCsv(csv, table);
  Emit(ResolveOutput(args.out, "curves.csv"), csv.str());
  return kOk;
}

int RunVerify(const VerifyArgs& args) {
  std::ifstream in(args.plan);
  if (!in) throw mscc::FormatError("cannot read plan " + args.plan);
  const mscc::DeliveryPlan plan = mscc::ReadPlan(in);
  const mscc::PlanAudit audit = mscc::AuditPlan(plan, args.jobs);

  std::ostringstream msg;
  if (audit.ok()) {
    msg << "PASS coverage, origin-consistency, decodability\n";
  } else {
    msg << "FAIL " << audit.FirstFailure() << "\n";
    for (mscc::UserSet s : audit.coverage.orphaned) {
      msg << "  orphaned " << s.ToString() << "\n";
    }
    for (mscc::UserSet s : audit.coverage.duplicated) {
      msg << "  duplicated " << s.ToString() << "\n";
    }
    for (mscc::UserSet s : audit.coverage.malformed) {
      msg << "  malformed " << s.ToString() << "\n";
    }
    for (const std::string& v : audit.origin_violations) {
      msg << "  " << v << "\n";
    }
    for (const mscc::UserRecovery& u : audit.recovery.users) {
      if (u.ok) continue;
      msg << "  user " << u.user << " cannot decode " << u.missing
          << " packets, first "
          << (u.first_failure ? u.first_failure->ToString() : "?") << "\n";
    }
  }
  Emit(args.out, msg.str());
  return audit.ok() ? kOk : kVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-server coded caching simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Build, verify and measure one delivery plan");
  simulate->add_option("--K", sim.K, "Number of users")->required();
  simulate->add_option("--lambda", sim.lambda, "Cache fraction M/N, e.g. 1/2");
  simulate->add_option("--M", sim.M, "Cache size in files");
  simulate->add_option("--N", sim.N, "Number of files");
  simulate->add_option("--scheme", sim.scheme, "mn, lap, improved or auto")
      ->check(CLI::IsMember({"mn", "lap", "improved", "auto"}));
  simulate->add_option("--demand", sim.demand, "worst, random or file")
      ->check(CLI::IsMember({"worst", "random", "file"}));
  simulate->add_option("--seed", sim.seed, "Seed for --demand random");
  simulate->add_option("--demand-file", sim.demand_file,
                       "JSON array of [server, file] per user");
  simulate->add_option("--out", sim.out, "Report path (default stdout)");
  simulate->add_option("--plan-out", sim.plan_out, "Export the plan here");
  simulate->add_option("--jobs", sim.jobs, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  CurvesArgs cur;
  CLI::App* curves =
      app.add_subcommand("curves", "Unpaired-ratio curves as CSV");
  curves->add_option("--K", cur.ks, "User counts")->required()->delimiter(',');
  curves->add_option("--lambda", cur.lambdas, "Cache fractions")
      ->required()
      ->delimiter(',');
  curves->add_flag("--nearest", cur.nearest,
                   "Snap each lambda to the nearest odd t instead of "
                   "skipping non-integral points");
  curves->add_option("--out", cur.out, "CSV path (default stdout)");
  curves->add_option("--jobs", cur.jobs, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  VerifyArgs ver;
  CLI::App* verify =
      app.add_subcommand("verify", "Audit an exported plan file");
  verify->add_option("--plan", ver.plan, "Plan file")->required();
  verify->add_option("--out", ver.out, "Summary path (default stdout)");
  verify->add_option("--jobs", ver.jobs, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*simulate) return RunSimulate(sim);
    if (*curves) return RunCurves(cur);
    return RunVerify(ver);
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kVerifyFailed;
  }
}
