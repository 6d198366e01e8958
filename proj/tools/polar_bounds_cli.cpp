// Command-line surface: evaluate single instances, fuzz the bound catalog,
// search for near-equality instances, and print the stated equality
// witnesses. Exit codes: 0 = no violations, 1 = violations found,
// 2 = usage or IO error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polarbounds/harness.hpp"

namespace pb = polarbounds;

namespace {

int fail_usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

std::vector<pb::BoundId> parse_bound_list(const std::string& arg) {
  std::vector<pb::BoundId> out;
  if (arg == "ALL") {
    out.assign(pb::kAllBounds.begin(), pb::kAllBounds.end());
    return out;
  }
  std::stringstream ss(arg);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto id = pb::parse_bound_id(item);
    if (!id) throw pb::ParseError("unknown bound id: " + item);
    out.push_back(*id);
  }
  if (out.empty()) throw pb::ParseError("empty bound list");
  return out;
}

int cmd_check(const std::string& path, pb::Mode mode) {
  std::ifstream in(path);
  if (!in) return fail_usage("cannot open " + path);
  pb::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    return fail_usage(std::string("malformed JSON: ") + e.what());
  }
  pb::Instance inst;
  try {
    inst = pb::instance_from_json(j);
  } catch (const std::exception& e) {
    return fail_usage(std::string("malformed instance: ") + e.what());
  }
  const pb::HypothesisReport rep = pb::check_hypothesis(inst);
  if (!rep.ok()) {
    pb::json out;
    out["hypothesis"] = pb::to_json(rep);
    std::cout << out.dump(2) << "\n";
    return 1;
  }
  const pb::BoundEvaluation ev = pb::evaluate_bound(inst, mode);
  pb::json out;
  out["hypothesis"] = pb::to_json(rep);
  out["evaluation"] = pb::to_json(ev);
  std::cout << out.dump(2) << "\n";
  return ev.outcome == pb::Outcome::VIOLATION ? 1 : 0;
}

int cmd_witness(const std::string& bound, int degree, double alpha) {
  const auto id = pb::parse_bound_id(bound);
  if (!id) return fail_usage("unknown bound id: " + bound);
  pb::Instance inst;
  try {
    inst = pb::equality_witness(*id, degree, alpha);
  } catch (const pb::NoWitnessKnown& e) {
    return fail_usage(e.what());
  }
  const pb::BoundEvaluation ev = pb::evaluate_bound(inst);
  pb::json out;
  out["instance"] = pb::to_json(inst);
  out["evaluation"] = pb::to_json(ev);
  out["equality_gap"] = 1.0 - ev.ratio;
  std::cout << out.dump(2) << "\n";
  return ev.outcome == pb::Outcome::VIOLATION ? 1 : 0;
}

int cmd_fuzz(const pb::FuzzConfig& cfg, const std::string& out_path,
             const std::string& csv_path) {
  const pb::FuzzReport report = pb::run_fuzz(cfg);
  for (const pb::BoundReport& br : report.bounds) {
    std::fprintf(stderr, "%-18s trials=%d violations=%ld min_margin=%.3e (%.0f ms)\n",
                 pb::to_string(br.bound_id), br.trials, br.violation_count,
                 br.min_margin, br.wall_ms);
  }
  const std::string text = pb::emit_report(report, pb::ReportFormat::JSON);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) return fail_usage("cannot write " + out_path);
    out << text;
  }
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) return fail_usage("cannot write " + csv_path);
    csv << pb::emit_report(report, pb::ReportFormat::CSV);
  }
  return report.total_violations() > 0 ? 1 : 0;
}

int cmd_sharpness(const std::string& bound, long budget,
                  std::uint64_t seed) {
  const auto id = pb::parse_bound_id(bound);
  if (!id) return fail_usage("unknown bound id: " + bound);
  const pb::ExtremalResult res = pb::search_sharpness(*id, budget, seed);
  std::cout << pb::to_json(res).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polar-bounds: verification harness for polynomial "
               "derivative inequalities"};
  app.require_subcommand(1);

  std::string instance_path;
  std::string mode_name = "POINTWISE";
  auto* check = app.add_subcommand("check", "evaluate one instance file");
  check->add_option("instance", instance_path, "instance JSON file")
      ->required();
  check->add_option("--mode", mode_name, "POINTWISE or UNIFORM");

  pb::FuzzConfig cfg;
  std::string bounds_arg = "ALL";
  std::string out_path;
  std::string csv_path;
  auto* fuzz = app.add_subcommand("fuzz", "batch-fuzz the bound catalog");
  fuzz->add_option("--bounds", bounds_arg, "comma-separated bound ids or ALL");
  fuzz->add_option("--trials", cfg.trials, "trials per bound");
  fuzz->add_option("--seed", cfg.seed, "master seed");
  fuzz->add_option("--degree-min", cfg.degree_lo, "minimum degree");
  fuzz->add_option("--degree-max", cfg.degree_hi, "maximum degree");
  fuzz->add_option("--threads", cfg.parallelism, "worker threads");
  fuzz->add_option("--mode", mode_name, "POINTWISE or UNIFORM");
  fuzz->add_option("--out", out_path, "JSON report path (default stdout)");
  fuzz->add_option("--csv", csv_path, "also write per-trial CSV here");

  std::string bound_arg;
  long budget = 1000;
  std::uint64_t seed = 0;
  auto* sharp = app.add_subcommand("sharpness",
                                   "search for near-equality instances");
  sharp->add_option("--bound", bound_arg, "bound id")->required();
  sharp->add_option("--budget", budget, "evaluation budget");
  sharp->add_option("--seed", seed, "seed");

  std::string wbound;
  int wdegree = 4;
  double walpha = 0.0;
  auto* witness = app.add_subcommand("witness",
                                     "print a stated equality witness");
  witness->add_option("--bound", wbound, "bound id")->required();
  witness->add_option("--degree", wdegree, "degree n");
  witness->add_option("--alpha", walpha, "alpha parameter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*check) {
      if (mode_name != "POINTWISE" && mode_name != "UNIFORM") {
        return fail_usage("mode must be POINTWISE or UNIFORM");
      }
      return cmd_check(instance_path, mode_name == "UNIFORM"
                                          ? pb::Mode::UNIFORM
                                          : pb::Mode::POINTWISE);
    }
    if (*fuzz) {
      if (mode_name != "POINTWISE" && mode_name != "UNIFORM") {
        return fail_usage("mode must be POINTWISE or UNIFORM");
      }
      cfg.mode = mode_name == "UNIFORM" ? pb::Mode::UNIFORM
                                        : pb::Mode::POINTWISE;
      cfg.bounds = parse_bound_list(bounds_arg);
      return cmd_fuzz(cfg, out_path, csv_path);
    }
    if (*sharp) return cmd_sharpness(bound_arg, budget, seed);
    if (*witness) return cmd_witness(wbound, wdegree, walpha);
  } catch (const pb::HypothesisViolated& e) {
    pb::json out;
    out["hypothesis"] = pb::to_json(e.report);
    std::cout << out.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    return fail_usage(e.what());
  }
  return 2;
}
