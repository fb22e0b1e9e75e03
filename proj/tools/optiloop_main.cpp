// Copyright 2026 the optiloop authors
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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "optiloop/baselines.hpp"
#include "optiloop/errors.hpp"
#include "optiloop/loop.hpp"
#include "optiloop/metrics.hpp"
#include "optiloop/milp.hpp"
#include "optiloop/scenario.hpp"

namespace {

using namespace optiloop;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

Scenario load_from(const std::string& path, double multiplier) {
  Scenario s = load_scenario(read_file(path));
  if (multiplier > 0) s.traffic_multiplier = multiplier;
  return s;
}

std::vector<double> parse_multipliers(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  if (out.empty()) throw Error("no multipliers given");
  return out;
}

std::vector<std::string> parse_strategies(const std::string& csv) {
  if (csv == "all")
    return {"all_on", "optiloop", "consolidation", "optimal"};
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"energy-minimizing VNF placement, node activation, and routing"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 1;
  std::string out_path;
  std::string format = "csv";
  double tolerance = 1e-6;
  app.add_option("--seed", seed, "rng seed")->capture_default_str();
  app.add_option("--out", out_path, "output file ('-' for stdout)");
  app.add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tolerance", tolerance, "validation tolerance")
      ->capture_default_str();

  // generate
  auto* gen = app.add_subcommand("generate", "emit a scenario document");
  OperatorScenarioOptions gopts;
  bool scale_flag = false;
  gen->add_option("--endpoints", gopts.topo.n_endpoints, "physical endpoints")
      ->capture_default_str();
  gen->add_option("--nodes", gopts.topo.n_nodes, "B/F nodes")
      ->capture_default_str();
  gen->add_option("--mean-degree", gopts.topo.mean_node_degree, "node mesh degree")
      ->capture_default_str();
  gen->add_option("--label", gopts.label, "scenario label")->capture_default_str();
  gen->add_option("--proc-slope", gopts.energy.proc_w_per_cpu,
                  "processing energy slope [W per capability unit]")
      ->capture_default_str();
  gen->add_option("--idle-power", gopts.energy.node_idle_w, "node idle step [W]")
      ->capture_default_str();
  gen->add_flag("--scale-up", scale_flag, "apply the ring-of-five transform");
  gen->add_option("--added-endpoints", gopts.scale.added_endpoints,
                  "endpoints added by the transform")
      ->capture_default_str();

  // solve
  auto* solve = app.add_subcommand("solve", "run one strategy on one scenario");
  std::string scenario_path, strategy = "optiloop", dump_solution;
  double multiplier = 1.0;
  int rounds = 1;
  solve->add_option("--scenario", scenario_path, "scenario JSON")->required();
  solve->add_option("--strategy", strategy,
                    "all_on | optiloop | consolidation | optimal")
      ->capture_default_str();
  solve->add_option("--multiplier", multiplier, "traffic multiplier")
      ->capture_default_str();
  solve->add_option("--rounds", rounds, "control loop rounds")
      ->capture_default_str();
  solve->add_option("--dump-solution", dump_solution,
                    "write the solved configuration and flows to a file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "full strategy x multiplier grid");
  std::string sweep_scenario, strategies = "all", multipliers = "0.5,1,2,3";
  int sweep_rounds = 1;
  sweep->add_option("--scenario", sweep_scenario, "scenario JSON")->required();
  sweep->add_option("--strategy", strategies, "comma list or 'all'")
      ->capture_default_str();
  sweep->add_option("--multipliers", multipliers, "comma list")
      ->capture_default_str();
  sweep->add_option("--rounds", sweep_rounds, "control loop rounds")
      ->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "re-check a stored solution");
  std::string verify_scenario, verify_solution;
  double verify_multiplier = 1.0;
  verify->add_option("--scenario", verify_scenario, "scenario JSON")->required();
  verify->add_option("--solution", verify_solution, "solution JSON")->required();
  verify->add_option("--multiplier", verify_multiplier, "traffic multiplier")
      ->capture_default_str();

  // export-lp
  auto* explp = app.add_subcommand("export-lp", "dump the problem instance");
  std::string explp_scenario, policy = "binary";
  double explp_multiplier = 1.0;
  explp->add_option("--scenario", explp_scenario, "scenario JSON")->required();
  explp->add_option("--policy", policy, "binary | relaxed | all-on")
      ->check(CLI::IsMember({"binary", "relaxed", "all-on"}));
  explp->add_option("--multiplier", explp_multiplier, "traffic multiplier")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    gopts.scaled_up = scale_flag;
    Scenario s = make_operator_scenario(seed, gopts);
    write_output(out_path, save_scenario(s));
    return 0;
  }

  if (solve->parsed()) {
    Scenario s = load_from(scenario_path, 0);
    ExperimentOptions opts;
    opts.strategies = {strategy};
    opts.multipliers = {multiplier};
    opts.seed = seed;
    opts.rounds = rounds;
    auto rows = run_experiment(s, opts);
    write_output(out_path, results_to_json(rows, false));
    std::cerr << "wall_time_s=" << rows.front().wall_time_s << "\n";
    if (!dump_solution.empty()) {
      const LogicalGraph lg = scale_demand(s.logical, multiplier);
      NetworkConfig cfg;
      Solution sol;
      if (strategy == "all_on") {
        std::tie(cfg, sol) = all_on(lg, s.physical, s.energy);
      } else if (strategy == "optiloop") {
        cfg = config_all_on(lg, s.physical);
        cfg.rng_seed = seed;
        cfg = control_loop(cfg, lg, s.physical, s.energy,
                           std::vector<double>(rounds, 1.0));
        sol = *evaluate_config(cfg, lg, s.physical, s.energy).solution;
      } else if (strategy == "consolidation") {
        cfg = consolidation(lg, s.physical, s.energy);
        sol = *evaluate_config(cfg, lg, s.physical, s.energy).solution;
      } else {
        auto [ocfg, rep] = optimal(lg, s.physical, s.energy);
        cfg = ocfg;
        sol = *rep.solution;
      }
      write_output(dump_solution, solution_to_json(cfg, sol));
    }
    return rows.front().status == "ok" ? 0 : 2;
  }

  if (sweep->parsed()) {
    Scenario s = load_from(sweep_scenario, 0);
    ExperimentOptions opts;
    opts.strategies = parse_strategies(strategies);
    opts.multipliers = parse_multipliers(multipliers);
    opts.seed = seed;
    opts.rounds = sweep_rounds;
    auto rows = run_experiment(s, opts);
    double total_time = 0.0;
    for (const auto& r : rows) total_time += r.wall_time_s;
    std::cerr << "cells=" << rows.size() << " total_wall_time_s=" << total_time
              << "\n";
    if (out_path.empty() || out_path == "-") {
      write_output("-", format == "json" ? results_to_json(rows)
                                         : results_to_csv(rows));
    } else {
      write_output(out_path + ".csv", results_to_csv(rows));
      write_output(out_path + ".json", results_to_json(rows));
    }
    return 0;
  }

  if (verify->parsed()) {
    Scenario s = load_from(verify_scenario, 0);
    const LogicalGraph lg = scale_demand(s.logical, verify_multiplier);
    auto [cfg, sol] = solution_from_json(read_file(verify_solution));
    auto violations = validate_solution(cfg, sol, lg, s.physical, s.energy,
                                        tolerance);
    if (violations.empty()) {
      std::cout << "ok\n";
      return 0;
    }
    for (const auto& v : violations)
      std::cerr << "violated " << to_string(v.tag) << "[" << v.where
                << "] by " << v.amount << "\n";
    return 3;
  }

  if (explp->parsed()) {
    Scenario s = load_from(explp_scenario, 0);
    const LogicalGraph lg = scale_demand(s.logical, explp_multiplier);
    VariablePolicy vp = VariablePolicy::all_binary();
    if (policy == "relaxed") vp = VariablePolicy::all_relaxed();
    if (policy == "all-on") vp = VariablePolicy::all_fixed(1.0);
    ProblemInstance inst = build_instance(lg, s.physical, s.energy, vp);
    std::ostringstream os;
    export_lp(inst, os);
    write_output(out_path, os.str());
    return 0;
  }

  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const optiloop::SchemaViolation& e) {
    std::cerr << "{\"error\":\"schema\",\"path\":\"" << e.path << "\",\"message\":\""
              << e.what() << "\"}\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "{\"error\":\"runtime\",\"message\":\"" << e.what() << "\"}\n";
    return 1;
  }
}
