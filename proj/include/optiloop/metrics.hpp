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

#pragma once

#include <map>
#include <string>
#include <vector>

#include "optiloop/loop.hpp"
#include "optiloop/milp.hpp"
#include "optiloop/model.hpp"
#include "optiloop/scenario.hpp"

namespace optiloop {

/// One cell of the experiment grid.
struct RunResult {
  std::string strategy;
  std::string scenario_label;
  double traffic_multiplier = 1.0;
  std::string status = "ok";
  EnergyBreakdown breakdown;
  double energy_total_w = 0.0;
  double savings_vs_all_on = 0.0;
  double spare_ccat = 0.0;
  double mean_hops = 0.0;
  std::map<Id, int> vnf_instances;
  double per_node_traffic_bps = 0.0;
  int active_nodes = 0;
  int active_links = 0;
  int placements = 0;
  long lp_solves = 0;
  long iis_computations = 0;
  double wall_time_s = 0.0;
};

struct Violation {
  RowTag tag;
  std::string where;
  double amount = 0.0;
};

/// Model-level feasibility recheck of a solved configuration, written
/// directly against the graphs rather than through the instance builder.
/// Relative slack scales with each row's term magnitudes so bit/s-sized
/// quantities do not drown the absolute tolerance.
std::vector<Violation> validate_solution(const NetworkConfig& cfg,
                                         const Solution& sol,
                                         const LogicalGraph& lg,
                                         const PhysicalGraph& pg,
                                         const EnergyModel& em,
                                         double tol = 1e-6);

/// Unused computational capability summed over the active nodes.
double spare_ccat(const NetworkConfig& cfg, const Solution& sol,
                  const PhysicalGraph& pg, const LogicalGraph& lg);

/// Traffic-weighted link traversals per unit of injected traffic.
double mean_hops(const Solution& sol, const LogicalGraph& lg,
                 const PhysicalGraph& pg);

struct ExperimentOptions {
  std::vector<std::string> strategies{"all_on", "optiloop", "consolidation",
                                      "optimal"};
  std::vector<double> multipliers{0.5, 1.0, 2.0, 3.0};
  std::uint64_t seed = 1;
  int rounds = 1;
  ExactOptions exact;
};

/// Runs the (strategy x multiplier) grid. Per-cell failures land in the
/// row's status field; the sweep itself never aborts. Rows come back
/// sorted by (strategy, multiplier).
std::vector<RunResult> run_experiment(const Scenario& scenario,
                                      const ExperimentOptions& opts);

/// Fixed column order, '.' decimal separator, LF line endings. Timing is
/// excluded by default so identical seeds give byte-identical files.
std::string results_to_csv(const std::vector<RunResult>& rows,
                           bool include_timing = false);
std::string results_to_json(const std::vector<RunResult>& rows,
                            bool include_timing = false);

/// Stored-solution round-trip for the verify subcommand.
std::string solution_to_json(const NetworkConfig& cfg, const Solution& sol);
std::pair<NetworkConfig, Solution> solution_from_json(const std::string& doc);

}  // namespace optiloop
