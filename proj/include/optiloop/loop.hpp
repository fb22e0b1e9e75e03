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

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "optiloop/milp.hpp"
#include "optiloop/model.hpp"
#include "optiloop/solver.hpp"

namespace optiloop {

/// The activation state of the network: which links and nodes are powered
/// and which VNF instances are deployed where.
struct NetworkConfig {
  std::set<std::pair<Id, Id>> active_links;
  std::set<Id> active_nodes;
  std::set<std::pair<Id, Id>> placements;  // (node, vnf)
  std::uint64_t rng_seed = 0;

  bool operator==(const NetworkConfig& o) const {
    return active_links == o.active_links && active_nodes == o.active_nodes &&
           placements == o.placements;
  }

  /// Placements must sit on active nodes and active links must have their
  /// node endpoints active.
  void validate(const PhysicalGraph& pg) const;
};

struct LoopStats {
  long lp_solves = 0;      // solves issued by the procedures themselves
  long iis_computations = 0;
  int activations = 0;
  int deactivations = 0;
  /// Energy of the returned configuration under its best routing, when the
  /// procedure's final solve produced one.
  std::optional<double> final_energy;
  LoopStats& operator+=(const LoopStats& o) {
    lp_solves += o.lp_solves;
    iis_computations += o.iis_computations;
    activations += o.activations;
    deactivations += o.deactivations;
    if (o.final_energy) final_energy = o.final_energy;
    return *this;
  }
};

/// Everything on: all nodes and links active, every VNF deployed at every
/// node.
NetworkConfig config_all_on(const LogicalGraph& lg, const PhysicalGraph& pg);

/// Binary policy that pins x, y, delta to the configuration's values.
VariablePolicy policy_from_config(const NetworkConfig& cfg, const LogicalGraph& lg,
                                  const PhysicalGraph& pg);

/// Rounds an integral solution's binaries into a configuration.
NetworkConfig config_from_solution(const Solution& sol);

/// Returns a copy of the logical graph with every injected rate scaled.
LogicalGraph scale_demand(const LogicalGraph& lg, double factor);

/// Feasible starting point: activate everything, deploy every VNF
/// everywhere, and solve the remaining LP. If this is infeasible the whole
/// problem instance is infeasible and InfeasibleDemand is thrown.
std::pair<NetworkConfig, Solution> initial_solution(const LogicalGraph& lg,
                                                    const PhysicalGraph& pg,
                                                    const EnergyModel& em);

/// Activates links, nodes, and placements until the configuration can
/// carry the demand. Guidance comes from relaxed LP values; the choice is
/// random with probability proportional to them, seeded by cfg.rng_seed.
/// Never deactivates anything.
NetworkConfig fix_problems(const NetworkConfig& cfg, const LogicalGraph& lg,
                           const PhysicalGraph& pg, const EnergyModel& em,
                           LoopStats* stats = nullptr);

/// Deactivates elements one at a time, guided by the smallest relaxed
/// activation value, keeping only changes that stay feasible and do not
/// increase the configuration's energy. Always returns a feasible
/// configuration. `entry_energy` is the starting configuration's energy
/// under its best routing when the caller already knows it; otherwise one
/// extra evaluation solve is performed up front.
NetworkConfig save_energy(const NetworkConfig& cfg, const LogicalGraph& lg,
                          const PhysicalGraph& pg, const EnergyModel& em,
                          LoopStats* stats = nullptr,
                          std::optional<double> entry_energy = std::nullopt);

/// One fix_problems + save_energy pass per round. Each round can scale the
/// demand by a multiplier (projected rather than current traffic).
NetworkConfig control_loop(const NetworkConfig& cfg, const LogicalGraph& lg,
                           const PhysicalGraph& pg, const EnergyModel& em,
                           const std::vector<double>& round_multipliers,
                           LoopStats* stats = nullptr);

/// Objective of the best routing a configuration admits (all binaries
/// fixed to the configuration).
SolveReport evaluate_config(const NetworkConfig& cfg, const LogicalGraph& lg,
                            const PhysicalGraph& pg, const EnergyModel& em);

}  // namespace optiloop
