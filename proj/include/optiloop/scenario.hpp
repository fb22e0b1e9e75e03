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
#include <map>
#include <set>
#include <string>

#include "optiloop/model.hpp"

namespace optiloop {

/// A complete experiment input: demand, supply, energy curves, and a
/// demand multiplier.
struct Scenario {
  LogicalGraph logical;
  PhysicalGraph physical;
  EnergyModel energy;
  double traffic_multiplier = 1.0;
  std::string label;

  void validate() const;
};

struct VepcOptions {
  /// Fraction of eNB output that goes to the MME as control traffic.
  double enb_to_mme = 0.3;
  /// Fraction of gateway output going to the MME.
  double gw_to_mme = 0.32;
  double cpu_per_bps = 1.0;  // r(v), identical for the four VNFs
};

/// The four-VNF packet-core service graph: traffic enters at the eNB,
/// user-plane continues to the gateway, control-plane branches through the
/// MME to the HSS.
LogicalGraph vepc_fixture(const std::set<Id>& endpoints,
                          const VepcOptions& opts = {});

struct OperatorTopoOptions {
  int n_endpoints = 42;
  int n_nodes = 51;
  double mean_node_degree = 3.0;
  double endpoint_bw_bps = 10e9;
  double node_bw_bps = 100e9;
  double node_capacity = 100e9;      // capability units
  double switch_cpu_per_bps = 0.05;  // rho
};

/// Random connected node mesh with each endpoint wired to exactly two
/// distinct nodes. Seed-deterministic.
PhysicalGraph operator_like_topology(std::uint64_t seed,
                                     const OperatorTopoOptions& opts = {});

struct TrafficOptions {
  double min_bps = 74e6;
  double max_bps = 473e6;
  double downlink_fraction = 0.82;
};

/// Per-endpoint totals drawn uniformly from the configured range, split
/// into two unidirectional logical endpoints ("<e>_dn" / "<e>_up").
/// Returned map is keyed (logical endpoint, first vnf).
std::map<std::pair<Id, Id>, double> sample_traffic(std::uint64_t seed,
                                                   const std::set<Id>& endpoints,
                                                   const Id& first_vnf = "eNB",
                                                   const TrafficOptions& opts = {});

struct ScaleUpOptions {
  int ring_size = 5;
  int added_endpoints = 160;
  double traffic_factor = 5.0;
};

/// Replaces every node with a ring, reattaches original links between ring
/// members round-robin, and wires the added endpoints to two random nodes.
PhysicalGraph scale_up(const PhysicalGraph& pg, std::uint64_t seed,
                       const ScaleUpOptions& opts = {});

struct EnergyOptions {
  double node_idle_w = 54.0;  // 14 W switching step plus 40 W server step
  double vnf_overhead_w = 0.0;
  double proc_w_per_cpu = 48e-9;
  double switch_w_per_bps = 6.25e-11;  // 0.5 W per 8 Gbit/s
  double link_w_per_bps = 0.0;
};

EnergyModel make_energy_model(const PhysicalGraph& pg, const EnergyOptions& opts = {});

struct OperatorScenarioOptions {
  OperatorTopoOptions topo;
  TrafficOptions traffic;
  VepcOptions vepc;
  EnergyOptions energy;
  bool scaled_up = false;
  ScaleUpOptions scale;
  std::string label = "operator";
};

/// Topology, sampled traffic (82:18 split into unidirectional logical
/// endpoints), service graph, and energy curves in one scenario; with
/// scaled_up set the physical graph and traffic go through the ring
/// transform first, preserving total demand x traffic_factor.
Scenario make_operator_scenario(std::uint64_t seed,
                                const OperatorScenarioOptions& opts = {});

/// JSON document round-trip. load(save(s)) is the identity on canonical
/// form; schema violations carry a JSON-pointer-style path.
std::string save_scenario(const Scenario& s);
Scenario load_scenario(const std::string& document);

}  // namespace optiloop
