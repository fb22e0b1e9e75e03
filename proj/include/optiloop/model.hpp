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
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "optiloop/errors.hpp"

namespace optiloop {

using Id = std::string;

/// A directed physical link.
struct LinkKey {
  Id src, dst;
  auto operator<=>(const LinkKey&) const = default;
};

/// One commodity: traffic originated at `endpoint` that was last processed
/// at `from_vnf` and is headed to `to_vnf`. Traffic that has not been
/// processed yet is keyed with from_vnf == to_vnf (its first VNF).
struct FlowKey {
  Id endpoint, from_vnf, to_vnf;
  auto operator<=>(const FlowKey&) const = default;
  bool is_injection() const { return from_vnf == to_vnf; }
};

/// The demand side: endpoints, VNFs, injected traffic, and the
/// traffic-transformation ratios that replace ordinary flow conservation.
struct LogicalGraph {
  std::set<Id> endpoints;
  std::set<Id> vnfs;
  /// (endpoint, first vnf) -> injected rate l(e,v), in bit/s.
  std::map<std::pair<Id, Id>, double> injected_bps;
  /// (origin, at, next) -> units of traffic produced toward `next` per unit
  /// processed at `at` that arrived from `origin`. `origin` ranges over
  /// VNFs and endpoints; absent entries are 0.
  std::map<std::tuple<Id, Id, Id>, double> chi;
  /// D(v): seconds of processing delay per unit of traffic stage.
  std::map<Id, double> processing_delay_s;
  /// r(v): computational-capability units per bit/s processed.
  std::map<Id, double> cpu_per_bps;

  double injected(const Id& e, const Id& v) const;
  double chi_at(const Id& origin, const Id& at, const Id& next) const;
  double cpu(const Id& v) const;
  double proc_delay(const Id& v) const;

  /// Throws InvalidModel on negative rates/ratios or dangling references.
  void validate() const;
};

struct Link {
  Id src, dst;
  double bandwidth_bps = 0.0;
  double delay_s = 0.0;
};

/// The supply side: endpoints, B/F nodes, and directed capacitated links.
/// A node that cannot host VNFs (a pure switch) has capacity 0.
struct PhysicalGraph {
  std::set<Id> endpoints;
  std::set<Id> nodes;
  std::map<Id, double> node_capacity;       // k(c), capability units
  std::map<Id, double> switch_cpu_per_bps;  // rho(c), capability per bit/s switched
  std::vector<Link> links;
  std::map<Id, double> max_delay_s;  // per endpoint; absent = unconstrained

  double capacity(const Id& c) const;
  double switch_cpu(const Id& c) const;
  bool has_link(const Id& i, const Id& j) const;

  void validate() const;
};

/// Affine energy curves: a fixed charge gated by the activation variable
/// plus a slope times carried load. All coefficients in watts or J/bit.
struct EnergyModel {
  std::map<Id, double> idle_power_w;                   // per active node
  std::map<std::pair<Id, Id>, double> vnf_overhead_w;  // per deployed (node, vnf)
  double proc_w_per_cpu = 0.0;
  std::map<Id, double> proc_w_per_cpu_override;
  double switch_w_per_bps = 0.0;
  std::map<Id, double> switch_w_per_bps_override;
  double link_w_per_bps = 0.0;
  std::map<std::pair<Id, Id>, double> link_w_per_bps_override;

  double idle(const Id& c) const;
  double overhead(const Id& c, const Id& v) const;
  double proc_slope(const Id& c) const;
  double switch_slope(const Id& c) const;
  double link_slope(const Id& i, const Id& j) const;

  void validate() const;
};

/// Values of every decision variable plus the objective. Sparse: absent
/// keys mean 0.
struct Solution {
  std::map<std::pair<Id, Id>, double> x;               // link active
  std::map<Id, double> y;                              // node active
  std::map<std::pair<Id, Id>, double> delta;           // (node, vnf) deployed
  std::map<std::pair<LinkKey, FlowKey>, double> tau;   // flow on link, bit/s
  std::map<std::pair<Id, FlowKey>, double> transit;    // forwarded at node
  std::map<std::pair<Id, FlowKey>, double> processed;  // processed at node
  double objective_w = 0.0;
  bool integral = false;

  double get_x(const Id& i, const Id& j) const;
  double get_y(const Id& c) const;
  double get_delta(const Id& c, const Id& v) const;
};

/// Derived inter-VNF flows l(e,v1,v2), computed to fixpoint in topological
/// order of the chi-induced dependency graph. Injected flows are not part
/// of the result. Throws CyclicLogicalGraph when a reachable cycle with
/// nonzero gain exists.
std::map<FlowKey, double> derive_logical_flows(const LogicalGraph& lg);

/// Every commodity with nonzero traffic: injections keyed (e,v,v) plus all
/// positive derived flows. This is the index set physical flow variables
/// range over.
std::vector<FlowKey> commodities(const LogicalGraph& lg);

struct EnergyBreakdown {
  double idle_w = 0.0;
  double overhead_w = 0.0;
  double proc_w = 0.0;
  double switch_w = 0.0;
  double link_w = 0.0;
  double total() const { return idle_w + overhead_w + proc_w + switch_w + link_w; }
};

/// The five consumption terms evaluated on a solution. Switching energy is
/// charged on the total traffic outgoing from each node.
EnergyBreakdown energy_breakdown(const Solution& sol, const EnergyModel& em,
                                 const PhysicalGraph& pg, const LogicalGraph& lg);

double total_energy(const Solution& sol, const EnergyModel& em,
                    const PhysicalGraph& pg, const LogicalGraph& lg);

}  // namespace optiloop
