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

#include "optiloop/model.hpp"

#include <algorithm>
#include <deque>

namespace optiloop {

namespace {

template <typename M, typename K>
double lookup(const M& m, const K& k, double fallback = 0.0) {
  auto it = m.find(k);
  return it == m.end() ? fallback : it->second;
}

}  // namespace

double LogicalGraph::injected(const Id& e, const Id& v) const {
  return lookup(injected_bps, std::make_pair(e, v));
}

double LogicalGraph::chi_at(const Id& origin, const Id& at, const Id& next) const {
  return lookup(chi, std::make_tuple(origin, at, next));
}

double LogicalGraph::cpu(const Id& v) const { return lookup(cpu_per_bps, v); }

double LogicalGraph::proc_delay(const Id& v) const {
  return lookup(processing_delay_s, v);
}

void LogicalGraph::validate() const {
  for (const auto& [key, rate] : injected_bps) {
    if (rate < 0) throw InvalidModel("negative injected flow for " + key.first);
    if (!endpoints.count(key.first))
      throw InvalidModel("injected flow references unknown endpoint " + key.first);
    if (!vnfs.count(key.second))
      throw InvalidModel("injected flow references unknown vnf " + key.second);
  }
  for (const auto& [key, ratio] : chi) {
    const auto& [origin, at, next] = key;
    if (ratio < 0) throw InvalidModel("negative chi ratio at " + at);
    if (!vnfs.count(origin) && !endpoints.count(origin))
      throw InvalidModel("chi origin " + origin + " is neither vnf nor endpoint");
    if (!vnfs.count(at)) throw InvalidModel("chi references unknown vnf " + at);
    if (!vnfs.count(next)) throw InvalidModel("chi references unknown vnf " + next);
  }
  for (const auto& [v, r] : cpu_per_bps) {
    if (r < 0) throw InvalidModel("negative per-unit cpu for " + v);
    if (!vnfs.count(v)) throw InvalidModel("cpu entry for unknown vnf " + v);
  }
  for (const auto& [v, d] : processing_delay_s) {
    if (d < 0) throw InvalidModel("negative processing delay for " + v);
    if (!vnfs.count(v)) throw InvalidModel("delay entry for unknown vnf " + v);
  }
  // A reachable chi-cycle must be rejected; derive does the detection.
  derive_logical_flows(*this);
}

double PhysicalGraph::capacity(const Id& c) const { return lookup(node_capacity, c); }

double PhysicalGraph::switch_cpu(const Id& c) const {
  return lookup(switch_cpu_per_bps, c);
}

bool PhysicalGraph::has_link(const Id& i, const Id& j) const {
  return std::any_of(links.begin(), links.end(),
                     [&](const Link& l) { return l.src == i && l.dst == j; });
}

void PhysicalGraph::validate() const {
  for (const auto& [c, k] : node_capacity) {
    if (k < 0) throw InvalidModel("negative capacity at node " + c);
    if (!nodes.count(c)) throw InvalidModel("capacity entry for unknown node " + c);
  }
  for (const auto& [c, rho] : switch_cpu_per_bps) {
    if (rho < 0) throw InvalidModel("negative switch cpu at node " + c);
    if (!nodes.count(c)) throw InvalidModel("switch cpu for unknown node " + c);
  }
  std::set<std::pair<Id, Id>> seen_links;
  for (const Link& l : links) {
    if (l.src == l.dst) throw InvalidModel("self-loop link at " + l.src);
    if (!seen_links.insert({l.src, l.dst}).second)
      throw InvalidModel("duplicate link " + l.src + "->" + l.dst);
    if (l.bandwidth_bps <= 0)
      throw InvalidModel("non-positive bandwidth on link " + l.src + "->" + l.dst);
    if (l.delay_s < 0)
      throw InvalidModel("negative delay on link " + l.src + "->" + l.dst);
    auto known = [&](const Id& id) { return nodes.count(id) || endpoints.count(id); };
    if (!known(l.src) || !known(l.dst))
      throw InvalidModel("link references unknown vertex " + l.src + "->" + l.dst);
  }
  for (const auto& [e, d] : max_delay_s) {
    if (d < 0) throw InvalidModel("negative delay bound for endpoint " + e);
    if (!endpoints.count(e))
      throw InvalidModel("delay bound for unknown endpoint " + e);
  }
}

double EnergyModel::idle(const Id& c) const { return lookup(idle_power_w, c); }

double EnergyModel::overhead(const Id& c, const Id& v) const {
  return lookup(vnf_overhead_w, std::make_pair(c, v));
}

double EnergyModel::proc_slope(const Id& c) const {
  return lookup(proc_w_per_cpu_override, c, proc_w_per_cpu);
}

double EnergyModel::switch_slope(const Id& c) const {
  return lookup(switch_w_per_bps_override, c, switch_w_per_bps);
}

double EnergyModel::link_slope(const Id& i, const Id& j) const {
  return lookup(link_w_per_bps_override, std::make_pair(i, j), link_w_per_bps);
}

void EnergyModel::validate() const {
  auto nonneg = [](double v, const char* what) {
    if (v < 0) throw InvalidModel(std::string("negative energy coefficient: ") + what);
  };
  for (const auto& [c, w] : idle_power_w) nonneg(w, c.c_str());
  for (const auto& [k, w] : vnf_overhead_w) nonneg(w, k.first.c_str());
  nonneg(proc_w_per_cpu, "proc");
  for (const auto& [c, w] : proc_w_per_cpu_override) nonneg(w, c.c_str());
  nonneg(switch_w_per_bps, "switch");
  for (const auto& [c, w] : switch_w_per_bps_override) nonneg(w, c.c_str());
  nonneg(link_w_per_bps, "link");
  for (const auto& [k, w] : link_w_per_bps_override) nonneg(w, k.first.c_str());
}

double Solution::get_x(const Id& i, const Id& j) const {
  return lookup(x, std::make_pair(i, j));
}

double Solution::get_y(const Id& c) const { return lookup(y, c); }

double Solution::get_delta(const Id& c, const Id& v) const {
  return lookup(delta, std::make_pair(c, v));
}

// Flows are computed per endpoint over a graph whose vertices are the
// pairs (origin, at): "traffic arriving at `at` from `origin`". There is
// an edge (o, v2) -> (v2, v3) whenever chi(o, v2, v3) > 0, so a Kahn
// topological pass over the pairs reachable from the injections yields
// every derived rate in one sweep. Any unsortable reachable pair means a
// cycle of positive ratios.
std::map<FlowKey, double> derive_logical_flows(const LogicalGraph& lg) {
  std::map<FlowKey, double> out;

  // chi entries grouped by (origin, at) for edge expansion.
  std::map<std::pair<Id, Id>, std::vector<std::pair<Id, double>>> edges;
  for (const auto& [key, ratio] : lg.chi) {
    if (ratio <= 0) continue;
    const auto& [origin, at, next] = key;
    edges[{origin, at}].push_back({next, ratio});
  }

  for (const Id& e : lg.endpoints) {
    using Pair = std::pair<Id, Id>;  // (origin, at)
    std::map<Pair, double> flow;     // traffic arriving at `at` from `origin`
    std::map<Pair, int> indegree;
    std::map<Pair, std::vector<Pair>> succ;

    // Reachability sweep from the injected pairs (e, v).
    std::deque<Pair> frontier;
    std::set<Pair> seen;
    for (const auto& [key, rate] : lg.injected_bps) {
      if (key.first != e || rate <= 0) continue;
      Pair p{e, key.second};
      if (seen.insert(p).second) frontier.push_back(p);
    }
    while (!frontier.empty()) {
      Pair p = frontier.front();
      frontier.pop_front();
      auto it = edges.find(p);
      if (it == edges.end()) continue;
      for (const auto& [next, ratio] : it->second) {
        (void)ratio;
        Pair q{p.second, next};
        succ[p].push_back(q);
        indegree[q] += 1;
        if (seen.insert(q).second) frontier.push_back(q);
      }
    }

    // Kahn order over the reachable pairs.
    std::deque<Pair> ready;
    for (const Pair& p : seen)
      if (indegree[p] == 0) ready.push_back(p);
    size_t processed = 0;
    std::vector<Pair> order;
    order.reserve(seen.size());
    while (!ready.empty()) {
      Pair p = ready.front();
      ready.pop_front();
      order.push_back(p);
      ++processed;
      for (const Pair& q : succ[p])
        if (--indegree[q] == 0) ready.push_back(q);
    }
    if (processed != seen.size())
      throw CyclicLogicalGraph("chi cycle reachable from endpoint " + e);

    for (const auto& [key, rate] : lg.injected_bps)
      if (key.first == e && rate > 0) flow[{e, key.second}] += rate;

    for (const Pair& p : order) {
      double f = flow[p];
      if (f <= 0) continue;
      auto it = edges.find(p);
      if (it == edges.end()) continue;
      for (const auto& [next, ratio] : it->second) {
        double produced = f * ratio;
        flow[{p.second, next}] += produced;
      }
    }

    for (const auto& [p, f] : flow) {
      if (p.first == e) continue;  // injection, not a derived flow
      if (f > 0) out[FlowKey{e, p.first, p.second}] += f;
    }
  }
  return out;
}

std::vector<FlowKey> commodities(const LogicalGraph& lg) {
  std::vector<FlowKey> ks;
  for (const auto& [key, rate] : lg.injected_bps)
    if (rate > 0) ks.push_back(FlowKey{key.first, key.second, key.second});
  for (const auto& [key, rate] : derive_logical_flows(lg))
    if (rate > 0) ks.push_back(key);
  std::sort(ks.begin(), ks.end());
  return ks;
}

EnergyBreakdown energy_breakdown(const Solution& sol, const EnergyModel& em,
                                 const PhysicalGraph& pg, const LogicalGraph& lg) {
  EnergyBreakdown b;
  for (const auto& [c, yv] : sol.y) b.idle_w += em.idle(c) * yv;
  for (const auto& [cv, dv] : sol.delta)
    b.overhead_w += em.overhead(cv.first, cv.second) * dv;
  for (const auto& [key, p] : sol.processed) {
    const auto& [c, flow] = key;
    b.proc_w += em.proc_slope(c) * lg.cpu(flow.to_vnf) * p;
  }
  for (const auto& [key, t] : sol.tau) {
    const auto& [link, flow] = key;
    (void)flow;
    b.link_w += em.link_slope(link.src, link.dst) * t;
    if (pg.nodes.count(link.src)) b.switch_w += em.switch_slope(link.src) * t;
  }
  return b;
}

double total_energy(const Solution& sol, const EnergyModel& em,
                    const PhysicalGraph& pg, const LogicalGraph& lg) {
  return energy_breakdown(sol, em, pg, lg).total();
}

}  // namespace optiloop
