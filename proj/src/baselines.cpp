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

#include "optiloop/baselines.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>

#include "optiloop/errors.hpp"

namespace optiloop {

std::pair<NetworkConfig, Solution> all_on(const LogicalGraph& lg,
                                          const PhysicalGraph& pg,
                                          const EnergyModel& em) {
  return initial_solution(lg, pg, em);
}

namespace {

constexpr double kEps = 1e-9;

struct GreedyState {
  const LogicalGraph& lg;
  const PhysicalGraph& pg;
  NetworkConfig cfg;
  std::map<std::pair<Id, Id>, double> residual_bw;
  std::map<Id, double> residual_cpu;
  std::map<Id, std::vector<const Link*>> out_links;

  explicit GreedyState(const LogicalGraph& l, const PhysicalGraph& p)
      : lg(l), pg(p) {
    for (const Link& ln : pg.links) {
      residual_bw[{ln.src, ln.dst}] = ln.bandwidth_bps;
      out_links[ln.src].push_back(&ln);
    }
    for (const Id& c : pg.nodes) residual_cpu[c] = pg.capacity(c);
  }

  bool link_usable(const Link& l, double flow, bool active_only) const {
    if (pg.endpoints.count(l.dst)) return false;
    if (active_only && !cfg.active_links.count({l.src, l.dst})) return false;
    if (residual_bw.at({l.src, l.dst}) < flow - kEps) return false;
    if (pg.nodes.count(l.src) &&
        residual_cpu.at(l.src) < pg.switch_cpu(l.src) * flow - kEps)
      return false;
    return true;
  }

  // hop distances from `from` over links passing `usable`
  std::map<Id, int> bfs(const Id& from,
                        const std::function<bool(const Link&)>& usable) const {
    std::map<Id, int> dist;
    dist[from] = 0;
    std::deque<Id> q{from};
    while (!q.empty()) {
      Id u = q.front();
      q.pop_front();
      auto it = out_links.find(u);
      if (it == out_links.end()) continue;
      for (const Link* l : it->second) {
        if (!usable(*l) || dist.count(l->dst)) continue;
        dist[l->dst] = dist[u] + 1;
        q.push_back(l->dst);
      }
    }
    return dist;
  }

  std::optional<std::vector<const Link*>> path(
      const Id& from, const Id& to,
      const std::function<bool(const Link&)>& usable) const {
    if (from == to) return std::vector<const Link*>{};
    std::map<Id, const Link*> parent;
    std::deque<Id> q{from};
    std::set<Id> seen{from};
    while (!q.empty()) {
      Id u = q.front();
      q.pop_front();
      auto it = out_links.find(u);
      if (it == out_links.end()) continue;
      for (const Link* l : it->second) {
        if (!usable(*l) || seen.count(l->dst)) continue;
        parent[l->dst] = l;
        if (l->dst == to) {
          std::vector<const Link*> out;
          Id cur = to;
          while (cur != from) {
            out.push_back(parent.at(cur));
            cur = parent.at(cur)->src;
          }
          std::reverse(out.begin(), out.end());
          return out;
        }
        seen.insert(l->dst);
        q.push_back(l->dst);
      }
    }
    return std::nullopt;
  }

  void commit_route(const std::vector<const Link*>& links, double flow) {
    for (const Link* l : links) {
      cfg.active_links.insert({l->src, l->dst});
      if (pg.nodes.count(l->src)) cfg.active_nodes.insert(l->src);
      if (pg.nodes.count(l->dst)) cfg.active_nodes.insert(l->dst);
      residual_bw[{l->src, l->dst}] -= flow;
      if (pg.nodes.count(l->src))
        residual_cpu[l->src] -= pg.switch_cpu(l->src) * flow;
    }
  }
};

}  // namespace

NetworkConfig consolidation(const LogicalGraph& lg, const PhysicalGraph& pg,
                            const EnergyModel& em) {
  (void)em;  // the heuristic never looks at energy
  lg.validate();
  pg.validate();
  GreedyState st(lg, pg);
  const auto derived = derive_logical_flows(lg);

  // flows in descending traffic order, then lexicographic endpoint id
  std::vector<std::pair<double, Id>> order;
  for (const Id& e : lg.endpoints) {
    double total = 0.0;
    for (const Id& v : lg.vnfs) total += lg.injected(e, v);
    if (total > 0) order.push_back({total, e});
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });

  for (const auto& [total, e] : order) {
    (void)total;
    // per-stage inflows for this endpoint
    std::map<Id, double> inject;
    for (const Id& v : lg.vnfs)
      if (lg.injected(e, v) > 0) inject[v] = lg.injected(e, v);
    std::map<std::pair<Id, Id>, double> inter;  // (v1,v2) -> rate
    for (const auto& [key, rate] : derived)
      if (key.endpoint == e && rate > 0) inter[{key.from_vnf, key.to_vnf}] = rate;

    // topological order over this endpoint's chain
    std::map<Id, int> indeg;
    std::map<Id, std::vector<Id>> succ;
    std::set<Id> present;
    for (const auto& [v, r] : inject) {
      (void)r;
      present.insert(v);
    }
    for (const auto& [k, r] : inter) {
      (void)r;
      present.insert(k.first);
      present.insert(k.second);
      succ[k.first].push_back(k.second);
      indeg[k.second] += 1;
    }
    std::deque<Id> ready;
    for (const Id& v : present)
      if (indeg[v] == 0) ready.push_back(v);
    std::vector<Id> topo;
    while (!ready.empty()) {
      Id v = ready.front();
      ready.pop_front();
      topo.push_back(v);
      for (const Id& w : succ[v])
        if (--indeg[w] == 0) ready.push_back(w);
    }

    std::map<Id, Id> host;  // vnf -> serving node for this endpoint
    for (const Id& v : topo) {
      // traffic that must be processed by v for this endpoint
      std::vector<std::pair<Id, double>> sources;  // (location, flow)
      double inflow = 0.0;
      if (auto it = inject.find(v); it != inject.end()) {
        sources.push_back({e, it->second});
        inflow += it->second;
      }
      for (const auto& [k, rate] : inter) {
        if (k.second != v) continue;
        sources.push_back({host.at(k.first), rate});
        inflow += rate;
      }
      if (sources.empty() || inflow <= 0) continue;
      const double cpu_needed = lg.cpu(v) * inflow;

      const auto primary_it =
          std::max_element(sources.begin(), sources.end(),
                           [](const auto& a, const auto& b) {
                             if (a.second != b.second) return a.second < b.second;
                             return a.first > b.first;
                           });
      const Id primary = primary_it->first;
      const double primary_flow = primary_it->second;

      auto active_usable = [&](const Link& l) {
        return st.link_usable(l, primary_flow, true);
      };
      auto full_usable = [&](const Link& l) { return st.link_usable(l, 0.0, false); };

      Id chosen;
      bool found = false;

      // stage 1: reuse a deployed instance with room, reachable on the
      // active topology
      {
        auto dist = st.bfs(primary, active_usable);
        int best = -1;
        for (const Id& c : st.pg.nodes) {
          if (!st.cfg.placements.count({c, v})) continue;
          if (st.residual_cpu[c] < cpu_needed - kEps) continue;
          auto d = dist.find(c);
          if (d == dist.end()) continue;
          bool all_reach = true;
          for (const auto& s : sources) {
            auto src_usable = [&](const Link& l) {
              return st.link_usable(l, s.second, true);
            };
            if (s.first != c && !st.path(s.first, c, src_usable)) {
              all_reach = false;
              break;
            }
          }
          if (!all_reach) continue;
          if (!found || d->second < best || (d->second == best && c < chosen)) {
            chosen = c;
            best = d->second;
            found = true;
          }
        }
      }
      // stage 2: new instance at an already-active node
      if (!found) {
        auto dist = st.bfs(primary, full_usable);
        int best = -1;
        for (const Id& c : st.cfg.active_nodes) {
          if (st.residual_cpu[c] < cpu_needed - kEps) continue;
          auto d = dist.find(c);
          if (d == dist.end()) continue;
          if (!found || d->second < best || (d->second == best && c < chosen)) {
            chosen = c;
            best = d->second;
            found = true;
          }
        }
      }
      // stage 3: wake the nearest inactive node
      if (!found) {
        auto dist = st.bfs(primary, full_usable);
        int best = -1;
        for (const Id& c : st.pg.nodes) {
          if (st.cfg.active_nodes.count(c)) continue;
          if (st.residual_cpu[c] < cpu_needed - kEps) continue;
          auto d = dist.find(c);
          if (d == dist.end()) continue;
          if (!found || d->second < best || (d->second == best && c < chosen)) {
            chosen = c;
            best = d->second;
            found = true;
          }
        }
      }
      if (!found)
        throw InfeasibleDemand("consolidation: no node can host " + v +
                               " for endpoint " + e);

      st.cfg.active_nodes.insert(chosen);
      st.cfg.placements.insert({chosen, v});
      st.residual_cpu[chosen] -= cpu_needed;
      host[v] = chosen;

      // route every incoming flow to the chosen host, activating links as
      // needed for connectivity
      for (const auto& [loc, flow] : sources) {
        if (loc == chosen) continue;
        auto usable = [&](const Link& l) { return st.link_usable(l, flow, true); };
        auto p = st.path(loc, chosen, usable);
        if (!p) {
          auto usable_any = [&](const Link& l) {
            return st.link_usable(l, flow, false);
          };
          p = st.path(loc, chosen, usable_any);
        }
        if (!p)
          throw InfeasibleDemand("consolidation: cannot route " + loc + "->" +
                                 chosen + " for endpoint " + e);
        st.commit_route(*p, flow);
      }
    }
  }

  st.cfg.validate(pg);
  return st.cfg;
}

std::pair<NetworkConfig, SolveReport> optimal(const LogicalGraph& lg,
                                              const PhysicalGraph& pg,
                                              const EnergyModel& em,
                                              const ExactOptions& opts) {
  ProblemInstance inst =
      build_instance(lg, pg, em, VariablePolicy::all_binary());
  SolveReport rep = solve_exact(inst, opts);
  if (rep.status != SolveStatus::Optimal)
    throw InfeasibleDemand("no feasible activation exists");
  NetworkConfig cfg = config_from_solution(*rep.solution);
  return {cfg, rep};
}

}  // namespace optiloop
