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

#include "optiloop/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>

#include <json.hpp>

#include "optiloop/errors.hpp"

namespace optiloop {

using nlohmann::json;

namespace {

double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string padded(const char* prefix, int i, int width) {
  std::ostringstream os;
  os << prefix;
  std::string digits = std::to_string(i);
  for (int k = static_cast<int>(digits.size()); k < width; ++k) os << '0';
  os << digits;
  return os.str();
}

int id_width(int count) {
  int w = 1;
  for (int c = count - 1; c >= 10; c /= 10) ++w;
  return std::max(w, 2);
}

void check_connected(const PhysicalGraph& pg) {
  if (pg.nodes.empty()) return;
  std::map<Id, std::vector<Id>> adj;
  for (const Link& l : pg.links)
    if (pg.nodes.count(l.src) && pg.nodes.count(l.dst)) {
      adj[l.src].push_back(l.dst);
      adj[l.dst].push_back(l.src);
    }
  std::set<Id> seen{*pg.nodes.begin()};
  std::deque<Id> q{*pg.nodes.begin()};
  while (!q.empty()) {
    Id u = q.front();
    q.pop_front();
    for (const Id& v : adj[u])
      if (seen.insert(v).second) q.push_back(v);
  }
  if (seen.size() != pg.nodes.size())
    throw DisconnectedTopology("generated node mesh is not connected");
}

}  // namespace

void Scenario::validate() const {
  logical.validate();
  physical.validate();
  energy.validate();
  if (logical.endpoints != physical.endpoints)
    throw InvalidModel("logical and physical endpoint sets differ");
  if (traffic_multiplier <= 0) throw InvalidModel("traffic multiplier must be > 0");
}

LogicalGraph vepc_fixture(const std::set<Id>& endpoints, const VepcOptions& opts) {
  LogicalGraph lg;
  lg.endpoints = endpoints;
  lg.vnfs = {"eNB", "P/S-GW", "MME", "HSS"};
  for (const Id& e : endpoints) {
    lg.chi[{e, "eNB", "P/S-GW"}] = 1.0;
    if (opts.enb_to_mme > 0) lg.chi[{e, "eNB", "MME"}] = opts.enb_to_mme;
  }
  if (opts.gw_to_mme > 0) lg.chi[{"eNB", "P/S-GW", "MME"}] = opts.gw_to_mme;
  lg.chi[{"eNB", "MME", "HSS"}] = 1.0;
  lg.chi[{"P/S-GW", "MME", "HSS"}] = 1.0;
  for (const Id& v : lg.vnfs) lg.cpu_per_bps[v] = opts.cpu_per_bps;
  return lg;
}

PhysicalGraph operator_like_topology(std::uint64_t seed,
                                     const OperatorTopoOptions& opts) {
  if (opts.n_nodes < 2) throw InvalidModel("operator topology needs >= 2 nodes");
  std::mt19937_64 rng(seed);
  PhysicalGraph pg;

  const int nw = id_width(opts.n_nodes);
  std::vector<Id> nodes;
  for (int i = 0; i < opts.n_nodes; ++i) nodes.push_back(padded("n", i, nw));
  for (const Id& c : nodes) {
    pg.nodes.insert(c);
    pg.node_capacity[c] = opts.node_capacity;
    pg.switch_cpu_per_bps[c] = opts.switch_cpu_per_bps;
  }

  // random recursive tree keeps the mesh connected, extra random pairs
  // push the mean degree up to the target
  std::set<std::pair<int, int>> edges;
  for (int i = 1; i < opts.n_nodes; ++i) {
    int parent = static_cast<int>(rng() % static_cast<std::uint64_t>(i));
    edges.insert({std::min(i, parent), std::max(i, parent)});
  }
  const long target =
      std::max<long>(opts.n_nodes - 1,
                     std::lround(opts.n_nodes * opts.mean_node_degree / 2.0));
  const long max_possible = static_cast<long>(opts.n_nodes) * (opts.n_nodes - 1) / 2;
  long guard = 0;
  while (static_cast<long>(edges.size()) < std::min(target, max_possible) &&
         guard++ < 100 * target) {
    int a = static_cast<int>(rng() % opts.n_nodes);
    int b = static_cast<int>(rng() % opts.n_nodes);
    if (a == b) continue;
    edges.insert({std::min(a, b), std::max(a, b)});
  }
  for (const auto& [a, b] : edges) {
    pg.links.push_back({nodes[a], nodes[b], opts.node_bw_bps, 0.0});
    pg.links.push_back({nodes[b], nodes[a], opts.node_bw_bps, 0.0});
  }

  const int ew = id_width(opts.n_endpoints);
  for (int i = 0; i < opts.n_endpoints; ++i) {
    const Id e = padded("ep", i, ew);
    pg.endpoints.insert(e);
    int a = static_cast<int>(rng() % opts.n_nodes);
    int b = a;
    while (b == a) b = static_cast<int>(rng() % opts.n_nodes);
    pg.links.push_back({e, nodes[a], opts.endpoint_bw_bps, 0.0});
    pg.links.push_back({e, nodes[b], opts.endpoint_bw_bps, 0.0});
  }

  check_connected(pg);
  pg.validate();
  return pg;
}

std::map<std::pair<Id, Id>, double> sample_traffic(std::uint64_t seed,
                                                   const std::set<Id>& endpoints,
                                                   const Id& first_vnf,
                                                   const TrafficOptions& opts) {
  std::mt19937_64 rng(seed);
  std::map<std::pair<Id, Id>, double> flows;
  for (const Id& e : endpoints) {
    const double total = opts.min_bps + canonical(rng) * (opts.max_bps - opts.min_bps);
    flows[{e + "_dn", first_vnf}] = total * opts.downlink_fraction;
    flows[{e + "_up", first_vnf}] = total * (1.0 - opts.downlink_fraction);
  }
  return flows;
}

PhysicalGraph scale_up(const PhysicalGraph& pg, std::uint64_t seed,
                       const ScaleUpOptions& opts) {
  std::mt19937_64 rng(seed);
  PhysicalGraph out;

  double node_bw = 0.0, ep_bw = 0.0;
  for (const Link& l : pg.links) {
    const bool ep = pg.endpoints.count(l.src) || pg.endpoints.count(l.dst);
    (ep ? ep_bw : node_bw) = std::max(ep ? ep_bw : node_bw, l.bandwidth_bps);
  }
  if (node_bw == 0.0) node_bw = 100e9;
  if (ep_bw == 0.0) ep_bw = 10e9;

  // every node becomes a ring
  std::map<Id, std::vector<Id>> ring;
  for (const Id& c : pg.nodes) {
    for (int i = 0; i < opts.ring_size; ++i) {
      const Id m = c + "_r" + std::to_string(i);
      ring[c].push_back(m);
      out.nodes.insert(m);
      out.node_capacity[m] = pg.capacity(c);
      auto rho = pg.switch_cpu_per_bps.find(c);
      if (rho != pg.switch_cpu_per_bps.end()) out.switch_cpu_per_bps[m] = rho->second;
    }
    for (int i = 0; i < opts.ring_size; ++i) {
      const Id& a = ring[c][i];
      const Id& b = ring[c][(i + 1) % opts.ring_size];
      out.links.push_back({a, b, node_bw, 0.0});
      out.links.push_back({b, a, node_bw, 0.0});
    }
  }

  // original links reattach between ring members picked round-robin; the
  // two directions of a pair stay between the same members
  std::map<Id, int> rr;
  std::map<std::pair<Id, Id>, std::pair<Id, Id>> assigned;
  std::vector<Link> sorted_links = pg.links;
  std::sort(sorted_links.begin(), sorted_links.end(), [](const Link& a, const Link& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  for (const Link& l : sorted_links) {
    const bool src_node = pg.nodes.count(l.src) > 0;
    const bool dst_node = pg.nodes.count(l.dst) > 0;
    if (src_node && dst_node) {
      auto rev = assigned.find({l.dst, l.src});
      Id a, b;
      if (rev != assigned.end()) {
        a = rev->second.second;
        b = rev->second.first;
      } else {
        a = ring[l.src][rr[l.src]++ % opts.ring_size];
        b = ring[l.dst][rr[l.dst]++ % opts.ring_size];
      }
      assigned[{l.src, l.dst}] = {a, b};
      out.links.push_back({a, b, l.bandwidth_bps, l.delay_s});
    } else if (dst_node) {  // endpoint attachment
      out.endpoints.insert(l.src);
      const Id m = ring[l.dst][rr[l.dst]++ % opts.ring_size];
      out.links.push_back({l.src, m, l.bandwidth_bps, l.delay_s});
    } else if (src_node) {
      out.endpoints.insert(l.dst);
      const Id m = ring[l.src][rr[l.src]++ % opts.ring_size];
      out.links.push_back({m, l.dst, l.bandwidth_bps, l.delay_s});
    }
  }
  for (const Id& e : pg.endpoints) out.endpoints.insert(e);
  out.max_delay_s = pg.max_delay_s;

  // the added endpoints, each wired to two random ring members
  std::vector<Id> all_nodes(out.nodes.begin(), out.nodes.end());
  const int ew = id_width(opts.added_endpoints);
  for (int i = 0; i < opts.added_endpoints; ++i) {
    const Id e = padded("xep", i, ew);
    out.endpoints.insert(e);
    size_t a = static_cast<size_t>(rng() % all_nodes.size());
    size_t b = a;
    while (b == a) b = static_cast<size_t>(rng() % all_nodes.size());
    out.links.push_back({e, all_nodes[a], ep_bw, 0.0});
    out.links.push_back({e, all_nodes[b], ep_bw, 0.0});
  }

  out.validate();
  return out;
}

EnergyModel make_energy_model(const PhysicalGraph& pg, const EnergyOptions& opts) {
  EnergyModel em;
  for (const Id& c : pg.nodes) em.idle_power_w[c] = opts.node_idle_w;
  em.proc_w_per_cpu = opts.proc_w_per_cpu;
  em.switch_w_per_bps = opts.switch_w_per_bps;
  em.link_w_per_bps = opts.link_w_per_bps;
  if (opts.vnf_overhead_w > 0) {
    // spelled out per placement so the document stays explicit
    for (const Id& c : pg.nodes)
      for (const char* v : {"eNB", "P/S-GW", "MME", "HSS"})
        em.vnf_overhead_w[{c, v}] = opts.vnf_overhead_w;
  }
  return em;
}

Scenario make_operator_scenario(std::uint64_t seed,
                                const OperatorScenarioOptions& opts) {
  PhysicalGraph base = operator_like_topology(seed, opts.topo);

  // per physical endpoint totals
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::map<Id, double> totals;
  for (const Id& e : base.endpoints)
    totals[e] = opts.traffic.min_bps +
                canonical(rng) * (opts.traffic.max_bps - opts.traffic.min_bps);

  if (opts.scaled_up) {
    const double t_orig = [&] {
      double s = 0.0;
      for (const auto& [e, t] : totals) {
        (void)e;
        s += t;
      }
      return s;
    }();
    base = scale_up(base, seed ^ 0xda942042e4dd58b5ULL, opts.scale);
    // sample the added endpoints from the same distribution, then rescale
    // them so the grand total lands exactly on traffic_factor x original
    std::map<Id, double> added;
    double added_sum = 0.0;
    for (const Id& e : base.endpoints) {
      if (totals.count(e)) continue;
      const double t = opts.traffic.min_bps +
                       canonical(rng) * (opts.traffic.max_bps - opts.traffic.min_bps);
      added[e] = t;
      added_sum += t;
    }
    const double want = (opts.scale.traffic_factor - 1.0) * t_orig;
    const double k = added_sum > 0 ? want / added_sum : 0.0;
    for (auto& [e, t] : added) totals[e] = t * k;
  }

  // split each physical endpoint into two unidirectional logical ones
  Scenario s;
  s.label = opts.label + (opts.scaled_up ? "-scaled" : "");
  s.physical.nodes = base.nodes;
  s.physical.node_capacity = base.node_capacity;
  s.physical.switch_cpu_per_bps = base.switch_cpu_per_bps;
  for (const Link& l : base.links) {
    if (base.endpoints.count(l.src)) {
      s.physical.links.push_back({l.src + "_dn", l.dst, l.bandwidth_bps, l.delay_s});
      s.physical.links.push_back({l.src + "_up", l.dst, l.bandwidth_bps, l.delay_s});
    } else if (base.endpoints.count(l.dst)) {
      s.physical.links.push_back({l.src, l.dst + "_dn", l.bandwidth_bps, l.delay_s});
      s.physical.links.push_back({l.src, l.dst + "_up", l.bandwidth_bps, l.delay_s});
    } else {
      s.physical.links.push_back(l);
    }
  }
  for (const Id& e : base.endpoints) {
    s.physical.endpoints.insert(e + "_dn");
    s.physical.endpoints.insert(e + "_up");
  }

  s.logical = vepc_fixture(s.physical.endpoints, opts.vepc);
  const double dn = opts.traffic.downlink_fraction;
  for (const auto& [e, t] : totals) {
    s.logical.injected_bps[{e + "_dn", "eNB"}] = t * dn;
    s.logical.injected_bps[{e + "_up", "eNB"}] = t * (1.0 - dn);
  }

  s.energy = make_energy_model(s.physical, opts.energy);
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// JSON document round-trip

namespace {

const json* find(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

const json& need(const json& j, const char* key, const std::string& path) {
  const json* f = find(j, key);
  if (!f) throw SchemaViolation(path + "/" + key, "missing required field");
  return *f;
}

double need_num(const json& j, const char* key, const std::string& path) {
  const json& f = need(j, key, path);
  if (!f.is_number())
    throw SchemaViolation(path + "/" + key, "expected a number");
  return f.get<double>();
}

double need_nonneg(const json& j, const char* key, const std::string& path) {
  const double v = need_num(j, key, path);
  if (v < 0) throw SchemaViolation(path + "/" + key, "must be nonnegative");
  return v;
}

std::string need_str(const json& j, const char* key, const std::string& path) {
  const json& f = need(j, key, path);
  if (!f.is_string())
    throw SchemaViolation(path + "/" + key, "expected a string");
  return f.get<std::string>();
}

const json& need_array(const json& j, const char* key, const std::string& path) {
  const json& f = need(j, key, path);
  if (!f.is_array()) throw SchemaViolation(path + "/" + key, "expected an array");
  return f;
}

}  // namespace

std::string save_scenario(const Scenario& s) {
  json j;
  j["schema_version"] = 1;
  j["label"] = s.label;
  j["traffic_multiplier"] = s.traffic_multiplier;

  json lg;
  lg["endpoints"] = json::array();
  for (const Id& e : s.logical.endpoints) lg["endpoints"].push_back(e);
  lg["vnfs"] = json::array();
  for (const Id& v : s.logical.vnfs) lg["vnfs"].push_back(v);
  lg["injected_flows"] = json::array();
  for (const auto& [key, rate] : s.logical.injected_bps)
    lg["injected_flows"].push_back(
        {{"endpoint", key.first}, {"vnf", key.second}, {"rate_bps", rate}});
  lg["chi"] = json::array();
  for (const auto& [key, ratio] : s.logical.chi)
    lg["chi"].push_back({{"origin", std::get<0>(key)},
                         {"at", std::get<1>(key)},
                         {"next", std::get<2>(key)},
                         {"ratio", ratio}});
  lg["processing_delay_s"] = json::array();
  for (const auto& [v, d] : s.logical.processing_delay_s)
    lg["processing_delay_s"].push_back({{"vnf", v}, {"seconds", d}});
  lg["cpu_per_bps"] = json::array();
  for (const auto& [v, r] : s.logical.cpu_per_bps)
    lg["cpu_per_bps"].push_back({{"vnf", v}, {"value", r}});
  j["logical"] = std::move(lg);

  json pg;
  pg["endpoints"] = json::array();
  for (const Id& e : s.physical.endpoints) pg["endpoints"].push_back(e);
  pg["nodes"] = json::array();
  for (const Id& c : s.physical.nodes)
    pg["nodes"].push_back({{"id", c},
                           {"capacity", s.physical.capacity(c)},
                           {"switch_cpu_per_bps", s.physical.switch_cpu(c)}});
  pg["links"] = json::array();
  std::vector<Link> links = s.physical.links;
  std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
    return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
  });
  for (const Link& l : links)
    pg["links"].push_back({{"src", l.src},
                           {"dst", l.dst},
                           {"bandwidth_bps", l.bandwidth_bps},
                           {"delay_s", l.delay_s}});
  pg["max_delay_s"] = json::array();
  for (const auto& [e, d] : s.physical.max_delay_s)
    pg["max_delay_s"].push_back({{"endpoint", e}, {"seconds", d}});
  j["physical"] = std::move(pg);

  json em;
  em["idle_power_w"] = json::array();
  for (const auto& [c, w] : s.energy.idle_power_w)
    em["idle_power_w"].push_back({{"node", c}, {"watts", w}});
  em["vnf_overhead_w"] = json::array();
  for (const auto& [key, w] : s.energy.vnf_overhead_w)
    em["vnf_overhead_w"].push_back(
        {{"node", key.first}, {"vnf", key.second}, {"watts", w}});
  em["proc_w_per_cpu"] = s.energy.proc_w_per_cpu;
  em["proc_w_per_cpu_overrides"] = json::array();
  for (const auto& [c, w] : s.energy.proc_w_per_cpu_override)
    em["proc_w_per_cpu_overrides"].push_back({{"node", c}, {"value", w}});
  em["switch_w_per_bps"] = s.energy.switch_w_per_bps;
  em["switch_w_per_bps_overrides"] = json::array();
  for (const auto& [c, w] : s.energy.switch_w_per_bps_override)
    em["switch_w_per_bps_overrides"].push_back({{"node", c}, {"value", w}});
  em["link_w_per_bps"] = s.energy.link_w_per_bps;
  em["link_w_per_bps_overrides"] = json::array();
  for (const auto& [key, w] : s.energy.link_w_per_bps_override)
    em["link_w_per_bps_overrides"].push_back(
        {{"src", key.first}, {"dst", key.second}, {"value", w}});
  j["energy"] = std::move(em);

  return j.dump(2) + "\n";
}

Scenario load_scenario(const std::string& document) {
  json j;
  try {
    j = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SchemaViolation("/", std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaViolation("/", "document must be an object");
  const long version = static_cast<long>(need_num(j, "schema_version", ""));
  if (version != 1)
    throw SchemaViolation("/schema_version",
                          "unsupported version " + std::to_string(version));

  Scenario s;
  s.label = need_str(j, "label", "");
  s.traffic_multiplier = need_num(j, "traffic_multiplier", "");
  if (s.traffic_multiplier <= 0)
    throw SchemaViolation("/traffic_multiplier", "must be positive");

  const json& lg = need(j, "logical", "");
  {
    const std::string base = "/logical";
    for (const auto& e : need_array(lg, "endpoints", base))
      s.logical.endpoints.insert(e.get<std::string>());
    for (const auto& v : need_array(lg, "vnfs", base))
      s.logical.vnfs.insert(v.get<std::string>());
    const json& inj = need_array(lg, "injected_flows", base);
    for (size_t i = 0; i < inj.size(); ++i) {
      const std::string p = base + "/injected_flows/" + std::to_string(i);
      s.logical.injected_bps[{need_str(inj[i], "endpoint", p),
                              need_str(inj[i], "vnf", p)}] =
          need_nonneg(inj[i], "rate_bps", p);
    }
    const json& chi = need_array(lg, "chi", base);
    for (size_t i = 0; i < chi.size(); ++i) {
      const std::string p = base + "/chi/" + std::to_string(i);
      s.logical.chi[{need_str(chi[i], "origin", p), need_str(chi[i], "at", p),
                     need_str(chi[i], "next", p)}] = need_nonneg(chi[i], "ratio", p);
    }
    if (const json* pd = find(lg, "processing_delay_s"))
      for (size_t i = 0; i < pd->size(); ++i) {
        const std::string p = base + "/processing_delay_s/" + std::to_string(i);
        s.logical.processing_delay_s[need_str((*pd)[i], "vnf", p)] =
            need_nonneg((*pd)[i], "seconds", p);
      }
    if (const json* cp = find(lg, "cpu_per_bps"))
      for (size_t i = 0; i < cp->size(); ++i) {
        const std::string p = base + "/cpu_per_bps/" + std::to_string(i);
        s.logical.cpu_per_bps[need_str((*cp)[i], "vnf", p)] =
            need_nonneg((*cp)[i], "value", p);
      }
  }

  const json& pg = need(j, "physical", "");
  {
    const std::string base = "/physical";
    for (const auto& e : need_array(pg, "endpoints", base))
      s.physical.endpoints.insert(e.get<std::string>());
    const json& nodes = need_array(pg, "nodes", base);
    for (size_t i = 0; i < nodes.size(); ++i) {
      const std::string p = base + "/nodes/" + std::to_string(i);
      const Id c = need_str(nodes[i], "id", p);
      s.physical.nodes.insert(c);
      s.physical.node_capacity[c] = need_nonneg(nodes[i], "capacity", p);
      s.physical.switch_cpu_per_bps[c] =
          need_nonneg(nodes[i], "switch_cpu_per_bps", p);
    }
    const json& links = need_array(pg, "links", base);
    for (size_t i = 0; i < links.size(); ++i) {
      const std::string p = base + "/links/" + std::to_string(i);
      Link l;
      l.src = need_str(links[i], "src", p);
      l.dst = need_str(links[i], "dst", p);
      l.bandwidth_bps = need_num(links[i], "bandwidth_bps", p);
      if (l.bandwidth_bps <= 0)
        throw SchemaViolation(p + "/bandwidth_bps", "must be positive");
      l.delay_s = need_nonneg(links[i], "delay_s", p);
      s.physical.links.push_back(l);
    }
    if (const json* md = find(pg, "max_delay_s"))
      for (size_t i = 0; i < md->size(); ++i) {
        const std::string p = base + "/max_delay_s/" + std::to_string(i);
        s.physical.max_delay_s[need_str((*md)[i], "endpoint", p)] =
            need_nonneg((*md)[i], "seconds", p);
      }
  }

  const json& em = need(j, "energy", "");
  {
    const std::string base = "/energy";
    const json& idle = need_array(em, "idle_power_w", base);
    for (size_t i = 0; i < idle.size(); ++i) {
      const std::string p = base + "/idle_power_w/" + std::to_string(i);
      s.energy.idle_power_w[need_str(idle[i], "node", p)] =
          need_nonneg(idle[i], "watts", p);
    }
    if (const json* oh = find(em, "vnf_overhead_w"))
      for (size_t i = 0; i < oh->size(); ++i) {
        const std::string p = base + "/vnf_overhead_w/" + std::to_string(i);
        s.energy.vnf_overhead_w[{need_str((*oh)[i], "node", p),
                                 need_str((*oh)[i], "vnf", p)}] =
            need_nonneg((*oh)[i], "watts", p);
      }
    s.energy.proc_w_per_cpu = need_nonneg(em, "proc_w_per_cpu", base);
    s.energy.switch_w_per_bps = need_nonneg(em, "switch_w_per_bps", base);
    s.energy.link_w_per_bps = need_nonneg(em, "link_w_per_bps", base);
    if (const json* ov = find(em, "proc_w_per_cpu_overrides"))
      for (size_t i = 0; i < ov->size(); ++i) {
        const std::string p = base + "/proc_w_per_cpu_overrides/" + std::to_string(i);
        s.energy.proc_w_per_cpu_override[need_str((*ov)[i], "node", p)] =
            need_nonneg((*ov)[i], "value", p);
      }
    if (const json* ov = find(em, "switch_w_per_bps_overrides"))
      for (size_t i = 0; i < ov->size(); ++i) {
        const std::string p =
            base + "/switch_w_per_bps_overrides/" + std::to_string(i);
        s.energy.switch_w_per_bps_override[need_str((*ov)[i], "node", p)] =
            need_nonneg((*ov)[i], "value", p);
      }
    if (const json* ov = find(em, "link_w_per_bps_overrides"))
      for (size_t i = 0; i < ov->size(); ++i) {
        const std::string p = base + "/link_w_per_bps_overrides/" + std::to_string(i);
        s.energy.link_w_per_bps_override[{need_str((*ov)[i], "src", p),
                                          need_str((*ov)[i], "dst", p)}] =
            need_nonneg((*ov)[i], "value", p);
      }
  }

  try {
    s.validate();
  } catch (const Error& e) {
    throw SchemaViolation("/", e.what());
  }
  return s;
}

}  // namespace optiloop
