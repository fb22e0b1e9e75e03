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

#include "optiloop/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "optiloop/baselines.hpp"
#include "optiloop/errors.hpp"

namespace optiloop {

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct Accum {
  double lhs = 0.0;
  double scale = 0.0;
  void add(double coef, double value) {
    lhs += coef * value;
    scale += std::abs(coef * value);
  }
};

}  // namespace

std::vector<Violation> validate_solution(const NetworkConfig& cfg,
                                         const Solution& sol,
                                         const LogicalGraph& lg,
                                         const PhysicalGraph& pg,
                                         const EnergyModel& em, double tol) {
  (void)em;  // energy model not needed for constraint rows
  std::vector<Violation> out;
  const auto comms = commodities(lg);

  auto slack = [&](double magnitude) { return tol + 1e-9 * magnitude; };
  auto flag = [&](RowTag tag, const std::string& where, double amount) {
    out.push_back({tag, where, amount});
  };

  auto tau = [&](const Id& i, const Id& j, const FlowKey& k) {
    auto it = sol.tau.find({LinkKey{i, j}, k});
    return it == sol.tau.end() ? 0.0 : it->second;
  };
  auto tr = [&](const Id& c, const FlowKey& k) {
    auto it = sol.transit.find({c, k});
    return it == sol.transit.end() ? 0.0 : it->second;
  };
  auto pr = [&](const Id& c, const FlowKey& k) {
    auto it = sol.processed.find({c, k});
    return it == sol.processed.end() ? 0.0 : it->second;
  };

  std::map<Id, std::vector<const Link*>> in_links, out_links;
  for (const Link& l : pg.links) {
    in_links[l.dst].push_back(&l);
    out_links[l.src].push_back(&l);
  }

  // conservation rows
  for (const Id& c : pg.nodes) {
    for (const FlowKey& k : comms) {
      Accum in;
      for (const Link* l : in_links[c]) in.add(1.0, tau(l->src, l->dst, k));
      if (!k.is_injection()) {
        for (const FlowKey& gen : comms) {
          if (gen.endpoint != k.endpoint || gen.to_vnf != k.from_vnf) continue;
          const Id& origin = gen.is_injection() ? gen.endpoint : gen.from_vnf;
          const double ratio = lg.chi_at(origin, k.from_vnf, k.to_vnf);
          if (ratio > 0) in.add(ratio, pr(c, gen));
        }
      }
      in.add(-1.0, tr(c, k));
      in.add(-1.0, pr(c, k));
      if (std::abs(in.lhs) > slack(in.scale))
        flag(RowTag::FlowIn, c + "|" + k.endpoint + "," + k.from_vnf + "->" + k.to_vnf,
             std::abs(in.lhs));

      Accum outb;
      for (const Link* l : out_links[c]) outb.add(1.0, tau(l->src, l->dst, k));
      outb.add(-1.0, tr(c, k));
      if (std::abs(outb.lhs) > slack(outb.scale))
        flag(RowTag::FlowOut,
             c + "|" + k.endpoint + "," + k.from_vnf + "->" + k.to_vnf,
             std::abs(outb.lhs));
    }
  }

  // link activation and bandwidth
  for (const Link& l : pg.links) {
    const double x = cfg.active_links.count({l.src, l.dst}) ? 1.0 : 0.0;
    double total = 0.0, scale = 0.0;
    for (const FlowKey& k : comms) {
      const double v = tau(l.src, l.dst, k);
      total += v;
      scale += std::abs(v);
    }
    const double cap = x * l.bandwidth_bps;
    if (total > cap + slack(scale + cap))
      flag(RowTag::CapacityL, l.src + "->" + l.dst, total - cap);
    if (x > 0) {
      if (pg.nodes.count(l.src) && !cfg.active_nodes.count(l.src))
        flag(RowTag::EnableLink, l.src + "->" + l.dst, 1.0);
      if (pg.nodes.count(l.dst) && !cfg.active_nodes.count(l.dst))
        flag(RowTag::EnableLink, l.src + "->" + l.dst, 1.0);
    }
  }

  // placements
  for (const auto& [c, v] : cfg.placements)
    if (!cfg.active_nodes.count(c)) flag(RowTag::EnableCore, c + "," + v, 1.0);

  for (const Id& c : pg.nodes) {
    const double k_c = pg.capacity(c);
    for (const FlowKey& k : comms) {
      const double p = pr(c, k);
      const double lim = cfg.placements.count({c, k.to_vnf}) ? k_c : 0.0;
      if (p > lim + slack(p + lim))
        flag(RowTag::HonorDelta,
             c + "|" + k.endpoint + "," + k.from_vnf + "->" + k.to_vnf, p - lim);
    }
    Accum used;
    for (const FlowKey& k : comms) used.add(lg.cpu(k.to_vnf), pr(c, k));
    const double rho = pg.switch_cpu(c);
    if (rho > 0)
      for (const Link* l : out_links[c])
        for (const FlowKey& k : comms) used.add(rho, tau(l->src, l->dst, k));
    if (used.lhs > k_c + slack(used.scale + k_c))
      flag(RowTag::CapacityC, c, used.lhs - k_c);
  }

  // delay bound per endpoint, when configured
  for (const auto& [e, dmax] : pg.max_delay_s) {
    double injected = 0.0;
    for (const Id& v : lg.vnfs) injected += lg.injected(e, v);
    if (injected <= 0) continue;
    Accum acc;
    for (const Link& l : pg.links) {
      if (l.delay_s <= 0) continue;
      for (const FlowKey& k : comms)
        if (k.endpoint == e) acc.add(l.delay_s / injected, tau(l.src, l.dst, k));
    }
    for (const Id& c : pg.nodes)
      for (const FlowKey& k : comms) {
        if (k.endpoint != e) continue;
        const double d = lg.proc_delay(k.to_vnf);
        if (d > 0) acc.add(d / injected, pr(c, k));
      }
    if (acc.lhs > dmax + slack(acc.scale + dmax))
      flag(RowTag::Delay, e, acc.lhs - dmax);
  }

  // injection matching
  for (const auto& [key, rate] : lg.injected_bps) {
    if (rate <= 0) continue;
    const auto& [e, v] = key;
    const FlowKey k{e, v, v};
    Accum acc;
    for (const Link& l : pg.links)
      if (l.src == e) acc.add(1.0, tau(l.src, l.dst, k));
    if (std::abs(acc.lhs - rate) > slack(acc.scale + rate))
      flag(RowTag::Match, e + "," + v, std::abs(acc.lhs - rate));
  }

  return out;
}

double spare_ccat(const NetworkConfig& cfg, const Solution& sol,
                  const PhysicalGraph& pg, const LogicalGraph& lg) {
  std::map<Id, double> used;
  for (const auto& [key, p] : sol.processed)
    used[key.first] += lg.cpu(key.second.to_vnf) * p;
  for (const auto& [key, t] : sol.tau) {
    const Id& src = key.first.src;
    if (pg.nodes.count(src)) used[src] += pg.switch_cpu(src) * t;
  }
  double spare = 0.0;
  for (const Id& c : cfg.active_nodes) {
    auto it = used.find(c);
    spare += pg.capacity(c) - (it == used.end() ? 0.0 : it->second);
  }
  return std::max(0.0, spare);
}

double mean_hops(const Solution& sol, const LogicalGraph& lg,
                 const PhysicalGraph& pg) {
  (void)pg;
  double carried = 0.0;
  for (const auto& [key, t] : sol.tau) {
    (void)key;
    carried += t;
  }
  double injected = 0.0;
  for (const auto& [key, rate] : lg.injected_bps) {
    (void)key;
    injected += rate;
  }
  return injected > 0 ? carried / injected : 0.0;
}

namespace {

RunResult make_result(const std::string& strategy, const Scenario& sc,
                      double multiplier, const NetworkConfig& cfg,
                      const Solution& sol, const LogicalGraph& scaled_lg,
                      double all_on_energy) {
  RunResult r;
  r.strategy = strategy;
  r.scenario_label = sc.label;
  r.traffic_multiplier = multiplier;
  r.breakdown = energy_breakdown(sol, sc.energy, sc.physical, scaled_lg);
  r.energy_total_w = r.breakdown.total();
  r.savings_vs_all_on =
      all_on_energy > 0 ? 1.0 - r.energy_total_w / all_on_energy : 0.0;
  r.spare_ccat = spare_ccat(cfg, sol, sc.physical, scaled_lg);
  r.mean_hops = mean_hops(sol, scaled_lg, sc.physical);
  for (const auto& [node, vnf] : cfg.placements) {
    (void)node;
    r.vnf_instances[vnf] += 1;
  }
  double processed = 0.0;
  for (const auto& [key, p] : sol.processed) {
    (void)key;
    processed += p;
  }
  r.active_nodes = static_cast<int>(cfg.active_nodes.size());
  r.active_links = static_cast<int>(cfg.active_links.size());
  r.placements = static_cast<int>(cfg.placements.size());
  r.per_node_traffic_bps =
      cfg.active_nodes.empty() ? 0.0 : processed / double(cfg.active_nodes.size());
  return r;
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  a ^= b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2);
  return a;
}

}  // namespace

std::vector<RunResult> run_experiment(const Scenario& scenario,
                                      const ExperimentOptions& opts) {
  scenario.validate();
  std::vector<RunResult> rows;

  for (size_t mi = 0; mi < opts.multipliers.size(); ++mi) {
    const double mult = opts.multipliers[mi];
    const LogicalGraph lg =
        scale_demand(scenario.logical, mult * scenario.traffic_multiplier);
    const PhysicalGraph& pg = scenario.physical;
    const EnergyModel& em = scenario.energy;

    // the all-on energy is every cell's savings denominator; priced via
    // the same breakdown as the cells so the all-on row's savings is an
    // exact zero
    double all_on_energy = 0.0;
    NetworkConfig all_cfg;
    Solution all_sol;
    std::string all_status = "ok";
    try {
      std::tie(all_cfg, all_sol) = all_on(lg, pg, em);
      all_on_energy = energy_breakdown(all_sol, em, pg, lg).total();
    } catch (const Error& e) {
      all_status = std::string("error: ") + e.what();
    }

    for (const std::string& strat : opts.strategies) {
      RunResult row;
      row.strategy = strat;
      row.scenario_label = scenario.label;
      row.traffic_multiplier = mult;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        if (all_status != "ok") throw InfeasibleDemand(all_status);
        NetworkConfig cfg;
        Solution sol;
        LoopStats stats;
        if (strat == "all_on") {
          cfg = all_cfg;
          sol = all_sol;
          stats.lp_solves = 1;
        } else if (strat == "optiloop") {
          cfg = all_cfg;
          cfg.rng_seed = mix(opts.seed, mi + 1);
          cfg = control_loop(cfg, lg, pg, em,
                             std::vector<double>(opts.rounds, 1.0), &stats);
          SolveReport rep = evaluate_config(cfg, lg, pg, em);
          if (rep.status != SolveStatus::Optimal)
            throw Error("final configuration unexpectedly infeasible");
          sol = *rep.solution;
        } else if (strat == "consolidation") {
          cfg = consolidation(lg, pg, em);
          SolveReport rep = evaluate_config(cfg, lg, pg, em);
          if (rep.status != SolveStatus::Optimal)
            throw Error("consolidation configuration infeasible");
          sol = *rep.solution;
          stats.lp_solves = 1;
        } else if (strat == "optimal") {
          auto [ocfg, rep] = optimal(lg, pg, em, opts.exact);
          cfg = ocfg;
          sol = *rep.solution;
          stats.lp_solves = rep.lp_solve_count;
        } else {
          throw Error("unknown strategy " + strat);
        }

        auto violations = validate_solution(cfg, sol, lg, pg, em);
        if (!violations.empty()) {
          row.status = "validation_failed: " +
                       std::string(to_string(violations.front().tag)) + "[" +
                       violations.front().where + "]";
        } else {
          row = make_result(strat, scenario, mult, cfg, sol, lg, all_on_energy);
          row.lp_solves = stats.lp_solves;
          row.iis_computations = stats.iis_computations;
        }
      } catch (const Error& e) {
        row.status = std::string("error: ") + e.what();
      }
      row.wall_time_s =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count();
      rows.push_back(std::move(row));
    }
  }

  std::sort(rows.begin(), rows.end(), [](const RunResult& a, const RunResult& b) {
    if (a.strategy != b.strategy) return a.strategy < b.strategy;
    return a.traffic_multiplier < b.traffic_multiplier;
  });
  return rows;
}

namespace {

std::string instances_str(const std::map<Id, int>& m) {
  std::string out;
  for (const auto& [v, n] : m) {
    if (!out.empty()) out += ";";
    out += v + ":" + std::to_string(n);
  }
  return out;
}

}  // namespace

std::string results_to_csv(const std::vector<RunResult>& rows,
                           bool include_timing) {
  std::string out =
      "strategy,scenario,traffic_multiplier,status,energy_w,savings_vs_all_on,"
      "spare_ccat,mean_hops,idle_w,overhead_w,proc_w,switch_w,link_w,"
      "active_nodes,active_links,placements,vnf_instances,per_node_traffic_bps,"
      "lp_solves";
  if (include_timing) out += ",wall_time_s";
  out += "\n";
  for (const RunResult& r : rows) {
    out += r.strategy + "," + r.scenario_label + "," + fmt(r.traffic_multiplier) +
           "," + r.status + "," + fmt(r.energy_total_w) + "," +
           fmt(r.savings_vs_all_on) + "," + fmt(r.spare_ccat) + "," +
           fmt(r.mean_hops) + "," + fmt(r.breakdown.idle_w) + "," +
           fmt(r.breakdown.overhead_w) + "," + fmt(r.breakdown.proc_w) + "," +
           fmt(r.breakdown.switch_w) + "," + fmt(r.breakdown.link_w) + "," +
           std::to_string(r.active_nodes) + "," + std::to_string(r.active_links) +
           "," + std::to_string(r.placements) + "," + instances_str(r.vnf_instances) +
           "," + fmt(r.per_node_traffic_bps) + "," + std::to_string(r.lp_solves);
    if (include_timing) out += "," + fmt(r.wall_time_s);
    out += "\n";
  }
  return out;
}

std::string results_to_json(const std::vector<RunResult>& rows,
                            bool include_timing) {
  json arr = json::array();
  for (const RunResult& r : rows) {
    json j;
    j["schema_version"] = 1;
    j["strategy"] = r.strategy;
    j["scenario"] = r.scenario_label;
    j["traffic_multiplier"] = r.traffic_multiplier;
    j["status"] = r.status;
    j["energy_w"] = r.energy_total_w;
    j["savings_vs_all_on"] = r.savings_vs_all_on;
    j["spare_ccat"] = r.spare_ccat;
    j["mean_hops"] = r.mean_hops;
    j["breakdown"] = {{"idle_w", r.breakdown.idle_w},
                      {"overhead_w", r.breakdown.overhead_w},
                      {"proc_w", r.breakdown.proc_w},
                      {"switch_w", r.breakdown.switch_w},
                      {"link_w", r.breakdown.link_w}};
    j["active_nodes"] = r.active_nodes;
    j["active_links"] = r.active_links;
    j["placements"] = r.placements;
    json inst = json::object();
    for (const auto& [v, n] : r.vnf_instances) inst[v] = n;
    j["vnf_instances"] = inst;
    j["per_node_traffic_bps"] = r.per_node_traffic_bps;
    j["lp_solves"] = r.lp_solves;
    if (include_timing) j["wall_time_s"] = r.wall_time_s;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::string solution_to_json(const NetworkConfig& cfg, const Solution& sol) {
  json j;
  j["schema_version"] = 1;
  json c;
  c["active_nodes"] = json::array();
  for (const Id& n : cfg.active_nodes) c["active_nodes"].push_back(n);
  c["active_links"] = json::array();
  for (const auto& [i, k] : cfg.active_links)
    c["active_links"].push_back({{"src", i}, {"dst", k}});
  c["placements"] = json::array();
  for (const auto& [n, v] : cfg.placements)
    c["placements"].push_back({{"node", n}, {"vnf", v}});
  j["config"] = std::move(c);

  json s;
  auto flow = [](const FlowKey& k) {
    return json{{"endpoint", k.endpoint}, {"from", k.from_vnf}, {"to", k.to_vnf}};
  };
  s["objective_w"] = sol.objective_w;
  s["tau"] = json::array();
  for (const auto& [key, v] : sol.tau)
    s["tau"].push_back({{"src", key.first.src},
                        {"dst", key.first.dst},
                        {"flow", flow(key.second)},
                        {"value", v}});
  s["transit"] = json::array();
  for (const auto& [key, v] : sol.transit)
    s["transit"].push_back(
        {{"node", key.first}, {"flow", flow(key.second)}, {"value", v}});
  s["processed"] = json::array();
  for (const auto& [key, v] : sol.processed)
    s["processed"].push_back(
        {{"node", key.first}, {"flow", flow(key.second)}, {"value", v}});
  j["solution"] = std::move(s);
  return j.dump(2) + "\n";
}

std::pair<NetworkConfig, Solution> solution_from_json(const std::string& doc) {
  json j;
  try {
    j = json::parse(doc);
  } catch (const json::parse_error& e) {
    throw SchemaViolation("/", std::string("not valid JSON: ") + e.what());
  }
  NetworkConfig cfg;
  Solution sol;
  const json& c = j.at("config");
  for (const auto& n : c.at("active_nodes")) cfg.active_nodes.insert(n.get<Id>());
  for (const auto& l : c.at("active_links"))
    cfg.active_links.insert({l.at("src").get<Id>(), l.at("dst").get<Id>()});
  for (const auto& p : c.at("placements"))
    cfg.placements.insert({p.at("node").get<Id>(), p.at("vnf").get<Id>()});
  for (const Id& n : cfg.active_nodes) sol.y[n] = 1.0;
  for (const auto& l : cfg.active_links) sol.x[l] = 1.0;
  for (const auto& p : cfg.placements) sol.delta[p] = 1.0;

  const json& s = j.at("solution");
  sol.objective_w = s.at("objective_w").get<double>();
  auto flow = [](const json& f) {
    return FlowKey{f.at("endpoint").get<Id>(), f.at("from").get<Id>(),
                   f.at("to").get<Id>()};
  };
  for (const auto& t : s.at("tau"))
    sol.tau[{LinkKey{t.at("src").get<Id>(), t.at("dst").get<Id>()},
             flow(t.at("flow"))}] = t.at("value").get<double>();
  for (const auto& t : s.at("transit"))
    sol.transit[{t.at("node").get<Id>(), flow(t.at("flow"))}] =
        t.at("value").get<double>();
  for (const auto& t : s.at("processed"))
    sol.processed[{t.at("node").get<Id>(), flow(t.at("flow"))}] =
        t.at("value").get<double>();
  sol.integral = true;
  return {cfg, sol};
}

}  // namespace optiloop
