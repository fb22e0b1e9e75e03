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

#include "optiloop/loop.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "optiloop/errors.hpp"

namespace optiloop {

namespace {

constexpr double kRelaxEps = 1e-12;

// Deterministic uniform double in [0,1) from the raw generator output.
double canonical(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Index drawn with probability proportional to the weights; uniform over
// all candidates when the total mass is zero.
size_t weighted_pick(std::mt19937_64& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += std::max(0.0, w);
  const double u = canonical(rng);
  if (total <= kRelaxEps) return static_cast<size_t>(u * double(weights.size()));
  double acc = 0.0;
  const double target = u * total;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += std::max(0.0, weights[i]);
    if (target < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace

void NetworkConfig::validate(const PhysicalGraph& pg) const {
  for (const auto& [c, v] : placements) {
    (void)v;
    if (!active_nodes.count(c))
      throw InvalidModel("placement on inactive node " + c);
  }
  for (const auto& [i, j] : active_links) {
    if (pg.nodes.count(i) && !active_nodes.count(i))
      throw InvalidModel("active link from inactive node " + i);
    if (pg.nodes.count(j) && !active_nodes.count(j))
      throw InvalidModel("active link to inactive node " + j);
    if (!pg.has_link(i, j))
      throw InvalidModel("active link " + i + "->" + j + " not in the graph");
  }
  for (const Id& c : active_nodes)
    if (!pg.nodes.count(c)) throw InvalidModel("unknown active node " + c);
}

NetworkConfig config_all_on(const LogicalGraph& lg, const PhysicalGraph& pg) {
  NetworkConfig cfg;
  cfg.active_nodes = pg.nodes;
  for (const Link& l : pg.links) cfg.active_links.insert({l.src, l.dst});
  for (const Id& c : pg.nodes)
    for (const Id& v : lg.vnfs) cfg.placements.insert({c, v});
  return cfg;
}

VariablePolicy policy_from_config(const NetworkConfig& cfg, const LogicalGraph& lg,
                                  const PhysicalGraph& pg) {
  VariablePolicy p;
  p.fallback = VariablePolicy::Setting::fix(0.0);
  for (const Link& l : pg.links)
    p.x[{l.src, l.dst}] = VariablePolicy::Setting::fix(
        cfg.active_links.count({l.src, l.dst}) ? 1.0 : 0.0);
  for (const Id& c : pg.nodes)
    p.y[c] = VariablePolicy::Setting::fix(cfg.active_nodes.count(c) ? 1.0 : 0.0);
  for (const Id& c : pg.nodes)
    for (const Id& v : lg.vnfs)
      p.delta[{c, v}] =
          VariablePolicy::Setting::fix(cfg.placements.count({c, v}) ? 1.0 : 0.0);
  return p;
}

NetworkConfig config_from_solution(const Solution& sol) {
  NetworkConfig cfg;
  for (const auto& [link, v] : sol.x)
    if (v > 0.5) cfg.active_links.insert(link);
  for (const auto& [c, v] : sol.y)
    if (v > 0.5) cfg.active_nodes.insert(c);
  for (const auto& [cv, v] : sol.delta)
    if (v > 0.5) cfg.placements.insert(cv);
  return cfg;
}

LogicalGraph scale_demand(const LogicalGraph& lg, double factor) {
  LogicalGraph scaled = lg;
  for (auto& [key, rate] : scaled.injected_bps) {
    (void)key;
    rate *= factor;
  }
  return scaled;
}

std::pair<NetworkConfig, Solution> initial_solution(const LogicalGraph& lg,
                                                    const PhysicalGraph& pg,
                                                    const EnergyModel& em) {
  NetworkConfig cfg = config_all_on(lg, pg);
  SolveReport rep = evaluate_config(cfg, lg, pg, em);
  if (rep.status != SolveStatus::Optimal)
    throw InfeasibleDemand("demand cannot be served even with everything active");
  return {cfg, *rep.solution};
}

SolveReport evaluate_config(const NetworkConfig& cfg, const LogicalGraph& lg,
                            const PhysicalGraph& pg, const EnergyModel& em) {
  return solve_lp(build_instance(lg, pg, em, policy_from_config(cfg, lg, pg)));
}

namespace {

// Relax the inactive subset of the given families on top of the fixed
// configuration policy.
VariablePolicy relaxed_policy(const NetworkConfig& cfg, const LogicalGraph& lg,
                              const PhysicalGraph& pg, bool relax_links,
                              bool relax_nodes, bool relax_placements) {
  VariablePolicy p = policy_from_config(cfg, lg, pg);
  if (relax_links)
    for (auto& [key, s] : p.x)
      if (!cfg.active_links.count(key)) s = VariablePolicy::Setting::relax();
  if (relax_nodes)
    for (auto& [c, s] : p.y)
      if (!cfg.active_nodes.count(c)) s = VariablePolicy::Setting::relax();
  if (relax_placements)
    for (auto& [key, s] : p.delta)
      if (!cfg.placements.count(key)) s = VariablePolicy::Setting::relax();
  return p;
}

bool fully_active(const NetworkConfig& cfg, const LogicalGraph& lg,
                  const PhysicalGraph& pg) {
  return cfg == config_all_on(lg, pg);
}

// Everything the configuration holds active is relaxed, everything dark is
// pinned to zero.
VariablePolicy saving_policy(const NetworkConfig& cfg, const LogicalGraph& lg,
                             const PhysicalGraph& pg) {
  VariablePolicy p = policy_from_config(cfg, lg, pg);
  for (auto& [key, s] : p.x)
    if (cfg.active_links.count(key)) s = VariablePolicy::Setting::relax();
  for (auto& [c, s] : p.y)
    if (cfg.active_nodes.count(c)) s = VariablePolicy::Setting::relax();
  for (auto& [key, s] : p.delta)
    if (cfg.placements.count(key)) s = VariablePolicy::Setting::relax();
  return p;
}

}  // namespace

NetworkConfig fix_problems(const NetworkConfig& cfg, const LogicalGraph& lg,
                           const PhysicalGraph& pg, const EnergyModel& em,
                           LoopStats* stats) {
  cfg.validate(pg);
  LoopStats local;
  LoopStats& st = stats ? *stats : local;
  std::mt19937_64 rng(cfg.rng_seed);

  NetworkConfig cur = cfg;
  const long guard = static_cast<long>(pg.nodes.size()) *
                         static_cast<long>(lg.vnfs.size()) +
                     static_cast<long>(pg.links.size());
  long steps = 0;

  // one instance shape serves the whole loop: every iteration only moves
  // binary bounds, so the engine can restart from the previous basis
  ProblemInstance fixed =
      build_instance(lg, pg, em, policy_from_config(cur, lg, pg));
  LpSession session(fixed);

  while (true) {
    apply_policy(fixed, policy_from_config(cur, lg, pg));
    session.sync_bounds(fixed);
    st.lp_solves += 1;
    {
      SolveReport rep = session.solve(fixed);
      if (rep.status == SolveStatus::Optimal) {
        st.final_energy = rep.objective;
        return cur;
      }
    }

    IIS iis = compute_iis(fixed);
    st.iis_computations += 1;

    const bool link_issue = iis.has_tag(RowTag::CapacityL);
    const bool node_issue =
        iis.has_tag(RowTag::CapacityC) || iis.has_tag(RowTag::HonorDelta);
    if (!link_issue && !node_issue) {
      if (fully_active(cur, lg, pg))
        throw InfeasibleDemand("infeasible with everything active");
      std::string tags;
      for (const IisRow& r : iis.rows) tags += std::string(" ") + r.name;
      throw NonConvergence("activation cannot help; conflict:" + tags);
    }

    // inactive candidates of each family
    std::vector<LinkKey> link_cands;
    for (const LinkKey& l : fixed.links)
      if (!cur.active_links.count({l.src, l.dst})) link_cands.push_back(l);
    std::vector<std::pair<Id, Id>> place_cands;
    for (const Id& c : pg.nodes)
      for (const Id& v : lg.vnfs)
        if (!cur.placements.count({c, v})) place_cands.push_back({c, v});

    if (link_cands.empty() && place_cands.empty()) {
      if (fully_active(cur, lg, pg))
        throw InfeasibleDemand("infeasible with everything active");
      throw NonConvergence("nothing left to activate");
    }

    auto activate_link = [&](const LinkKey& l) {
      cur.active_links.insert({l.src, l.dst});
      if (pg.nodes.count(l.src)) cur.active_nodes.insert(l.src);
      if (pg.nodes.count(l.dst)) cur.active_nodes.insert(l.dst);
      st.activations += 1;
    };
    auto activate_placement = [&](const std::pair<Id, Id>& cv) {
      cur.active_nodes.insert(cv.first);
      cur.placements.insert(cv);
      st.activations += 1;
    };

    // The link branch comes first. One guidance solve per iteration; when
    // the chosen branch's relaxation is itself infeasible, the blockage
    // lies in the other family, so fall back to a uniform choice there
    // (the same fallback used when all relaxed values are zero).
    auto guidance = [&](bool relax_links, bool relax_nodes,
                        bool relax_placements) {
      apply_policy(fixed,
                   relaxed_policy(cur, lg, pg, relax_links, relax_nodes,
                                  relax_placements));
      session.sync_bounds(fixed);
      st.lp_solves += 1;
      return session.solve(fixed);
    };

    const bool take_link_branch = link_issue && !link_cands.empty();
    if (take_link_branch) {
      SolveReport rep = guidance(true, true, false);
      if (rep.status == SolveStatus::Optimal) {
        std::vector<double> weights;
        for (const LinkKey& l : link_cands)
          weights.push_back(rep.solution->get_x(l.src, l.dst));
        activate_link(link_cands[weighted_pick(rng, weights)]);
      } else if (!place_cands.empty()) {
        activate_placement(place_cands[rng() % place_cands.size()]);
      } else {
        throw InfeasibleDemand("demand exceeds total network capability");
      }
    } else if (!place_cands.empty()) {
      SolveReport rep = guidance(false, true, true);
      if (rep.status == SolveStatus::Optimal) {
        std::vector<double> weights;
        for (const auto& [c, v] : place_cands)
          weights.push_back(rep.solution->get_delta(c, v));
        activate_placement(place_cands[weighted_pick(rng, weights)]);
      } else if (!link_cands.empty()) {
        activate_link(link_cands[rng() % link_cands.size()]);
      } else {
        throw InfeasibleDemand("demand exceeds total network capability");
      }
    } else {
      // node/placement issue but every placement exists: links must be it
      SolveReport rep = guidance(true, true, false);
      if (rep.status != SolveStatus::Optimal)
        throw InfeasibleDemand("demand exceeds total network capability");
      std::vector<double> weights;
      for (const LinkKey& l : link_cands)
        weights.push_back(rep.solution->get_x(l.src, l.dst));
      activate_link(link_cands[weighted_pick(rng, weights)]);
    }

    if (++steps > guard)
      throw NonConvergence("activation guard exceeded after " +
                           std::to_string(steps) + " steps");
  }
}

NetworkConfig save_energy(const NetworkConfig& cfg, const LogicalGraph& lg,
                          const PhysicalGraph& pg, const EnergyModel& em,
                          LoopStats* stats, std::optional<double> entry_energy) {
  cfg.validate(pg);
  LoopStats local;
  LoopStats& st = stats ? *stats : local;

  NetworkConfig cur = cfg;
  ProblemInstance inst = build_instance(lg, pg, em, saving_policy(cur, lg, pg));
  LpSession session(inst);

  // energy of the incoming configuration under its best routing; trials
  // may never rise above the running value
  double ref;
  if (entry_energy) {
    ref = *entry_energy;
  } else {
    apply_policy(inst, policy_from_config(cur, lg, pg));
    session.sync_bounds(inst);
    st.lp_solves += 1;
    SolveReport rep = session.solve(inst);
    if (rep.status != SolveStatus::Optimal)
      throw Error("save_energy requires a feasible starting configuration");
    ref = *rep.objective;
  }
  st.final_energy = ref;

  while (true) {
    if (cur.active_links.empty() && cur.active_nodes.empty() &&
        cur.placements.empty())
      return cur;

    apply_policy(inst, saving_policy(cur, lg, pg));
    session.sync_bounds(inst);
    st.lp_solves += 1;
    SolveReport rep = session.solve(inst);
    if (rep.status != SolveStatus::Optimal)
      throw Error("save_energy requires a feasible starting configuration");
    const Solution& tilde = *rep.solution;

    // smallest relaxed value in each family
    double link_min = lp::kInf, node_min = lp::kInf, place_min = lp::kInf;
    std::pair<Id, Id> link_arg;
    Id node_arg;
    std::pair<Id, Id> place_arg;
    for (const auto& l : cur.active_links) {
      const double v = tilde.get_x(l.first, l.second);
      if (v < link_min) {
        link_min = v;
        link_arg = l;
      }
    }
    for (const Id& c : cur.active_nodes) {
      const double v = tilde.get_y(c);
      if (v < node_min) {
        node_min = v;
        node_arg = c;
      }
    }
    for (const auto& cv : cur.placements) {
      const double v = tilde.get_delta(cv.first, cv.second);
      if (v < place_min) {
        place_min = v;
        place_arg = cv;
      }
    }

    // Strict minimum among the three families. Exact ties (common at zero)
    // go to the node: darkening an idle node is the one choice that pays
    // off immediately, while tied links and instances save nothing and a
    // rejected trial ends the whole procedure.
    NetworkConfig trial = cur;
    if (node_min <= link_min && node_min <= place_min && node_min < lp::kInf) {
      trial.active_nodes.erase(node_arg);
      // a dark node takes its links and instances down with it
      for (auto it = trial.active_links.begin(); it != trial.active_links.end();)
        it = (it->first == node_arg || it->second == node_arg)
                 ? trial.active_links.erase(it)
                 : std::next(it);
      for (auto it = trial.placements.begin(); it != trial.placements.end();)
        it = it->first == node_arg ? trial.placements.erase(it) : std::next(it);
    } else if (link_min <= place_min && link_min < lp::kInf) {
      trial.active_links.erase(link_arg);
    } else if (place_min < lp::kInf) {
      trial.placements.erase(place_arg);
    } else {
      return cur;
    }

    // The trial is evaluated with its binaries pinned: same feasibility
    // verdict as the relaxed copy (raising binaries to one never breaks a
    // constraint) and it prices the configuration we would actually adopt.
    apply_policy(inst, policy_from_config(trial, lg, pg));
    session.sync_bounds(inst);
    st.lp_solves += 1;
    SolveReport trial_rep = session.solve(inst);
    if (trial_rep.status == SolveStatus::Optimal &&
        *trial_rep.objective <= ref + 1e-9 * (1.0 + std::abs(ref))) {
      cur = trial;
      ref = std::min(ref, *trial_rep.objective);
      st.final_energy = ref;
      st.deactivations += 1;
    } else {
      return cur;
    }
  }
}

NetworkConfig control_loop(const NetworkConfig& cfg, const LogicalGraph& lg,
                           const PhysicalGraph& pg, const EnergyModel& em,
                           const std::vector<double>& round_multipliers,
                           LoopStats* stats) {
  NetworkConfig cur = cfg;
  for (double mult : round_multipliers) {
    const LogicalGraph round_lg = mult == 1.0 ? lg : scale_demand(lg, mult);
    LoopStats fix_stats;
    cur = fix_problems(cur, round_lg, pg, em, &fix_stats);
    if (stats) *stats += fix_stats;
    LoopStats save_stats;
    cur = save_energy(cur, round_lg, pg, em, &save_stats, fix_stats.final_energy);
    if (stats) *stats += save_stats;
  }
  return cur;
}

}  // namespace optiloop
