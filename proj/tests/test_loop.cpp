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

#include <doctest.h>

#include "optiloop/loop.hpp"
#include "optiloop/metrics.hpp"
#include "optiloop/solver.hpp"
#include "test_util.hpp"

using namespace optiloop;

namespace {

// two nodes of capacity 4 serving a chain that needs 6.4 capability units
struct SplitCase {
  LogicalGraph lg;
  PhysicalGraph pg;
  EnergyModel em;
};

SplitCase split_case() {
  SplitCase s;
  s.lg.endpoints = {"RRH"};
  s.lg.vnfs = {"eNB", "P/S-GW", "MME", "HSS"};
  s.lg.injected_bps[{"RRH", "eNB"}] = 2.0;
  s.lg.chi[{"RRH", "eNB", "P/S-GW"}] = 1.0;
  s.lg.chi[{"RRH", "eNB", "MME"}] = 0.3;
  s.lg.chi[{"eNB", "P/S-GW", "MME"}] = 0.2;
  s.lg.chi[{"eNB", "MME", "HSS"}] = 1.0;
  s.lg.chi[{"P/S-GW", "MME", "HSS"}] = 1.0;
  for (const Id& v : s.lg.vnfs) s.lg.cpu_per_bps[v] = 1.0;
  s.pg.endpoints = {"RRH"};
  s.pg.nodes = {"c1", "c2"};
  s.pg.node_capacity["c1"] = 4.0;
  s.pg.node_capacity["c2"] = 4.0;
  s.pg.links.push_back({"RRH", "c1", 50.0, 0.0});
  s.pg.links.push_back({"c1", "c2", 50.0, 0.0});
  s.pg.links.push_back({"c2", "c1", 50.0, 0.0});
  s.em.idle_power_w["c1"] = s.em.idle_power_w["c2"] = 10.0;
  s.em.proc_w_per_cpu = 0.1;
  s.em.link_w_per_bps = 0.01;
  return s;
}

double config_energy(const NetworkConfig& cfg, const LogicalGraph& lg,
                     const PhysicalGraph& pg, const EnergyModel& em) {
  auto rep = evaluate_config(cfg, lg, pg, em);
  REQUIRE(rep.status == SolveStatus::Optimal);
  return *rep.objective;
}

}  // namespace

TEST_CASE("initial solution powers everything") {
  auto s = split_case();
  auto [cfg, sol] = initial_solution(s.lg, s.pg, s.em);
  CHECK(cfg.active_nodes.size() == s.pg.nodes.size());
  CHECK(cfg.active_links.size() == s.pg.links.size());
  CHECK(cfg.placements.size() == s.pg.nodes.size() * s.lg.vnfs.size());
  CHECK(sol.integral);

  SUBCASE("zero demand still pays every idle and overhead step") {
    auto zero = s;
    zero.lg.injected_bps.clear();
    zero.em.vnf_overhead_w[{"c1", "eNB"}] = 0.25;
    auto [cfg0, sol0] = initial_solution(zero.lg, zero.pg, zero.em);
    (void)cfg0;
    CHECK(sol0.objective_w == doctest::Approx(20.0 + 0.25));
  }
  SUBCASE("overload is detected once and for all") {
    auto big = s;
    big.lg.injected_bps[{"RRH", "eNB"}] = 10.0;  // cpu need 32 > 8 total
    CHECK_THROWS_AS(initial_solution(big.lg, big.pg, big.em), InfeasibleDemand);
  }
}

TEST_CASE("fix_problems leaves a feasible configuration untouched") {
  auto s = split_case();
  auto [cfg, sol] = initial_solution(s.lg, s.pg, s.em);
  (void)sol;
  LoopStats st;
  auto fixed = fix_problems(cfg, s.lg, s.pg, s.em, &st);
  CHECK(fixed == cfg);
  CHECK(st.lp_solves == 1);
  CHECK(st.activations == 0);
}

TEST_CASE("fix_problems reactivates a needed node") {
  auto s = split_case();
  NetworkConfig cfg = config_all_on(s.lg, s.pg);
  // switch off c2 entirely
  cfg.active_nodes.erase("c2");
  for (auto it = cfg.active_links.begin(); it != cfg.active_links.end();)
    it = (it->first == "c2" || it->second == "c2") ? cfg.active_links.erase(it)
                                                   : std::next(it);
  for (auto it = cfg.placements.begin(); it != cfg.placements.end();)
    it = it->first == "c2" ? cfg.placements.erase(it) : std::next(it);
  cfg.rng_seed = 5;

  LoopStats st;
  auto fixed = fix_problems(cfg, s.lg, s.pg, s.em, &st);
  CHECK(fixed.active_nodes.count("c2"));
  CHECK(lp_feasible(build_instance(s.lg, s.pg, s.em,
                                   policy_from_config(fixed, s.lg, s.pg))));
  // never deactivates anything
  for (const auto& l : cfg.active_links) CHECK(fixed.active_links.count(l));
  for (const auto& c : cfg.active_nodes) CHECK(fixed.active_nodes.count(c));
  for (const auto& p : cfg.placements) CHECK(fixed.placements.count(p));
  CHECK(st.lp_solves <= 2 * (st.activations + 1));
}

TEST_CASE("fix_problems deploys a missing instance") {
  auto s = split_case();
  NetworkConfig cfg = config_all_on(s.lg, s.pg);
  cfg.placements.erase({"c1", "eNB"});
  cfg.placements.erase({"c2", "eNB"});
  cfg.rng_seed = 9;
  LoopStats st;
  auto fixed = fix_problems(cfg, s.lg, s.pg, s.em, &st);
  const bool has_enb =
      fixed.placements.count({"c1", "eNB"}) || fixed.placements.count({"c2", "eNB"});
  CHECK(has_enb);
  CHECK(st.activations >= 1);
  CHECK(st.lp_solves <= 2 * (st.activations + 1));
}

TEST_CASE("fix_problems proves hopeless demand infeasible") {
  auto s = split_case();
  s.lg.injected_bps[{"RRH", "eNB"}] = 10.0;
  NetworkConfig cfg = config_all_on(s.lg, s.pg);
  CHECK_THROWS_AS(fix_problems(cfg, s.lg, s.pg, s.em), InfeasibleDemand);
}

TEST_CASE("save_energy strips an idle appendix node") {
  auto s = split_case();
  s.pg.nodes.insert("c3");
  s.pg.node_capacity["c3"] = 4.0;
  s.pg.links.push_back({"c2", "c3", 50.0, 0.0});
  s.pg.links.push_back({"c3", "c2", 50.0, 0.0});
  s.em.idle_power_w["c3"] = 10.0;

  NetworkConfig cfg = config_all_on(s.lg, s.pg);
  const double before = config_energy(cfg, s.lg, s.pg, s.em);
  LoopStats st;
  auto saved = save_energy(cfg, s.lg, s.pg, s.em, &st, before);
  CHECK(!saved.active_nodes.count("c3"));
  CHECK(st.lp_solves <= 2 * (st.deactivations + 1));
  CHECK(config_energy(saved, s.lg, s.pg, s.em) <= before + 1e-9);
}

TEST_CASE("save_energy cannot shrink a single busy node") {
  LogicalGraph lg;
  lg.endpoints = {"e"};
  lg.vnfs = {"f"};
  lg.injected_bps[{"e", "f"}] = 1.0;
  lg.cpu_per_bps["f"] = 1.0;
  PhysicalGraph pg;
  pg.endpoints = {"e"};
  pg.nodes = {"c"};
  pg.node_capacity["c"] = 2.0;
  pg.links.push_back({"e", "c", 5.0, 0.0});
  EnergyModel em;
  em.idle_power_w["c"] = 3.0;

  NetworkConfig cfg = config_all_on(lg, pg);
  auto saved = save_energy(cfg, lg, pg, em);
  CHECK(saved == cfg);
}

TEST_CASE("zero demand lets save_energy power everything down") {
  auto s = split_case();
  s.lg.injected_bps.clear();
  NetworkConfig cfg = config_all_on(s.lg, s.pg);
  auto saved = save_energy(cfg, s.lg, s.pg, s.em);
  CHECK(saved.active_nodes.empty());
  CHECK(saved.active_links.empty());
  CHECK(saved.placements.empty());
  CHECK(config_energy(saved, s.lg, s.pg, s.em) == doctest::Approx(0.0));
}

TEST_CASE("save_energy keeps feasibility and monotone energy on random cases") {
  int checked = 0;
  for (std::uint64_t seed = 200; seed < 215; ++seed) {
    auto tc = testutil::random_case(seed);
    NetworkConfig cfg;
    try {
      cfg = initial_solution(tc.lg, tc.pg, tc.em).first;
    } catch (const InfeasibleDemand&) {
      continue;
    }
    const double before = config_energy(cfg, tc.lg, tc.pg, tc.em);
    LoopStats st;
    auto saved = save_energy(cfg, tc.lg, tc.pg, tc.em, &st, before);
    auto rep = evaluate_config(saved, tc.lg, tc.pg, tc.em);
    REQUIRE(rep.status == SolveStatus::Optimal);
    auto violations = validate_solution(saved, *rep.solution, tc.lg, tc.pg, tc.em);
    CHECK(violations.empty());
    CHECK(*rep.objective <= before + 1e-6 * (1 + before));
    CHECK(st.lp_solves <= 2 * (st.deactivations + 1));
    ++checked;
  }
  CHECK(checked >= 10);
}

TEST_CASE("control loop is idempotent on stable demand") {
  auto s = split_case();
  NetworkConfig cfg = config_all_on(s.lg, s.pg);
  cfg.rng_seed = 17;
  auto round1 = control_loop(cfg, s.lg, s.pg, s.em, {1.0});
  auto round2 = control_loop(round1, s.lg, s.pg, s.em, {1.0});
  auto round3 = control_loop(round2, s.lg, s.pg, s.em, {1.0});
  CHECK(round2 == round1);
  CHECK(round3 == round1);
}

TEST_CASE("demand step up activates, step down releases") {
  auto s = split_case();
  s.lg.injected_bps[{"RRH", "eNB"}] = 1.0;  // fits one node at 1x (cpu 3.2)
  NetworkConfig cfg = config_all_on(s.lg, s.pg);
  cfg.rng_seed = 3;
  auto lean = control_loop(cfg, s.lg, s.pg, s.em, {1.0});
  CHECK(lean.active_nodes.size() == 1);

  // x2 needs 6.4 capability, more than either node alone
  auto grown = control_loop(lean, s.lg, s.pg, s.em, {2.0});
  CHECK(grown.active_nodes.size() == 2);

  auto shrunk = control_loop(grown, s.lg, s.pg, s.em, {1.0});
  CHECK(config_energy(shrunk, scale_demand(s.lg, 1.0), s.pg, s.em) <=
        config_energy(grown, scale_demand(s.lg, 1.0), s.pg, s.em) + 1e-9);
  CHECK(shrunk.active_nodes.size() <= grown.active_nodes.size());
}

TEST_CASE("identical seeds give identical decisions") {
  auto s = split_case();
  NetworkConfig cfg = config_all_on(s.lg, s.pg);
  cfg.active_nodes.erase("c2");
  for (auto it = cfg.active_links.begin(); it != cfg.active_links.end();)
    it = (it->first == "c2" || it->second == "c2") ? cfg.active_links.erase(it)
                                                   : std::next(it);
  for (auto it = cfg.placements.begin(); it != cfg.placements.end();)
    it = it->first == "c2" ? cfg.placements.erase(it) : std::next(it);
  cfg.rng_seed = 77;
  auto a = fix_problems(cfg, s.lg, s.pg, s.em);
  auto b = fix_problems(cfg, s.lg, s.pg, s.em);
  CHECK(a == b);
}

TEST_CASE("config invariants are enforced") {
  auto s = split_case();
  NetworkConfig cfg;
  cfg.placements.insert({"c1", "eNB"});  // node not active
  CHECK_THROWS_AS(cfg.validate(s.pg), InvalidModel);

  NetworkConfig cfg2;
  cfg2.active_links.insert({"c1", "c2"});  // ends not active
  CHECK_THROWS_AS(cfg2.validate(s.pg), InvalidModel);
}
