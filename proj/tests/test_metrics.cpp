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
#include <json.hpp>

#include "optiloop/baselines.hpp"
#include "optiloop/metrics.hpp"
#include "test_util.hpp"

using namespace optiloop;

namespace {

Scenario tiny_scenario(std::uint64_t seed) {
  OperatorScenarioOptions opts;
  opts.topo.n_endpoints = 1;
  opts.topo.n_nodes = 2;
  opts.topo.mean_node_degree = 1.0;
  return make_operator_scenario(seed, opts);
}

}  // namespace

TEST_CASE("spare capability of the active topology") {
  auto tc = testutil::random_case(601);
  auto [cfg, sol] = all_on(tc.lg, tc.pg, tc.em);

  SUBCASE("zero demand leaves everything spare") {
    auto zero = tc;
    zero.lg.injected_bps.clear();
    auto [zcfg, zsol] = all_on(zero.lg, zero.pg, zero.em);
    double want = 0.0;
    for (const Id& c : zero.pg.nodes) want += zero.pg.capacity(c);
    CHECK(spare_ccat(zcfg, zsol, zero.pg, zero.lg) == doctest::Approx(want));
  }
  SUBCASE("a saturated single node has none") {
    LogicalGraph lg;
    lg.endpoints = {"e"};
    lg.vnfs = {"f"};
    lg.injected_bps[{"e", "f"}] = 2.0;
    lg.cpu_per_bps["f"] = 1.0;
    PhysicalGraph pg;
    pg.endpoints = {"e"};
    pg.nodes = {"c"};
    pg.node_capacity["c"] = 2.0;
    pg.links.push_back({"e", "c", 5.0, 0.0});
    EnergyModel em;
    auto [ccfg, csol] = all_on(lg, pg, em);
    CHECK(spare_ccat(ccfg, csol, pg, lg) == doctest::Approx(0.0));
  }
  (void)cfg;
  (void)sol;
}

TEST_CASE("mean hops weights traversals by traffic") {
  LogicalGraph lg;
  lg.endpoints = {"e"};
  lg.vnfs = {"f"};
  lg.injected_bps[{"e", "f"}] = 1.0;
  PhysicalGraph pg;
  pg.endpoints = {"e"};
  pg.nodes = {"c"};
  pg.node_capacity["c"] = 5.0;
  pg.links.push_back({"e", "c", 5.0, 0.0});

  SUBCASE("adjacent service is one hop") {
    Solution sol;
    sol.tau[{LinkKey{"e", "c"}, FlowKey{"e", "f", "f"}}] = 1.0;
    CHECK(mean_hops(sol, lg, pg) == doctest::Approx(1.0));
  }
  SUBCASE("an even split over 2-hop and 4-hop paths averages to three") {
    Solution sol;
    const FlowKey k{"e", "f", "f"};
    sol.tau[{LinkKey{"e", "c"}, k}] = 0.5;       // short path: 2 hops
    sol.tau[{LinkKey{"c", "c2"}, k}] = 0.5;
    sol.tau[{LinkKey{"e", "c3"}, k}] = 0.5;      // long path: 4 hops
    sol.tau[{LinkKey{"c3", "c4"}, k}] = 0.5;
    sol.tau[{LinkKey{"c4", "c5"}, k}] = 0.5;
    sol.tau[{LinkKey{"c5", "c6"}, k}] = 0.5;
    CHECK(mean_hops(sol, lg, pg) == doctest::Approx(3.0));
  }
}

TEST_CASE("experiment grid covers the strategy x multiplier product") {
  auto sc = tiny_scenario(31);
  ExperimentOptions opts;
  opts.multipliers = {0.5, 1.0};
  opts.seed = 4;
  auto rows = run_experiment(sc, opts);
  CHECK(rows.size() == 8);  // 4 strategies x 2 multipliers
  for (const RunResult& r : rows) {
    INFO(r.strategy << " x" << r.traffic_multiplier << ": " << r.status);
    CHECK(r.status == "ok");
    CHECK(r.breakdown.total() == doctest::Approx(r.energy_total_w));
    CHECK(r.spare_ccat >= 0.0);
  }

  // ordering within the grid
  auto find = [&](const std::string& s, double m) -> const RunResult& {
    for (const RunResult& r : rows)
      if (r.strategy == s && r.traffic_multiplier == m) return r;
    FAIL("row missing");
    return rows.front();
  };
  for (double m : opts.multipliers) {
    const double tol = 1e-6 * (1 + find("all_on", m).energy_total_w);
    CHECK(find("optimal", m).energy_total_w <=
          find("optiloop", m).energy_total_w + tol);
    CHECK(find("optiloop", m).energy_total_w <=
          find("all_on", m).energy_total_w + tol);
    CHECK(find("optimal", m).energy_total_w <=
          find("consolidation", m).energy_total_w + tol);

    // processing energy is strategy-invariant at fixed demand
    const double p0 = find("all_on", m).breakdown.proc_w;
    for (const std::string& s : {"optiloop", "consolidation", "optimal"})
      CHECK(find(s, m).breakdown.proc_w ==
            doctest::Approx(p0).epsilon(1e-6));
  }
}

TEST_CASE("csv and json encode the same values and are reproducible") {
  auto sc = tiny_scenario(77);
  ExperimentOptions opts;
  opts.multipliers = {1.0, 2.0};
  opts.seed = 9;
  auto rows1 = run_experiment(sc, opts);
  auto rows2 = run_experiment(sc, opts);
  CHECK(results_to_csv(rows1) == results_to_csv(rows2));

  const std::string csv = results_to_csv(rows1);
  CHECK(csv.find("\r") == std::string::npos);  // LF endings only
  auto j = nlohmann::json::parse(results_to_json(rows1));
  REQUIRE(j.size() == rows1.size());

  // spot-check a value appears identically in both encodings
  size_t line_start = csv.find('\n') + 1;
  const std::string first_line = csv.substr(line_start, csv.find('\n', line_start) - line_start);
  CHECK(first_line.find(rows1.front().strategy) != std::string::npos);
  CHECK(j[0]["strategy"] == rows1.front().strategy);
  CHECK(j[0]["energy_w"].get<double>() ==
        doctest::Approx(rows1.front().energy_total_w).epsilon(1e-12));
}

TEST_CASE("per-cell failures never abort the sweep") {
  auto sc = tiny_scenario(15);
  // an impossible demand makes every strategy fail, but rows still come back
  sc.traffic_multiplier = 1e6;
  ExperimentOptions opts;
  opts.multipliers = {1.0};
  auto rows = run_experiment(sc, opts);
  CHECK(rows.size() == 4);
  for (const RunResult& r : rows) CHECK(r.status != "ok");
}

TEST_CASE("stored solutions round-trip and verify") {
  auto sc = tiny_scenario(42);
  auto [cfg, sol] = all_on(sc.logical, sc.physical, sc.energy);
  const std::string doc = solution_to_json(cfg, sol);
  auto [cfg2, sol2] = solution_from_json(doc);
  CHECK(cfg2 == cfg);
  CHECK(validate_solution(cfg2, sol2, sc.logical, sc.physical, sc.energy).empty());

  // corrupting a flow trips the validator with a named tag
  Solution bad = sol2;
  REQUIRE(!bad.tau.empty());
  bad.tau.begin()->second *= 2.0;
  auto violations = validate_solution(cfg2, bad, sc.logical, sc.physical, sc.energy);
  CHECK(!violations.empty());
}
