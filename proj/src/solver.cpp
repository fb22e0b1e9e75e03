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

#include "optiloop/solver.hpp"

#include <algorithm>
#include <cmath>

#include "optiloop/errors.hpp"

namespace optiloop {

namespace {

lp::LpResult run_engine(const lp::Lp& p, bool phase1_only) {
  lp::LpOptions opts;
  opts.phase1_only = phase1_only;
  lp::LpResult res = lp::default_engine().solve(p, opts);
  if (res.status == lp::LpStatus::Numerical ||
      res.status == lp::LpStatus::IterationLimit)
    throw NumericalFailure("lp engine failed to converge");
  return res;
}

}  // namespace

bool IIS::has_tag(RowTag tag) const {
  return std::any_of(rows.begin(), rows.end(),
                     [&](const IisRow& r) { return r.tag == tag; });
}

SolveReport solve_lp(const ProblemInstance& p) {
  if (p.num_integral() > 0)
    throw Error("solve_lp called with integrality flags still set");
  lp::LpResult res = run_engine(p.to_lp(), false);
  SolveReport rep;
  rep.iterations = res.iterations;
  rep.lp_solve_count = 1;
  switch (res.status) {
    case lp::LpStatus::Optimal:
      rep.status = SolveStatus::Optimal;
      rep.objective = res.objective;
      rep.solution = p.extract(res.x, res.objective);
      break;
    case lp::LpStatus::Infeasible:
      rep.status = SolveStatus::Infeasible;
      break;
    case lp::LpStatus::Unbounded:
      rep.status = SolveStatus::Unbounded;
      break;
    default:
      throw NumericalFailure("unexpected lp status");
  }
  return rep;
}

bool lp_feasible(const ProblemInstance& p) {
  lp::LpResult res = run_engine(p.to_lp(), true);
  return res.status == lp::LpStatus::Feasible ||
         res.status == lp::LpStatus::Optimal;
}

IIS compute_iis(const ProblemInstance& p) {
  const int R = p.num_rows();
  std::vector<char> keep(R, 1);

  auto infeasible_with = [&](const std::vector<char>& mask) {
    lp::LpResult res = run_engine(p.to_lp_rows(mask), true);
    return res.status == lp::LpStatus::Infeasible;
  };

  lp::LpResult root = run_engine(p.to_lp(), true);
  if (root.status != lp::LpStatus::Infeasible)
    throw Error("compute_iis called on a feasible instance");

  // Seed with the certificate support when it is itself infeasible; the
  // deletion filter then only has to grind a small subsystem.
  if (!root.infeasible_rows.empty() &&
      static_cast<int>(root.infeasible_rows.size()) < R) {
    std::vector<char> support(R, 0);
    for (int r : root.infeasible_rows) support[r] = 1;
    if (infeasible_with(support)) keep = support;
  }

  for (int r = 0; r < R; ++r) {
    if (!keep[r]) continue;
    keep[r] = 0;
    if (!infeasible_with(keep)) keep[r] = 1;
  }

  IIS iis;
  for (int r = 0; r < R; ++r)
    if (keep[r]) iis.rows.push_back({p.rows[r].tag, r, p.row_name(r)});
  return iis;
}

SolveReport solve_exact(const ProblemInstance& p, const ExactOptions& opts) {
  std::vector<int> bins;
  for (int j = 0; j < p.num_cols(); ++j)
    if (p.cols[j].integral) bins.push_back(j);
  if (static_cast<int>(bins.size()) > opts.max_binaries)
    throw Error("solve_exact: " + std::to_string(bins.size()) +
                " free binaries exceed the cap of " +
                std::to_string(opts.max_binaries));

  const lp::Lp base = p.to_lp();
  lp::IncrementalSimplex engine(base);
  SolveReport rep;
  rep.status = SolveStatus::Infeasible;
  double best = lp::kInf;
  std::vector<double> best_x;
  long nodes = 0;
  bool budget_hit = false;

  std::vector<double> cur_lo = base.col_lo, cur_hi = base.col_hi;
  auto set_bounds = [&](int col, double lo, double hi) {
    cur_lo[col] = lo;
    cur_hi[col] = hi;
    engine.set_col_bounds(col, lo, hi);
  };

  auto run = [&](bool phase1_only) {
    lp::LpOptions lo;
    lo.phase1_only = phase1_only;
    lp::LpResult res = engine.solve(lo);
    if (res.status == lp::LpStatus::Numerical ||
        res.status == lp::LpStatus::IterationLimit)
      throw NumericalFailure("lp engine failed to converge");
    rep.lp_solve_count += 1;
    rep.iterations += res.iterations;
    return res;
  };

  // Integral incumbents are re-solved with every binary pinned to its
  // rounded value so the stored solution is exact at the bounds.
  auto accept_incumbent = [&](const std::vector<double>& xval) -> bool {
    std::vector<double> save_lo = cur_lo, save_hi = cur_hi;
    for (int j : bins) {
      const double v = std::round(xval[j]);
      set_bounds(j, v, v);
    }
    lp::LpResult res = run(false);
    for (int j : bins) set_bounds(j, save_lo[j], save_hi[j]);
    if (res.status != lp::LpStatus::Optimal) return false;
    if (res.objective < best - 1e-12) {
      best = res.objective;
      best_x = res.x;
    }
    return true;
  };

  struct Todo {
    std::vector<std::pair<int, double>> fixes;  // root-to-node bound pins
  };
  std::vector<Todo> todo;
  todo.push_back({});

  while (!todo.empty()) {
    if (nodes >= opts.node_budget) {
      budget_hit = true;
      break;
    }
    ++nodes;
    Todo cur = std::move(todo.back());
    todo.pop_back();

    std::vector<std::pair<int, std::pair<double, double>>> undo;
    for (const auto& [col, v] : cur.fixes) {
      undo.push_back({col, {cur_lo[col], cur_hi[col]}});
      set_bounds(col, v, v);
    }

    lp::LpResult res = run(false);
    if (res.status == lp::LpStatus::Unbounded)
      throw NumericalFailure("unbounded relaxation in exact solve");
    bool expand = false;
    int branch_col = -1;
    double branch_val = 0.0;
    if (res.status == lp::LpStatus::Optimal && res.objective < best - 1e-9) {
      double worst_frac = 0.0;
      for (int j : bins) {
        const double v = res.x[j];
        const double frac = std::abs(v - std::round(v));
        if (frac > worst_frac) {
          worst_frac = frac;
          branch_col = j;
          branch_val = v;
        }
      }
      if (worst_frac <= 1e-6) {
        if (!accept_incumbent(res.x) && worst_frac > 1e-9) expand = true;
      } else {
        expand = true;
      }
    }

    if (expand && branch_col >= 0) {
      const double first = std::round(branch_val) >= 0.5 ? 1.0 : 0.0;
      Todo far = cur;
      far.fixes.push_back({branch_col, 1.0 - first});
      Todo near = cur;
      near.fixes.push_back({branch_col, first});
      todo.push_back(std::move(far));   // far side explored later
      todo.push_back(std::move(near));
    }

    for (auto it = undo.rbegin(); it != undo.rend(); ++it)
      set_bounds(it->first, it->second.first, it->second.second);
  }

  rep.proven = !budget_hit;
  if (best < lp::kInf) {
    rep.status = SolveStatus::Optimal;
    rep.objective = best;
    rep.solution = p.extract(best_x, best);
  }
  return rep;
}

LpSession::LpSession(const ProblemInstance& inst) : engine_(inst.to_lp()) {}

void LpSession::sync_bounds(const ProblemInstance& inst) {
  for (int j = 0; j < inst.num_cols(); ++j)
    if (inst.cols[j].binary_kind)
      engine_.set_col_bounds(j, inst.cols[j].lo, inst.cols[j].hi);
}

SolveReport LpSession::solve(const ProblemInstance& inst) {
  lp::LpResult res = engine_.solve({});
  if (res.status == lp::LpStatus::Numerical ||
      res.status == lp::LpStatus::IterationLimit)
    throw NumericalFailure("lp engine failed to converge");
  SolveReport rep;
  rep.iterations = res.iterations;
  rep.lp_solve_count = 1;
  switch (res.status) {
    case lp::LpStatus::Optimal:
      rep.status = SolveStatus::Optimal;
      rep.objective = res.objective;
      rep.solution = inst.extract(res.x, res.objective);
      break;
    case lp::LpStatus::Infeasible:
      rep.status = SolveStatus::Infeasible;
      break;
    case lp::LpStatus::Unbounded:
      rep.status = SolveStatus::Unbounded;
      break;
    default:
      throw NumericalFailure("unexpected lp status");
  }
  return rep;
}

bool LpSession::feasible() {
  lp::LpOptions opts;
  opts.phase1_only = true;
  lp::LpResult res = engine_.solve(opts);
  if (res.status == lp::LpStatus::Numerical ||
      res.status == lp::LpStatus::IterationLimit)
    throw NumericalFailure("lp engine failed to converge");
  return res.status == lp::LpStatus::Feasible ||
         res.status == lp::LpStatus::Optimal;
}

}  // namespace optiloop
