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

#include <optional>
#include <string>
#include <vector>

#include "optiloop/milp.hpp"
#include "optiloop/model.hpp"

namespace optiloop {

enum class SolveStatus : char { Optimal, Infeasible, Unbounded };

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  std::optional<Solution> solution;
  std::optional<double> objective;
  long iterations = 0;
  /// False when the exact oracle exhausted its node budget; the report
  /// then carries the best incumbent found so far.
  bool proven = true;
  /// LP relaxations solved internally (exact oracle only).
  long lp_solve_count = 0;
};

struct IisRow {
  RowTag tag;
  int row_index = -1;
  std::string name;
};

/// An irreducible inconsistent subsystem: together with the variable
/// bounds these rows are infeasible, and removing any single one restores
/// feasibility.
struct IIS {
  std::vector<IisRow> rows;
  bool has_tag(RowTag tag) const;
};

/// Solves the continuous instance. Requires that no column carries an
/// integrality flag (every binary fixed or relaxed). Throws
/// NumericalFailure when the engine cannot produce a trustworthy answer.
SolveReport solve_lp(const ProblemInstance& p);

/// Feasibility-only solve; cheaper than solve_lp when only the verdict is
/// needed.
bool lp_feasible(const ProblemInstance& p);

/// Deletion filter over the rows of an infeasible instance, seeded with
/// the engine's infeasibility certificate. Deterministic for a fixed row
/// ordering.
IIS compute_iis(const ProblemInstance& p);

struct ExactOptions {
  int max_binaries = 24;
  long node_budget = 200000;
};

/// Exact optimum by depth-first branch and bound over the integral
/// columns, pruning on the LP relaxation bound.
SolveReport solve_exact(const ProblemInstance& p, const ExactOptions& opts = {});

/// Resident solver bound to one instance shape whose binary bounds change
/// between solves (the activation/deactivation loops). Each solve restarts
/// from the previous basis, so a long chain of closely related LPs costs
/// a few pivots per step instead of a full cold solve.
class LpSession {
 public:
  explicit LpSession(const ProblemInstance& inst);
  /// Copies the instance's current column bounds into the engine.
  void sync_bounds(const ProblemInstance& inst);
  SolveReport solve(const ProblemInstance& inst);
  bool feasible();

 private:
  lp::IncrementalSimplex engine_;
};

}  // namespace optiloop
