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

#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace optiloop::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense : char { LE = 'L', EQ = 'E', GE = 'G' };

/// A linear program in computational form:
///   minimize obj . x + obj_const
///   subject to sense_r(row_r . x, rhs_r) and col_lo <= x <= col_hi.
/// The matrix is stored column-wise.
struct Lp {
  std::vector<double> col_lo, col_hi, obj;
  double obj_const = 0.0;
  std::vector<Sense> sense;
  std::vector<double> rhs;
  std::vector<int> col_start;  // size num_cols()+1
  std::vector<int> row_index;
  std::vector<double> value;

  int num_cols() const { return static_cast<int>(obj.size()); }
  int num_rows() const { return static_cast<int>(rhs.size()); }

  int add_col(double lo, double hi, double c);
  int add_row(Sense s, double b);  // rows must be added before columns fill them
  /// Appends one coefficient to the most recently added column.
  void add_entry(int row, double v);

  std::vector<double> row_activity(const std::vector<double>& x) const;
  /// Largest absolute violation over rows and bounds.
  double max_violation(const std::vector<double>& x) const;
};

enum class LpStatus { Optimal, Feasible, Infeasible, Unbounded, IterationLimit, Numerical };

struct LpOptions {
  bool phase1_only = false;  // stop once feasibility is decided
  long max_iterations = -1;  // automatic when negative
  int refactor_interval = 100;
};

struct LpResult {
  LpStatus status = LpStatus::Numerical;
  std::vector<double> x;
  std::vector<double> row_dual;
  double objective = 0.0;
  long iterations = 0;
  /// When infeasible: rows carrying nonzero weight in the infeasibility
  /// certificate. A superset of some irreducible subsystem.
  std::vector<int> infeasible_rows;
};

/// A resident simplex instance. The matrix is fixed at construction;
/// column bounds may be edited between solves, and each solve restarts
/// from the previous basis, which makes long chains of closely related
/// LPs (the activation/deactivation loops) cheap.
class IncrementalSimplex {
 public:
  explicit IncrementalSimplex(const Lp& problem);
  ~IncrementalSimplex();
  IncrementalSimplex(IncrementalSimplex&&) noexcept;
  IncrementalSimplex& operator=(IncrementalSimplex&&) noexcept;

  void set_col_bounds(int col, double lo, double hi);
  void set_obj(int col, double coef);
  LpResult solve(const LpOptions& opts = {});
  /// Forget the warm basis; the next solve starts from the slack basis.
  void reset_basis();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Interface every LP backend implements. The built-in engine is a
/// bounded-variable revised simplex; an external engine can be slotted in
/// through set_default_engine without touching any caller.
class LpEngine {
 public:
  virtual ~LpEngine() = default;
  virtual LpResult solve(const Lp& p, const LpOptions& opts) const = 0;
  virtual std::string name() const = 0;
};

class SimplexEngine final : public LpEngine {
 public:
  LpResult solve(const Lp& p, const LpOptions& opts) const override;
  std::string name() const override { return "simplex"; }
};

const LpEngine& default_engine();
void set_default_engine(std::shared_ptr<const LpEngine> engine);

}  // namespace optiloop::lp
