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

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optiloop/lp.hpp"
#include "optiloop/model.hpp"

namespace optiloop {

enum class VarKind : char { X, Y, Delta, Tau, Transit, Proc };

enum class RowTag : char {
  FlowIn,
  FlowOut,
  EnableLink,
  CapacityL,
  EnableCore,
  HonorDelta,
  CapacityC,
  Delay,
  Match,
};

const char* to_string(RowTag tag);

/// Per-variable fix/relax controls for the three binary families. Anything
/// not listed gets `fallback`.
struct VariablePolicy {
  struct Setting {
    enum class Kind : char { Binary, Relax, Fix } kind = Kind::Binary;
    double value = 0.0;
    static Setting binary() { return {Kind::Binary, 0.0}; }
    static Setting relax() { return {Kind::Relax, 0.0}; }
    static Setting fix(double v) { return {Kind::Fix, v}; }
  };
  Setting fallback = Setting::binary();
  std::map<std::pair<Id, Id>, Setting> x;      // keyed (src, dst)
  std::map<Id, Setting> y;                     // keyed node
  std::map<std::pair<Id, Id>, Setting> delta;  // keyed (node, vnf)

  static VariablePolicy all_binary();
  static VariablePolicy all_relaxed();
  static VariablePolicy all_fixed(double value);
};

struct VarInfo {
  VarKind kind;
  int link = -1;
  int node = -1;
  int comm = -1;
  int vnf = -1;
  double lo = 0.0, hi = 0.0, obj = 0.0;
  bool binary_kind = false;
  bool integral = false;
};

struct RowInfo {
  RowTag tag;
  int link = -1;
  int node = -1;
  int comm = -1;
  int endpoint = -1;
  int vnf = -1;
  lp::Sense sense = lp::Sense::LE;
  double rhs = 0.0;
};

/// One LP/MILP in standard form with a registry mapping semantic variable
/// identities to column indices and a semantic tag on every row.
struct ProblemInstance {
  std::vector<Id> endpoints, nodes, vnfs;
  std::vector<LinkKey> links;
  std::vector<FlowKey> comms;

  std::vector<VarInfo> cols;
  std::vector<RowInfo> rows;
  std::vector<int> row_start;  // size rows+1
  std::vector<int> entry_col;
  std::vector<double> entry_coef;
  double obj_const = 0.0;

  std::map<int, int> x_col, y_col;                 // link/node index -> column
  std::map<std::pair<int, int>, int> delta_col;    // (node, vnf)
  std::map<std::pair<int, int>, int> tau_col;      // (link, comm)
  std::map<std::pair<int, int>, int> transit_col;  // (node, comm)
  std::map<std::pair<int, int>, int> proc_col;     // (node, comm)

  int num_cols() const { return static_cast<int>(cols.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_integral() const;

  std::string col_name(int j) const;
  std::string row_name(int r) const;

  /// Continuous relaxation view for the LP engines (integrality dropped).
  lp::Lp to_lp() const;
  /// Same, restricted to a subset of rows (used by infeasibility analysis).
  lp::Lp to_lp_rows(const std::vector<char>& keep_row) const;

  Solution extract(const std::vector<double>& x, double objective) const;
};

/// Instantiates every constraint family and the energy objective for the
/// given graphs. Throws InconsistentPolicy when the policy references
/// variables that do not exist or fixes a binary to a non-binary value.
ProblemInstance build_instance(const LogicalGraph& lg, const PhysicalGraph& pg,
                               const EnergyModel& em, const VariablePolicy& policy);

/// Rewrites the binary-family bounds and integrality flags in place; rows,
/// coefficients, and continuous columns are untouched. Lets one instance
/// shape serve a whole fix/relax loop.
void apply_policy(ProblemInstance& inst, const VariablePolicy& policy);

/// Names of the flow/transit/processing variables whose commodity carries
/// no traffic; build_instance omits them.
std::vector<std::string> variable_pruning(const LogicalGraph& lg,
                                          const PhysicalGraph& pg);

/// Writes the instance in the textual LP interchange format, one
/// constraint per line, each preceded by its semantic tag as a comment.
void export_lp(const ProblemInstance& inst, std::ostream& os);

}  // namespace optiloop
