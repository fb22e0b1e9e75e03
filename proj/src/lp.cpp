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

#include "optiloop/lp.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace optiloop::lp {

int Lp::add_col(double lo, double hi, double c) {
  if (col_start.empty()) col_start.push_back(0);
  col_lo.push_back(lo);
  col_hi.push_back(hi);
  obj.push_back(c);
  col_start.push_back(col_start.back());
  return num_cols() - 1;
}

int Lp::add_row(Sense s, double b) {
  sense.push_back(s);
  rhs.push_back(b);
  return num_rows() - 1;
}

void Lp::add_entry(int row, double v) {
  if (v == 0.0) return;
  row_index.push_back(row);
  value.push_back(v);
  col_start.back() += 1;
}

std::vector<double> Lp::row_activity(const std::vector<double>& x) const {
  std::vector<double> act(num_rows(), 0.0);
  for (int j = 0; j < num_cols(); ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (int k = col_start[j]; k < col_start[j + 1]; ++k)
      act[row_index[k]] += value[k] * xj;
  }
  return act;
}

double Lp::max_violation(const std::vector<double>& x) const {
  double worst = 0.0;
  auto act = row_activity(x);
  for (int r = 0; r < num_rows(); ++r) {
    double v = 0.0;
    switch (sense[r]) {
      case Sense::LE: v = act[r] - rhs[r]; break;
      case Sense::GE: v = rhs[r] - act[r]; break;
      case Sense::EQ: v = std::abs(act[r] - rhs[r]); break;
    }
    worst = std::max(worst, v);
  }
  for (int j = 0; j < num_cols(); ++j) {
    worst = std::max(worst, col_lo[j] - x[j]);
    worst = std::max(worst, x[j] - col_hi[j]);
  }
  return worst;
}

namespace {
std::shared_ptr<const LpEngine>& engine_slot() {
  static std::shared_ptr<const LpEngine> engine = std::make_shared<SimplexEngine>();
  return engine;
}
std::mutex engine_mutex;
}  // namespace

const LpEngine& default_engine() {
  std::lock_guard<std::mutex> lock(engine_mutex);
  return *engine_slot();
}

void set_default_engine(std::shared_ptr<const LpEngine> engine) {
  std::lock_guard<std::mutex> lock(engine_mutex);
  if (engine) engine_slot() = std::move(engine);
}

}  // namespace optiloop::lp
