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

#include "optiloop/loop.hpp"
#include "optiloop/model.hpp"
#include "optiloop/solver.hpp"

namespace optiloop {

/// Keep every node, link, and placement active regardless of traffic.
std::pair<NetworkConfig, Solution> all_on(const LogicalGraph& lg,
                                          const PhysicalGraph& pg,
                                          const EnergyModel& em);

/// Greedy three-stage consolidation: per flow in descending traffic order,
/// (1) reuse a deployed instance with spare capacity reachable over active
/// elements, else (2) deploy on an already-active node, else (3) activate
/// the nearest inactive node; links get activated as needed for
/// connectivity and decisions are never revisited. Deterministic.
NetworkConfig consolidation(const LogicalGraph& lg, const PhysicalGraph& pg,
                            const EnergyModel& em);

/// Brute-force optimum over the activation binaries (branch and bound).
std::pair<NetworkConfig, SolveReport> optimal(const LogicalGraph& lg,
                                              const PhysicalGraph& pg,
                                              const EnergyModel& em,
                                              const ExactOptions& opts = {});

}  // namespace optiloop
