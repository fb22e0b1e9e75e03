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

#include <stdexcept>
#include <string>

namespace optiloop {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model construction / validation failures.
struct InvalidModel : Error {
  using Error::Error;
};

// The chi-induced dependency graph has a cycle reachable from some
// endpoint's injected traffic, so derived flows would not be finite.
struct CyclicLogicalGraph : Error {
  using Error::Error;
};

// A variable policy references a variable that does not exist in the
// instance being built.
struct InconsistentPolicy : Error {
  using Error::Error;
};

// Demand cannot be served even with every node, link, and placement
// active.
struct InfeasibleDemand : Error {
  using Error::Error;
};

// An activation loop exceeded its iteration guard.
struct NonConvergence : Error {
  using Error::Error;
};

// The LP engine could not produce a trustworthy answer.
struct NumericalFailure : Error {
  using Error::Error;
};

// A scenario document does not match the schema; `path` is a
// JSON-pointer-style location of the offending field.
struct SchemaViolation : Error {
  std::string path;
  SchemaViolation(std::string where, const std::string& what)
      : Error(what + " (at " + where + ")"), path(std::move(where)) {}
};

// Topology generation could not produce a connected graph within the
// retry budget.
struct DisconnectedTopology : Error {
  using Error::Error;
};

}  // namespace optiloop
