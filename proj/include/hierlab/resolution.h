// Copyright 2026 The hierlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HIERLAB_RESOLUTION_H_
#define HIERLAB_RESOLUTION_H_

#include <string>
#include <vector>

#include "hierlab/environment.h"
#include "hierlab/kernel.h"
#include "hierlab/term.h"

namespace hierlab {

enum class InstanceKind {
  kPreferred,    // projection of a substructure field
  kSynthesized,  // constructor application rebuilt from the derived value
  kUser,         // written as an `instance` item
};

const char* to_string(InstanceKind kind);

struct InstanceInfo {
  std::string decl_name;
  // Empty for user instances, which are not forgetful edges.
  std::string from_class;
  std::string to_class;
  int priority = 1000;
  InstanceKind kind = InstanceKind::kUser;
};

struct SearchConfig {
  int max_depth = 32;
  // Unification inside the search uses `eta.eta_unifier`.
  DefEqConfig eta;
  bool trace = false;

  void validate() const;
};

enum class ResolveStatus { kFound, kNotFound, kDepthExceeded };

const char* to_string(ResolveStatus status);

struct ResolveResult {
  ResolveStatus status = ResolveStatus::kNotFound;
  Term instance;
  // The goal with omitted instance arguments filled in.
  Term goal;
  Trace trace;

  bool ok() const { return status == ResolveStatus::kFound; }
};

/**
 * Depth-first instance search with backtracking.
 *
 * Candidates are the instance-implicit locals of `ctx` and the registered
 * instances whose head class matches, ordered by priority (locals count as
 * 1000) and then most recent first. A target such as `module R R` that omits
 * trailing instance arguments of its class is completed first, each missing
 * argument becoming a subgoal in order.
 */
ResolveResult resolve(const Environment& env,
                      const std::vector<InstanceInfo>& instances,
                      const Telescope& ctx, const Term& target,
                      const SearchConfig& config = {});

}  // namespace hierlab

#endif  // HIERLAB_RESOLUTION_H_
