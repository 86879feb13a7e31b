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

#ifndef HIERLAB_ANALYZER_H_
#define HIERLAB_ANALYZER_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hierlab/elaborator.h"
#include "hierlab/kernel.h"
#include "hierlab/surface.h"

namespace hierlab {

enum class EdgeKind { kPreferred, kNonPreferred, kFlat };

const char* to_string(EdgeKind kind);

struct HierEdge {
  std::string from;
  std::string to;
  std::string decl;
  EdgeKind kind = EdgeKind::kPreferred;
};

struct HierGraph {
  std::vector<std::string> nodes;
  std::vector<HierEdge> edges;
};

/// One node per class, one edge per forgetful instance. Throws CycleDetected.
HierGraph build_graph(const Environment& env,
                      const std::vector<InstanceInfo>& instances,
                      Encoding encoding);
HierGraph build_graph(const Elaboration& e);

struct Diamond {
  std::string source;
  std::string target;
  std::vector<HierEdge> path_a;
  std::vector<HierEdge> path_b;
};

inline constexpr int kDefaultMaxPathLen = 8;

/// All pairs of distinct paths sharing endpoints, ordered by source, target,
/// then the instance names along each path.
std::vector<Diamond> enumerate_diamonds(const HierGraph& g,
                                        int max_path_len = kDefaultMaxPathLen);

struct DiamondReport {
  Diamond diamond;
  // Context `params [i : Source params]` of both composites.
  Telescope ctx;
  Term term_a;
  Term term_b;
  bool oracle = false;     // defeq verdict: the paths commute
  bool predictor = false;  // last-segment rule
  DefEqConfig config;
  Trace trace;
};

DiamondReport check_diamond(const Environment& env, const DefEqConfig& config,
                            const Diamond& d);

/// Commutes iff both last edges have the same kind (flat counts as
/// non-preferred).
bool predict_diamond(const Diamond& d);

struct DiamondSummary {
  Encoding encoding = Encoding::kNested;
  DefEqConfig config;
  std::vector<DiamondReport> reports;

  int commuting() const;
  int mismatches() const;  // predictor != oracle
  bool all_commute() const { return commuting() == static_cast<int>(reports.size()); }
  bool all_predicted() const;  // predictor says every diamond commutes
};

DiamondSummary analyze_diamonds(const Elaboration& e, const DefEqConfig& config,
                                int max_path_len = kDefaultMaxPathLen);

std::string report_text(const DiamondSummary& s);
std::string report_json(const DiamondSummary& s);

struct Placement {
  // class -> parent placed first (the preferred slot).
  std::map<std::string, std::string> first_parent;
  DiamondSummary summary;
  // Verdicts unchanged when the remaining parents are reversed.
  bool order_invariant = true;
};

struct SpanningResult {
  std::vector<Placement> placements;
  int coherent = 0;            // by the defeq oracle
  int predicted_coherent = 0;  // by the last-segment predictor
  std::vector<std::string> invariance_violations;
};

/// Tries every choice of first parent for every multi-parent class under the
/// nested encoding and checks all diamonds with `config`.
SpanningResult spanning_search(const SurfaceModule& ast,
                               const DefEqConfig& config,
                               int max_path_len = kDefaultMaxPathLen);

std::string spanning_text(const SpanningResult& r, const DefEqConfig& config);
std::string spanning_json(const SpanningResult& r, const DefEqConfig& config);

struct GeneratorOptions {
  int max_classes = 6;
  int max_fields = 4;
  int max_parents = 3;
};

/// A random acyclic class hierarchy in `.hier` syntax. Field names come from
/// a small pool with fixed types so that parents overlap without clashing.
std::string generate_hierarchy(std::uint64_t seed, const GeneratorOptions& opts = {});

}  // namespace hierlab

#endif  // HIERLAB_ANALYZER_H_
