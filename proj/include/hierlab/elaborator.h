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

#ifndef HIERLAB_ELABORATOR_H_
#define HIERLAB_ELABORATOR_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hierlab/environment.h"
#include "hierlab/resolution.h"
#include "hierlab/surface.h"
#include "hierlab/term.h"

namespace hierlab {

enum class Encoding { kFlat, kNested, kFlatHack };

const char* to_string(Encoding e);
/// Accepts `flat`, `nested`, `flat-hack` and `flat_hack`.
std::optional<Encoding> parse_encoding(std::string_view s);

/// Name of the empty class inserted by the flat_hack encoding.
inline constexpr const char* kFlatHackClass = "flat_hack";

struct EncodingStrategy {
  Encoding encoding = Encoding::kNested;
  // class -> parent order. A single name moves that parent first; a longer
  // list must be a permutation of the declared parents.
  std::map<std::string, std::vector<std::string>> parent_order;
};

/// A parent class applied to arguments over the derived class's parameters.
struct ParentRef {
  std::string cls;
  std::vector<Term> args;
};

/// Where a leaf field lives: a chain of (structure, field) projections from
/// the derived class, the last naming the leaf itself.
struct FieldOrigin {
  std::string leaf;
  std::vector<std::pair<std::string, std::string>> path;
};

/**
 * Elaborated shape of one class or structure. Terms here use the local
 * context convention: parameters and leaves are referenced by FVar name.
 */
struct ClassLayout {
  std::string name;
  bool is_class = true;
  Telescope params;
  // After overrides (and the flat_hack prefix).
  std::vector<ParentRef> parents;
  // flatten_fields: leaf name and type over params and earlier leaves.
  Telescope leaves;
  std::vector<FieldOrigin> origins;
  // Nested encoding: parents stored as `to_<parent>` fields, in field order.
  std::vector<ParentRef> subobjects;

  const FieldOrigin* origin(std::string_view leaf) const;
};

struct GoalSpec {
  std::string label;
  Telescope ctx;
  Term target;
  Position pos;
};

struct DefeqSpec {
  std::string label;
  Telescope ctx;
  Term lhs;
  Term rhs;
  Position pos;
};

struct Elaboration {
  Environment env;
  std::vector<InstanceInfo> instances;
  std::vector<GoalSpec> goals;
  std::vector<DefeqSpec> defeqs;
  Telescope variables;
  EncodingStrategy strategy;
  std::map<std::string, ClassLayout> layouts;
  // Classes and structures in declaration order.
  std::vector<std::string> order;

  const ClassLayout* layout(std::string_view name) const;
  const GoalSpec* goal(std::string_view label) const;
  const DefeqSpec* defeq(std::string_view label) const;
};

/**
 * Leaf fields of `cls`: the parents' leaves in parent order (first
 * occurrence kept), then its own fields. The class must already be in `so_far`.
 */
Telescope flatten_fields(const std::string& cls, const Elaboration& so_far);

/// Throws ParseError/ScopeError from name resolution, FieldTypeClash,
/// OverrideInvalid or ElabError.
Elaboration elaborate(const SurfaceModule& ast, const EncodingStrategy& strategy);

struct InstanceEdge {
  std::string from;
  std::string to;
  std::string decl;
};

/// The preferred-projection instances as derived -> parent edges.
std::vector<InstanceEdge> preferred_edges(const std::vector<InstanceInfo>& instances);

/// Environment dump for golden tests: declarations then instances.
std::string dump_text(const Elaboration& e);
std::string dump_json(const Elaboration& e);

}  // namespace hierlab

#endif  // HIERLAB_ELABORATOR_H_
