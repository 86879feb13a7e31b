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

#ifndef HIERLAB_ENVIRONMENT_H_
#define HIERLAB_ENVIRONMENT_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "hierlab/term.h"

namespace hierlab {

struct Binder {
  std::string name;
  Term type;
  BinderKind kind = BinderKind::kExplicit;
};

/**
 * An ordered list of binders where each type may mention earlier entries.
 *
 * Two conventions are in use. A *local context* refers to earlier entries by
 * FVar(name). A *declaration telescope* is locally nameless: in entry k,
 * BVar(j) refers to entry k - 1 - j, exactly as if the entries were nested
 * Pi binders.
 */
using Telescope = std::vector<Binder>;

const Binder* find_local(const Telescope& ctx, std::string_view name);

/// Builds Pi/Lam over a declaration telescope (BVar convention).
Term pi_telescope(const Telescope& tele, Term body);
Term lam_telescope(const Telescope& tele, Term body);

/// Converts a local context into the declaration convention by abstracting
/// each entry's name in later types; `body` is abstracted over all names.
Telescope close_telescope(const Telescope& ctx);
Term close_over(const Telescope& ctx, const Term& body);

/**
 * A single-constructor inductive type. Field k's type lives under the params
 * followed by fields 0..k-1 (declaration convention), so
 * `instantiate_rev(fields[k].type, params ++ earlier field values)` yields it.
 */
struct StructDecl {
  std::string name;
  Telescope params;
  Telescope fields;
  std::string ctor;
  bool is_class = true;

  std::optional<std::size_t> field_index(std::string_view field) const;
};

struct DefDecl {
  std::string name;
  Telescope binders;
  Term result_type;
  Term body;
  bool reducible = true;
};

struct OpaqueDecl {
  std::string name;
  Telescope binders;
  Term result_type;
};

class Declaration {
 public:
  using Body = std::variant<StructDecl, DefDecl, OpaqueDecl>;

  Declaration(StructDecl d) : body_(std::move(d)) {}  // NOLINT
  Declaration(DefDecl d) : body_(std::move(d)) {}     // NOLINT
  Declaration(OpaqueDecl d) : body_(std::move(d)) {}  // NOLINT

  const std::string& name() const;
  /// The type of Const(name()).
  Term type() const;
  const Body& body() const { return body_; }

  const StructDecl* as_struct() const { return std::get_if<StructDecl>(&body_); }
  const DefDecl* as_def() const { return std::get_if<DefDecl>(&body_); }
  const OpaqueDecl* as_opaque() const { return std::get_if<OpaqueDecl>(&body_); }

 private:
  Body body_;
};

/// Value of a definition as a closed lambda term.
Term def_value(const DefDecl& d);

/**
 * Ordered global declaration table. Immutable once handed to the kernel;
 * `add` rejects duplicates and references to undeclared names.
 */
class Environment {
 public:
  void add(Declaration d);

  const Declaration* find(std::string_view name) const;
  const StructDecl* find_struct(std::string_view name) const;
  const DefDecl* find_def(std::string_view name) const;
  /// Structure whose constructor is `ctor_name`.
  const StructDecl* find_ctor(std::string_view ctor_name) const;

  const std::vector<Declaration>& declarations() const { return decls_; }
  bool empty() const { return decls_.empty(); }

 private:
  void check_refs(const Declaration& d) const;

  std::vector<Declaration> decls_;
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> ctors_;
};

}  // namespace hierlab

#endif  // HIERLAB_ENVIRONMENT_H_
