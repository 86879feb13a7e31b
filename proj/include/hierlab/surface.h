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

#ifndef HIERLAB_SURFACE_H_
#define HIERLAB_SURFACE_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hierlab/environment.h"
#include "hierlab/errors.h"
#include "hierlab/term.h"

namespace hierlab {

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

struct SBinder {
  std::string name;
  SExprPtr type;
  BinderKind kind = BinderKind::kExplicit;
  // `[C x]` with no name; `name` then holds a generated one.
  bool anonymous = false;
  Position pos;
};

/**
 * Surface expression, kept exactly as written (names unresolved) so that the
 * module printer round-trips.
 */
struct SExpr {
  enum class Kind {
    kIdent,  // possibly dotted: `ring.to_semiring`, `i.to_semiring.neg`
    kType,
    kApp,    // items[0] applied to items[1..]
    kArrow,  // binder (named or anonymous domain) → body
    kFun,    // fun binder => body
    kProj,   // items[0].name, for non-identifier targets: `(f x).g`
  };
  Kind kind = Kind::kIdent;
  Position pos;
  std::string name;
  // kIdent in head position of `@f`.
  bool explicit_at = false;
  std::vector<SExprPtr> items;
  // kArrow/kFun. A non-dependent arrow has an empty binder name.
  SBinder binder;
  SExprPtr body;
};

struct SField {
  std::string name;
  SExprPtr type;
  Position pos;
};

struct ClassItem {
  std::string name;
  // `structure` items are not typeclasses.
  bool is_class = true;
  std::vector<SBinder> params;
  std::vector<SExprPtr> extends;
  std::vector<SField> fields;
  Position pos;
};

struct SAssign {
  std::string name;
  SExprPtr value;  // null means `opaque`
  Position pos;
};

struct InstanceItem {
  std::string name;
  std::optional<int> priority;
  std::vector<SBinder> binders;
  SExprPtr target;
  std::vector<SAssign> assigns;
  // `:= term` form; null when the `where` form is used.
  SExprPtr body;
  Position pos;
};

struct VariablesItem {
  std::vector<SBinder> binders;
  Position pos;
};

struct GoalItem {
  std::string label;
  std::vector<SBinder> binders;
  SExprPtr type;
  Position pos;
};

struct DefeqItem {
  std::string label;
  std::vector<SBinder> binders;
  SExprPtr lhs;
  SExprPtr rhs;
  Position pos;
};

/// `opaque name binders : type`, an axiomatized constant such as `int`.
struct OpaqueItem {
  std::string name;
  std::vector<SBinder> binders;
  SExprPtr type;
  Position pos;
};

using SurfaceItem = std::variant<ClassItem, InstanceItem, VariablesItem,
                                 GoalItem, DefeqItem, OpaqueItem>;

struct SurfaceModule {
  std::vector<SurfaceItem> items;
};

/// Parses a `.hier` file. Throws ParseError or ScopeError (first diagnostic).
SurfaceModule parse(std::string_view text);

/// Parses a standalone expression (no scope checking).
SExprPtr parse_expr(std::string_view text);

/// Parses a binder list such as `(R : Type) [iR : ring R]`.
std::vector<SBinder> parse_binders(std::string_view text);

/// Renders a module back to `.hier` text; parse(print(m)) prints identically.
std::string print_module(const SurfaceModule& m);
std::string print_sexpr(const SExpr& e);

/**
 * Resolves surface expressions to kernel terms against a local context and
 * an environment. Identifiers resolve to locals first, then globals;
 * `S.mk` consumes its parameters and fields from the application;
 * `x.f` projects, inferring the structure from the type of `x` and following
 * substructure fields when `f` is an inherited leaf.
 */
class TermBuilder {
 public:
  TermBuilder(const Environment& env, Telescope ctx);

  Term build(const SExpr& e);
  /// Builds binder types into the context, returning the added entries.
  Telescope push_binders(const std::vector<SBinder>& binders);

  const Telescope& ctx() const { return ctx_; }
  void push(Binder b) { ctx_.push_back(std::move(b)); }
  void pop() { ctx_.pop_back(); }

  /// `target.field`, following substructure fields for inherited leaves.
  Term project(const Term& target, const std::string& field, Position pos);

 private:
  Term build_app(const SExpr& head, std::vector<Term> args, Position pos);
  Term resolve_ident(const std::string& name, Position pos);

  const Environment& env_;
  Telescope ctx_;
};

/// Parses and resolves a term in `ctx`; with `check` the result is typechecked.
Term parse_term(std::string_view text, const Telescope& ctx,
                const Environment& env, bool check = false);

/// Parses binders text into a local context (named convention).
Telescope parse_context(std::string_view text, const Environment& env,
                        Telescope base = {});

}  // namespace hierlab

#endif  // HIERLAB_SURFACE_H_
