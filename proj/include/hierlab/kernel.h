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

#ifndef HIERLAB_KERNEL_H_
#define HIERLAB_KERNEL_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hierlab/environment.h"
#include "hierlab/term.h"

namespace hierlab {

/**
 * Reduction and comparison settings.
 *
 * `eta_kernel` enables structure eta inside `defeq`; `eta_unifier` enables it
 * inside `unify` (and therefore instance search). The defaults model a kernel
 * with structure eta whose instance search does not use it.
 */
struct DefEqConfig {
  bool eta_kernel = true;
  bool eta_unifier = false;
  int unfold_depth = 256;

  void validate() const;
};

struct MetaDecl {
  std::string hint;
  Term type;
  BinderKind kind = BinderKind::kExplicit;
  std::optional<Term> value;
};

/// Caller-owned metavariable store; cheap to copy for backtracking.
class MetaContext {
 public:
  MetaId fresh(std::string hint, Term type,
               BinderKind kind = BinderKind::kExplicit);
  const MetaDecl& decl(MetaId id) const { return metas_.at(id); }
  bool is_assigned(MetaId id) const { return metas_.at(id).value.has_value(); }
  void assign(MetaId id, Term value);
  std::size_t size() const { return metas_.size(); }

  /// Substitutes assigned metavariables, transitively.
  Term instantiate(const Term& t) const;

 private:
  std::vector<MetaDecl> metas_;
};

using Trace = std::vector<std::string>;

/// Weak-head normal form: beta, delta (fuelled), iota. Never eta.
Term whnf(const Environment& env, const DefEqConfig& config,
          const Telescope& ctx, const Term& t, Trace* trace = nullptr);

/// Type of `t` without checking argument types. Throws IllTyped.
Term infer_type(const Environment& env, const Telescope& ctx, const Term& t,
                const MetaContext* metas = nullptr);

/// Full type check: also verifies application arguments and constructor
/// fields against their expected types (eta per `config.eta_kernel`).
Term check_type(const Environment& env, const DefEqConfig& config,
                const Telescope& ctx, const Term& t);

struct DefEqResult {
  bool equal = false;
  Trace trace;
};

DefEqResult defeq(const Environment& env, const DefEqConfig& config,
                  const Telescope& ctx, const Term& a, const Term& b);

enum class UnifyStatus { kSuccess, kOccursCheck, kMismatch };

struct UnifyResult {
  UnifyStatus status = UnifyStatus::kMismatch;
  // kOccursCheck: the offending metavariable.
  MetaId meta = 0;
  // kMismatch: the first pair of weak-head normal forms that did not match.
  Term lhs;
  Term rhs;
  Trace trace;

  bool ok() const { return status == UnifyStatus::kSuccess; }
};

/**
 * First-order unification. Unassigned metavariables in `a` or `b` may be
 * assigned; structure eta follows `config.eta_unifier`. `metas` is updated
 * only on success.
 */
UnifyResult unify(const Environment& env, const DefEqConfig& config,
                  const Telescope& ctx, MetaContext& metas, const Term& a,
                  const Term& b);

/// Struct name and parameters of a type of the form `S p1 .. pn`.
struct StructApp {
  const StructDecl* decl = nullptr;
  std::vector<Term> params;
};
std::optional<StructApp> as_struct_app(const Environment& env,
                                       const DefEqConfig& config,
                                       const Telescope& ctx, const Term& type,
                                       const MetaContext* metas = nullptr);

/// Type of field `index` of `decl` for a value `target` with the given params.
Term field_type(const StructDecl& decl, const std::vector<Term>& params,
                std::size_t index, const Term& target);

/// A name not bound in `ctx`, derived from `base` (never user-writable).
std::string fresh_local_name(const Telescope& ctx, const std::string& base);

}  // namespace hierlab

#endif  // HIERLAB_KERNEL_H_
