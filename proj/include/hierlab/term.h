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

#ifndef HIERLAB_TERM_H_
#define HIERLAB_TERM_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hierlab {

enum class TermKind : std::uint8_t {
  kSort,
  kBVar,
  kFVar,
  kMeta,
  kConst,
  kApp,
  kLam,
  kPi,
  kMk,
  kProj,
};

enum class BinderKind : std::uint8_t { kExplicit, kInstImplicit };

using MetaId = std::uint32_t;

struct TermNode;

/**
 * An immutable, shared term of the lambda-Pi calculus with single-constructor
 * structures.
 *
 * Bound variables are de Bruijn indices (`BVar`); variables of a local
 * context are named (`FVar`). A term with no loose bound variables is
 * "locally closed"; every public operation that takes a term expects one
 * unless stated otherwise. Binder names and binder kinds are cosmetic:
 * alpha-equivalent terms compare equal under `alpha_eq`.
 */
class Term {
 public:
  Term() = default;

  static Term sort();
  static Term bvar(std::uint32_t index);
  static Term fvar(std::string name);
  static Term meta(MetaId id);
  static Term constant(std::string name);
  static Term app(Term fn, Term arg);
  static Term app(Term fn, std::span<const Term> args);
  static Term lam(std::string binder, Term type, Term body,
                  BinderKind kind = BinderKind::kExplicit);
  static Term pi(std::string binder, Term type, Term body,
                 BinderKind kind = BinderKind::kExplicit);
  static Term mk(std::string struct_name, std::vector<Term> params,
                 std::vector<Term> fields);
  static Term proj(std::string struct_name, std::string field, Term target);

  explicit operator bool() const { return node_ != nullptr; }

  TermKind kind() const;
  bool is(TermKind k) const { return node_ && kind() == k; }

  // Const/FVar name, binder name (Lam/Pi), or structure name (Mk/Proj).
  const std::string& name() const;
  // Proj only.
  const std::string& field() const;
  std::uint32_t bvar_index() const;
  MetaId meta_id() const;
  BinderKind binder_kind() const;

  // App: function/argument. Lam/Pi: binder type/body. Proj: target is `arg`.
  const Term& fn() const;
  const Term& arg() const;
  const Term& binder_type() const;
  const Term& body() const;
  const Term& target() const;
  const std::vector<Term>& params() const;
  const std::vector<Term>& fields() const;

  // One past the largest loose de Bruijn index; 0 for locally closed terms.
  std::uint32_t loose_bvar_range() const;
  bool has_meta() const;
  bool has_fvar() const;

  const TermNode* raw() const { return node_.get(); }

 private:
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const TermNode> node_;
};

struct TermNode {
  TermKind kind = TermKind::kSort;
  BinderKind binder_kind = BinderKind::kExplicit;
  std::uint32_t index = 0;
  std::uint32_t loose_bvar_range = 0;
  bool has_meta = false;
  bool has_fvar = false;
  std::string name;
  std::string field;
  Term a;
  Term b;
  std::vector<Term> params;
  std::vector<Term> fields;
};

/// Structural equality modulo binder names and binder kinds.
bool alpha_eq(const Term& a, const Term& b);

/// Replaces loose BVar(0) in `body` by `value` (locally closed).
Term instantiate(const Term& body, const Term& value);

/// Replaces loose BVar(i), i < n, by values[n - 1 - i]; shifts the rest down.
Term instantiate_rev(const Term& t, std::span<const Term> values);

/// Turns every FVar(name) into a BVar bound by a new enclosing binder.
Term abstract(const Term& t, std::string_view name);

/// Abstracts names[0..n) so that names[n-1] becomes BVar(0).
Term abstract_many(const Term& t, std::span<const std::string> names);

/// Capture-free substitution of free variables by locally closed terms.
Term replace_fvars(const Term& t, const std::map<std::string, Term>& subst);

/// Generic bottom-up rewrite; `fn` returns an empty Term to keep descending.
Term replace(const Term& t,
             const std::function<Term(const Term&, std::uint32_t depth)>& fn);

bool occurs_fvar(const Term& t, std::string_view name);
bool occurs_meta(const Term& t, MetaId id);
void collect_fvars(const Term& t, std::vector<std::string>& out);

/// Head of an application spine and its arguments in order.
const Term& app_head(const Term& t);
std::vector<Term> app_args(const Term& t);

}  // namespace hierlab

#endif  // HIERLAB_TERM_H_
