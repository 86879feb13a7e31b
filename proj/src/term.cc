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

#include "hierlab/term.h"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <utility>

namespace hierlab {

namespace {

std::shared_ptr<TermNode> make_node(TermKind kind) {
  auto n = std::make_shared<TermNode>();
  n->kind = kind;
  return n;
}

void absorb(TermNode& n, const Term& child, std::uint32_t binders_crossed) {
  if (!child) return;
  std::uint32_t r = child.loose_bvar_range();
  if (r > binders_crossed) {
    n.loose_bvar_range = std::max(n.loose_bvar_range, r - binders_crossed);
  }
  n.has_meta = n.has_meta || child.has_meta();
  n.has_fvar = n.has_fvar || child.has_fvar();
}

const std::vector<Term> kEmpty;
const std::string kEmptyString;

}  // namespace

Term Term::sort() {
  static const Term s{make_node(TermKind::kSort)};
  return s;
}

Term Term::bvar(std::uint32_t index) {
  auto n = make_node(TermKind::kBVar);
  n->index = index;
  n->loose_bvar_range = index + 1;
  return Term{std::move(n)};
}

Term Term::fvar(std::string name) {
  auto n = make_node(TermKind::kFVar);
  n->name = std::move(name);
  n->has_fvar = true;
  return Term{std::move(n)};
}

Term Term::meta(MetaId id) {
  auto n = make_node(TermKind::kMeta);
  n->index = id;
  n->has_meta = true;
  return Term{std::move(n)};
}

Term Term::constant(std::string name) {
  auto n = make_node(TermKind::kConst);
  n->name = std::move(name);
  return Term{std::move(n)};
}

Term Term::app(Term fn, Term arg) {
  assert(fn && arg);
  auto n = make_node(TermKind::kApp);
  absorb(*n, fn, 0);
  absorb(*n, arg, 0);
  n->a = std::move(fn);
  n->b = std::move(arg);
  return Term{std::move(n)};
}

Term Term::app(Term fn, std::span<const Term> args) {
  for (const Term& a : args) fn = app(std::move(fn), a);
  return fn;
}

Term Term::lam(std::string binder, Term type, Term body, BinderKind kind) {
  auto n = make_node(TermKind::kLam);
  n->name = std::move(binder);
  n->binder_kind = kind;
  absorb(*n, type, 0);
  absorb(*n, body, 1);
  n->a = std::move(type);
  n->b = std::move(body);
  return Term{std::move(n)};
}

Term Term::pi(std::string binder, Term type, Term body, BinderKind kind) {
  auto n = make_node(TermKind::kPi);
  n->name = std::move(binder);
  n->binder_kind = kind;
  absorb(*n, type, 0);
  absorb(*n, body, 1);
  n->a = std::move(type);
  n->b = std::move(body);
  return Term{std::move(n)};
}

Term Term::mk(std::string struct_name, std::vector<Term> params,
              std::vector<Term> fields) {
  auto n = make_node(TermKind::kMk);
  n->name = std::move(struct_name);
  for (const Term& p : params) absorb(*n, p, 0);
  for (const Term& f : fields) absorb(*n, f, 0);
  n->params = std::move(params);
  n->fields = std::move(fields);
  return Term{std::move(n)};
}

Term Term::proj(std::string struct_name, std::string field, Term target) {
  auto n = make_node(TermKind::kProj);
  n->name = std::move(struct_name);
  n->field = std::move(field);
  absorb(*n, target, 0);
  n->a = std::move(target);
  return Term{std::move(n)};
}

TermKind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::string& Term::field() const { return node_->field; }
std::uint32_t Term::bvar_index() const { return node_->index; }
MetaId Term::meta_id() const { return node_->index; }
BinderKind Term::binder_kind() const { return node_->binder_kind; }
const Term& Term::fn() const { return node_->a; }
const Term& Term::arg() const { return node_->b; }
const Term& Term::binder_type() const { return node_->a; }
const Term& Term::body() const { return node_->b; }
const Term& Term::target() const { return node_->a; }
const std::vector<Term>& Term::params() const {
  return node_ ? node_->params : kEmpty;
}
const std::vector<Term>& Term::fields() const {
  return node_ ? node_->fields : kEmpty;
}
std::uint32_t Term::loose_bvar_range() const {
  return node_ ? node_->loose_bvar_range : 0;
}
bool Term::has_meta() const { return node_ && node_->has_meta; }
bool Term::has_fvar() const { return node_ && node_->has_fvar; }

bool alpha_eq(const Term& a, const Term& b) {
  if (a.raw() == b.raw()) return true;
  if (!a || !b || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::kSort:
      return true;
    case TermKind::kBVar:
      return a.bvar_index() == b.bvar_index();
    case TermKind::kFVar:
    case TermKind::kConst:
      return a.name() == b.name();
    case TermKind::kMeta:
      return a.meta_id() == b.meta_id();
    case TermKind::kApp:
      return alpha_eq(a.fn(), b.fn()) && alpha_eq(a.arg(), b.arg());
    case TermKind::kLam:
    case TermKind::kPi:
      return alpha_eq(a.binder_type(), b.binder_type()) &&
             alpha_eq(a.body(), b.body());
    case TermKind::kMk:
      if (a.name() != b.name() || a.params().size() != b.params().size() ||
          a.fields().size() != b.fields().size()) {
        return false;
      }
      for (size_t i = 0; i < a.params().size(); ++i) {
        if (!alpha_eq(a.params()[i], b.params()[i])) return false;
      }
      for (size_t i = 0; i < a.fields().size(); ++i) {
        if (!alpha_eq(a.fields()[i], b.fields()[i])) return false;
      }
      return true;
    case TermKind::kProj:
      return a.name() == b.name() && a.field() == b.field() &&
             alpha_eq(a.target(), b.target());
  }
  return false;
}

namespace {

Term replace_rec(const Term& t, std::uint32_t depth,
                 const std::function<Term(const Term&, std::uint32_t)>& fn) {
  if (Term r = fn(t, depth)) return r;
  switch (t.kind()) {
    case TermKind::kSort:
    case TermKind::kBVar:
    case TermKind::kFVar:
    case TermKind::kMeta:
    case TermKind::kConst:
      return t;
    case TermKind::kApp: {
      Term f = replace_rec(t.fn(), depth, fn);
      Term a = replace_rec(t.arg(), depth, fn);
      if (f.raw() == t.fn().raw() && a.raw() == t.arg().raw()) return t;
      return Term::app(std::move(f), std::move(a));
    }
    case TermKind::kLam:
    case TermKind::kPi: {
      Term ty = replace_rec(t.binder_type(), depth, fn);
      Term body = replace_rec(t.body(), depth + 1, fn);
      if (ty.raw() == t.binder_type().raw() && body.raw() == t.body().raw()) {
        return t;
      }
      return t.kind() == TermKind::kLam
                 ? Term::lam(t.name(), std::move(ty), std::move(body),
                             t.binder_kind())
                 : Term::pi(t.name(), std::move(ty), std::move(body),
                            t.binder_kind());
    }
    case TermKind::kMk: {
      bool changed = false;
      std::vector<Term> ps, fs;
      ps.reserve(t.params().size());
      fs.reserve(t.fields().size());
      for (const Term& p : t.params()) {
        ps.push_back(replace_rec(p, depth, fn));
        changed = changed || ps.back().raw() != p.raw();
      }
      for (const Term& f : t.fields()) {
        fs.push_back(replace_rec(f, depth, fn));
        changed = changed || fs.back().raw() != f.raw();
      }
      if (!changed) return t;
      return Term::mk(t.name(), std::move(ps), std::move(fs));
    }
    case TermKind::kProj: {
      Term x = replace_rec(t.target(), depth, fn);
      if (x.raw() == t.target().raw()) return t;
      return Term::proj(t.name(), t.field(), std::move(x));
    }
  }
  return t;
}

}  // namespace

Term replace(const Term& t,
             const std::function<Term(const Term&, std::uint32_t)>& fn) {
  return replace_rec(t, 0, fn);
}

Term instantiate(const Term& body, const Term& value) {
  Term vals[] = {value};
  return instantiate_rev(body, vals);
}

Term instantiate_rev(const Term& t, std::span<const Term> values) {
  const auto n = static_cast<std::uint32_t>(values.size());
  if (t.loose_bvar_range() == 0 || n == 0) return t;
  return replace(t, [&](const Term& s, std::uint32_t depth) -> Term {
    if (s.loose_bvar_range() <= depth) return s;
    if (s.is(TermKind::kBVar)) {
      std::uint32_t i = s.bvar_index();
      if (i < depth) return s;
      if (i - depth < n) {
        const Term& v = values[n - 1 - (i - depth)];
        if (v.loose_bvar_range() != 0) {
          throw std::logic_error("instantiate: value is not locally closed");
        }
        return v;
      }
      return Term::bvar(i - n);
    }
    return Term{};
  });
}

Term abstract(const Term& t, std::string_view name) {
  std::string n(name);
  return abstract_many(t, std::span<const std::string>(&n, 1));
}

Term abstract_many(const Term& t, std::span<const std::string> names) {
  if (!t.has_fvar() || names.empty()) return t;
  const auto n = static_cast<std::uint32_t>(names.size());
  return replace(t, [&](const Term& s, std::uint32_t depth) -> Term {
    if (!s.has_fvar()) return s;
    if (s.is(TermKind::kFVar)) {
      for (std::uint32_t k = n; k-- > 0;) {
        if (names[k] == s.name()) return Term::bvar(depth + (n - 1 - k));
      }
      return s;
    }
    return Term{};
  });
}

Term replace_fvars(const Term& t, const std::map<std::string, Term>& subst) {
  if (!t.has_fvar() || subst.empty()) return t;
  return replace(t, [&](const Term& s, std::uint32_t) -> Term {
    if (!s.has_fvar()) return s;
    if (s.is(TermKind::kFVar)) {
      auto it = subst.find(s.name());
      return it == subst.end() ? s : it->second;
    }
    return Term{};
  });
}

bool occurs_fvar(const Term& t, std::string_view name) {
  bool found = false;
  replace(t, [&](const Term& s, std::uint32_t) -> Term {
    if (found || !s.has_fvar()) return s;
    if (s.is(TermKind::kFVar)) {
      found = found || s.name() == name;
      return s;
    }
    return Term{};
  });
  return found;
}

bool occurs_meta(const Term& t, MetaId id) {
  bool found = false;
  replace(t, [&](const Term& s, std::uint32_t) -> Term {
    if (found || !s.has_meta()) return s;
    if (s.is(TermKind::kMeta)) {
      found = found || s.meta_id() == id;
      return s;
    }
    return Term{};
  });
  return found;
}

void collect_fvars(const Term& t, std::vector<std::string>& out) {
  replace(t, [&](const Term& s, std::uint32_t) -> Term {
    if (!s.has_fvar()) return s;
    if (s.is(TermKind::kFVar)) {
      if (std::find(out.begin(), out.end(), s.name()) == out.end()) {
        out.push_back(s.name());
      }
      return s;
    }
    return Term{};
  });
}

const Term& app_head(const Term& t) {
  const Term* h = &t;
  while (h->is(TermKind::kApp)) h = &h->fn();
  return *h;
}

std::vector<Term> app_args(const Term& t) {
  std::vector<Term> args;
  const Term* h = &t;
  while (h->is(TermKind::kApp)) {
    args.push_back(h->arg());
    h = &h->fn();
  }
  std::reverse(args.begin(), args.end());
  return args;
}

}  // namespace hierlab
