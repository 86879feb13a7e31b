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

#include "hierlab/environment.h"

#include <fmt/core.h>

#include "hierlab/errors.h"

namespace hierlab {

const Binder* find_local(const Telescope& ctx, std::string_view name) {
  for (auto it = ctx.rbegin(); it != ctx.rend(); ++it) {
    if (it->name == name) return &*it;
  }
  return nullptr;
}

Term pi_telescope(const Telescope& tele, Term body) {
  for (auto it = tele.rbegin(); it != tele.rend(); ++it) {
    body = Term::pi(it->name, it->type, std::move(body), it->kind);
  }
  return body;
}

Term lam_telescope(const Telescope& tele, Term body) {
  for (auto it = tele.rbegin(); it != tele.rend(); ++it) {
    body = Term::lam(it->name, it->type, std::move(body), it->kind);
  }
  return body;
}

Telescope close_telescope(const Telescope& ctx) {
  Telescope out;
  std::vector<std::string> names;
  for (const Binder& b : ctx) {
    out.push_back({b.name, abstract_many(b.type, names), b.kind});
    names.push_back(b.name);
  }
  return out;
}

Term close_over(const Telescope& ctx, const Term& body) {
  std::vector<std::string> names;
  names.reserve(ctx.size());
  for (const Binder& b : ctx) names.push_back(b.name);
  return abstract_many(body, names);
}

std::optional<std::size_t> StructDecl::field_index(std::string_view field) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == field) return i;
  }
  return std::nullopt;
}

const std::string& Declaration::name() const {
  return std::visit([](const auto& d) -> const std::string& { return d.name; },
                    body_);
}

Term Declaration::type() const {
  if (const auto* s = as_struct()) return pi_telescope(s->params, Term::sort());
  if (const auto* d = as_def()) return pi_telescope(d->binders, d->result_type);
  const auto& o = std::get<OpaqueDecl>(body_);
  return pi_telescope(o.binders, o.result_type);
}

Term def_value(const DefDecl& d) { return lam_telescope(d.binders, d.body); }

namespace {

void collect_globals(const Term& t, std::vector<std::string>& out) {
  if (!t) return;
  replace(t, [&](const Term& s, std::uint32_t) -> Term {
    switch (s.kind()) {
      case TermKind::kConst:
        out.push_back(s.name());
        return s;
      case TermKind::kMk:
      case TermKind::kProj:
        out.push_back(s.name());
        return Term{};
      case TermKind::kMeta:
        throw EnvironmentError("metavariable in a stored declaration");
      default:
        return Term{};
    }
  });
}

}  // namespace

void Environment::check_refs(const Declaration& d) const {
  std::vector<std::string> refs;
  auto tele = [&](const Telescope& t) {
    for (const Binder& b : t) collect_globals(b.type, refs);
  };
  if (const auto* s = d.as_struct()) {
    tele(s->params);
    tele(s->fields);
  } else if (const auto* def = d.as_def()) {
    tele(def->binders);
    collect_globals(def->result_type, refs);
    collect_globals(def->body, refs);
  } else if (const auto* o = d.as_opaque()) {
    tele(o->binders);
    collect_globals(o->result_type, refs);
  }
  for (const std::string& r : refs) {
    if (!index_.contains(r)) {
      throw EnvironmentError(fmt::format(
          "declaration '{}' refers to undeclared '{}'", d.name(), r));
    }
  }
}

void Environment::add(Declaration d) {
  const std::string& name = d.name();
  if (index_.contains(name) || ctors_.contains(name)) {
    throw EnvironmentError(fmt::format("duplicate declaration '{}'", name));
  }
  check_refs(d);
  if (const auto* s = d.as_struct()) {
    if (index_.contains(s->ctor) || ctors_.contains(s->ctor)) {
      throw EnvironmentError(fmt::format("duplicate declaration '{}'", s->ctor));
    }
    ctors_.emplace(s->ctor, decls_.size());
  }
  index_.emplace(name, decls_.size());
  decls_.push_back(std::move(d));
}

const Declaration* Environment::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &decls_[it->second];
}

const StructDecl* Environment::find_struct(std::string_view name) const {
  const Declaration* d = find(name);
  return d ? d->as_struct() : nullptr;
}

const DefDecl* Environment::find_def(std::string_view name) const {
  const Declaration* d = find(name);
  return d ? d->as_def() : nullptr;
}

const StructDecl* Environment::find_ctor(std::string_view ctor_name) const {
  auto it = ctors_.find(std::string(ctor_name));
  return it == ctors_.end() ? nullptr : decls_[it->second].as_struct();
}

}  // namespace hierlab
