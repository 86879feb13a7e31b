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

// Environment dumps in text and JSON form.

#include <fmt/core.h>

#include <json.hpp>
#include <string>
#include <vector>

#include "hierlab/elaborator.h"
#include "hierlab/printer.h"

namespace hierlab {

namespace {

using nlohmann::ordered_json;

// Opens a declaration telescope as named locals.
struct Opened {
  Telescope ctx;
  std::vector<Term> vars;

  void push(const Binder& b) {
    ctx.push_back({b.name, instantiate_rev(b.type, vars), b.kind});
    vars.push_back(Term::fvar(b.name));
  }
  std::string show(const Term& t) const {
    return print_term(instantiate_rev(t, vars));
  }
};

const InstanceInfo* find_instance(const Elaboration& e, const std::string& n) {
  for (const InstanceInfo& i : e.instances) {
    if (i.decl_name == n) return &i;
  }
  return nullptr;
}

ordered_json binders_json(const Telescope& ctx) {
  ordered_json out = ordered_json::array();
  for (const Binder& b : ctx) {
    out.push_back({{"name", b.name},
                   {"type", print_term(b.type)},
                   {"kind", b.kind == BinderKind::kInstImplicit ? "instance"
                                                                : "explicit"}});
  }
  return out;
}

}  // namespace

std::string dump_text(const Elaboration& e) {
  std::string out;
  for (const Declaration& d : e.env.declarations()) {
    Opened o;
    if (const StructDecl* s = d.as_struct()) {
      for (const Binder& b : s->params) o.push(b);
      out += fmt::format("{} {}", s->is_class ? "class" : "structure", s->name);
      if (!o.ctx.empty()) out += " " + print_context(o.ctx);
      out += fmt::format(" : Type\n  ctor {}\n", s->ctor);
      for (const Binder& f : s->fields) {
        out += fmt::format("  field {} : {}\n", f.name, o.show(f.type));
        o.vars.push_back(Term::fvar(f.name));
      }
    } else if (const DefDecl* def = d.as_def()) {
      for (const Binder& b : def->binders) o.push(b);
      const InstanceInfo* inst = find_instance(e, def->name);
      if (inst) {
        out += fmt::format("@[priority {}] instance ", inst->priority);
      } else {
        out += "def ";
      }
      out += def->name;
      if (!o.ctx.empty()) out += " " + print_context(o.ctx);
      out += fmt::format(" : {} :=\n  {}\n", o.show(def->result_type),
                         o.show(def->body));
    } else if (const OpaqueDecl* op = d.as_opaque()) {
      for (const Binder& b : op->binders) o.push(b);
      out += "opaque " + op->name;
      if (!o.ctx.empty()) out += " " + print_context(o.ctx);
      out += " : " + o.show(op->result_type) + "\n";
    }
  }
  if (!e.instances.empty()) out += "instances\n";
  for (const InstanceInfo& i : e.instances) {
    std::string edge =
        i.from_class.empty() ? i.to_class : i.from_class + " -> " + i.to_class;
    out += fmt::format("  {} : {} priority {} {}\n", i.decl_name, edge,
                       i.priority, to_string(i.kind));
  }
  for (const GoalSpec& g : e.goals) {
    out += fmt::format("goal {} {} ⊢ {}\n", g.label, print_context(g.ctx),
                       print_term(g.target));
  }
  for (const DefeqSpec& d : e.defeqs) {
    out += fmt::format("defeq {} {} ⊢ {} = {}\n", d.label, print_context(d.ctx),
                       print_term(d.lhs), print_term(d.rhs));
  }
  return out;
}

std::string dump_json(const Elaboration& e) {
  ordered_json decls = ordered_json::array();
  for (const Declaration& d : e.env.declarations()) {
    Opened o;
    ordered_json j;
    if (const StructDecl* s = d.as_struct()) {
      for (const Binder& b : s->params) o.push(b);
      ordered_json fields = ordered_json::array();
      for (const Binder& f : s->fields) {
        fields.push_back({{"name", f.name}, {"type", o.show(f.type)}});
        o.vars.push_back(Term::fvar(f.name));
      }
      j = {{"kind", s->is_class ? "class" : "structure"},
           {"name", s->name},
           {"params", binders_json(o.ctx)},
           {"ctor", s->ctor},
           {"fields", fields}};
    } else if (const DefDecl* def = d.as_def()) {
      for (const Binder& b : def->binders) o.push(b);
      j = {{"kind", "def"},
           {"name", def->name},
           {"binders", binders_json(o.ctx)},
           {"type", o.show(def->result_type)},
           {"body", o.show(def->body)},
           {"reducible", def->reducible}};
    } else if (const OpaqueDecl* op = d.as_opaque()) {
      for (const Binder& b : op->binders) o.push(b);
      j = {{"kind", "opaque"},
           {"name", op->name},
           {"binders", binders_json(o.ctx)},
           {"type", o.show(op->result_type)}};
    }
    decls.push_back(std::move(j));
  }
  ordered_json instances = ordered_json::array();
  for (const InstanceInfo& i : e.instances) {
    instances.push_back({{"name", i.decl_name},
                         {"from", i.from_class},
                         {"to", i.to_class},
                         {"priority", i.priority},
                         {"kind", to_string(i.kind)}});
  }
  ordered_json goals = ordered_json::array();
  for (const GoalSpec& g : e.goals) {
    goals.push_back({{"label", g.label},
                     {"context", binders_json(g.ctx)},
                     {"target", print_term(g.target)}});
  }
  ordered_json defeqs = ordered_json::array();
  for (const DefeqSpec& d : e.defeqs) {
    defeqs.push_back({{"label", d.label},
                      {"context", binders_json(d.ctx)},
                      {"lhs", print_term(d.lhs)},
                      {"rhs", print_term(d.rhs)}});
  }
  ordered_json root = {{"encoding", to_string(e.strategy.encoding)},
                       {"declarations", decls},
                       {"instances", instances},
                       {"goals", goals},
                       {"defeqs", defeqs}};
  return root.dump(2) + "\n";
}

}  // namespace hierlab
