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

#include "hierlab/elaborator.h"

#include <fmt/core.h>

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hierlab/errors.h"
#include "hierlab/kernel.h"
#include "hierlab/printer.h"

namespace hierlab {

const char* to_string(Encoding e) {
  switch (e) {
    case Encoding::kFlat:
      return "flat";
    case Encoding::kNested:
      return "nested";
    case Encoding::kFlatHack:
      return "flat-hack";
  }
  return "?";
}

std::optional<Encoding> parse_encoding(std::string_view s) {
  if (s == "flat") return Encoding::kFlat;
  if (s == "nested") return Encoding::kNested;
  if (s == "flat-hack" || s == "flat_hack") return Encoding::kFlatHack;
  return std::nullopt;
}

const FieldOrigin* ClassLayout::origin(std::string_view leaf) const {
  for (const FieldOrigin& o : origins) {
    if (o.leaf == leaf) return &o;
  }
  return nullptr;
}

const ClassLayout* Elaboration::layout(std::string_view name) const {
  auto it = layouts.find(std::string(name));
  return it == layouts.end() ? nullptr : &it->second;
}

const GoalSpec* Elaboration::goal(std::string_view label) const {
  for (const GoalSpec& g : goals) {
    if (g.label == label) return &g;
  }
  return nullptr;
}

const DefeqSpec* Elaboration::defeq(std::string_view label) const {
  for (const DefeqSpec& d : defeqs) {
    if (d.label == label) return &d;
  }
  return nullptr;
}

Telescope flatten_fields(const std::string& cls, const Elaboration& so_far) {
  const ClassLayout* l = so_far.layout(cls);
  if (!l) throw ElabError("unknown class '" + cls + "'");
  return l->leaves;
}

std::vector<InstanceEdge> preferred_edges(
    const std::vector<InstanceInfo>& instances) {
  std::vector<InstanceEdge> out;
  for (const InstanceInfo& i : instances) {
    if (i.kind == InstanceKind::kPreferred) {
      out.push_back({i.from_class, i.to_class, i.decl_name});
    }
  }
  return out;
}

namespace {

std::vector<Term> fvars_of(const Telescope& ctx) {
  std::vector<Term> out;
  for (const Binder& b : ctx) out.push_back(Term::fvar(b.name));
  return out;
}

std::map<std::string, Term> param_subst(const Telescope& params,
                                        const std::vector<Term>& args) {
  std::map<std::string, Term> s;
  for (std::size_t i = 0; i < params.size(); ++i) s[params[i].name] = args[i];
  return s;
}

void check_distinct(const Telescope& ctx, Position pos) {
  std::set<std::string> seen;
  for (const Binder& b : ctx) {
    if (!seen.insert(b.name).second) {
      throw ElabError("duplicate binder name '" + b.name + "'", pos);
    }
  }
}

class Elaborator {
 public:
  explicit Elaborator(const EncodingStrategy& strategy) {
    out_.strategy = strategy;
    check_.eta_kernel = false;
  }

  Elaboration run(const SurfaceModule& ast) {
    std::set<std::string> declared;
    for (const SurfaceItem& item : ast.items) {
      if (auto* c = std::get_if<ClassItem>(&item)) declared.insert(c->name);
    }
    for (const auto& [cls, order] : out_.strategy.parent_order) {
      if (!declared.contains(cls)) {
        throw OverrideInvalid("parent order given for unknown class '" + cls +
                              "'");
      }
    }
    if (out_.strategy.encoding == Encoding::kFlatHack) {
      if (declared.contains(kFlatHackClass)) {
        throw ElabError(fmt::format("class name '{}' is reserved by the "
                                    "flat-hack encoding",
                                    kFlatHackClass));
      }
      add_flat_hack();
    }
    for (const SurfaceItem& item : ast.items) {
      std::visit([this](const auto& it) { this->item(it); }, item);
    }
    return std::move(out_);
  }

 private:
  bool nested() const { return out_.strategy.encoding != Encoding::kFlat; }

  const ClassLayout& layout(const std::string& name) const {
    return out_.layouts.at(name);
  }

  void add_layout(ClassLayout l) {
    out_.order.push_back(l.name);
    std::string name = l.name;
    out_.layouts.emplace(std::move(name), std::move(l));
  }

  void add_flat_hack() {
    ClassLayout l;
    l.name = kFlatHackClass;
    out_.env.add(StructDecl{l.name, {}, {}, l.name + ".mk", true});
    add_layout(std::move(l));
  }

  // Classes

  std::vector<ParentRef> ordered_parents(const ClassItem& c,
                                         std::vector<ParentRef> parents) {
    auto it = out_.strategy.parent_order.find(c.name);
    if (it != out_.strategy.parent_order.end()) {
      const std::vector<std::string>& order = it->second;
      auto index_of = [&](const std::string& n) -> std::ptrdiff_t {
        for (std::size_t i = 0; i < parents.size(); ++i) {
          if (parents[i].cls == n) return static_cast<std::ptrdiff_t>(i);
        }
        return -1;
      };
      if (order.size() == 1) {
        std::ptrdiff_t i = index_of(order[0]);
        if (i < 0) {
          throw OverrideInvalid(fmt::format("'{}' is not a parent of '{}'",
                                            order[0], c.name),
                                c.pos);
        }
        std::rotate(parents.begin(), parents.begin() + i,
                    parents.begin() + i + 1);
      } else {
        std::vector<std::string> want = order, have;
        for (const ParentRef& p : parents) have.push_back(p.cls);
        std::sort(want.begin(), want.end());
        std::sort(have.begin(), have.end());
        if (want != have) {
          throw OverrideInvalid(
              fmt::format("parent order for '{}' is not a permutation of its "
                          "parents",
                          c.name),
              c.pos);
        }
        std::vector<ParentRef> reordered;
        for (const std::string& n : order) reordered.push_back(parents[index_of(n)]);
        parents = std::move(reordered);
      }
    }
    if (out_.strategy.encoding == Encoding::kFlatHack && c.is_class) {
      parents.insert(parents.begin(), ParentRef{kFlatHackClass, {}});
    }
    return parents;
  }

  // Names visible inside `cls` in the nested encoding: leaves and the
  // `to_*` subobject fields, recursively.
  std::set<std::string> reachable_names(const std::string& cls) const {
    const ClassLayout& l = layout(cls);
    std::set<std::string> out;
    for (const Binder& b : l.leaves) out.insert(b.name);
    for (const ParentRef& s : l.subobjects) {
      out.insert("to_" + s.cls);
      std::set<std::string> inner = reachable_names(s.cls);
      out.insert(inner.begin(), inner.end());
    }
    return out;
  }

  void item(const ClassItem& c) {
    ClassLayout l;
    l.name = c.name;
    l.is_class = c.is_class;
    TermBuilder b(out_.env, {});
    l.params = b.push_binders(c.params);
    check_distinct(l.params, c.pos);

    std::vector<ParentRef> parents;
    for (const SExprPtr& e : c.extends) {
      Term t = b.build(*e);
      Term head = app_head(t);
      const ClassLayout* pl =
          head.is(TermKind::kConst) ? out_.layout(head.name()) : nullptr;
      if (!pl || !pl->is_class) {
        throw ElabError("parent '" + print_sexpr(*e) + "' is not a class",
                        e->pos);
      }
      std::vector<Term> args = app_args(t);
      if (args.size() != pl->params.size()) {
        throw ElabError(fmt::format("parent '{}' expects {} arguments",
                                    pl->name, pl->params.size()),
                        e->pos);
      }
      kernel_guard(e->pos, [&] { check_type(out_.env, check_, l.params, t); });
      for (const ParentRef& p : parents) {
        if (p.cls == pl->name) {
          throw ElabError("parent '" + p.cls + "' listed twice", e->pos);
        }
      }
      parents.push_back({pl->name, std::move(args)});
    }
    l.parents = ordered_parents(c, std::move(parents));

    // Leaves: inherited in parent order, merged at first occurrence.
    auto add_leaf = [&](const std::string& name, const Term& type,
                        Position pos) {
      for (const Binder& p : l.params) {
        if (p.name == name) {
          throw ElabError(fmt::format("field '{}' of '{}' clashes with a "
                                      "parameter",
                                      name, c.name),
                          pos);
        }
      }
      for (const Binder& have : l.leaves) {
        if (have.name != name) continue;
        if (!alpha_eq(have.type, type)) {
          throw FieldTypeClash(c.name, name, print_term(have.type),
                               print_term(type), pos);
        }
        return false;
      }
      l.leaves.push_back({name, type, BinderKind::kExplicit});
      return true;
    };
    for (const ParentRef& p : l.parents) {
      const ClassLayout& pl = layout(p.cls);
      auto subst = param_subst(pl.params, p.args);
      for (const Binder& leaf : pl.leaves) {
        add_leaf(leaf.name, replace_fvars(leaf.type, subst), c.pos);
      }
    }
    std::vector<std::string> own;
    for (const SField& f : c.fields) {
      Telescope ctx = l.params;
      ctx.insert(ctx.end(), l.leaves.begin(), l.leaves.end());
      TermBuilder fb(out_.env, ctx);
      Term ty = fb.build(*f.type);
      kernel_guard(f.pos, [&] {
        Term s = whnf(out_.env, check_, ctx,
                      check_type(out_.env, check_, ctx, ty));
        if (!s.is(TermKind::kSort)) {
          throw IllTyped("type of field '" + f.name + "' is not a type");
        }
      });
      if (add_leaf(f.name, ty, f.pos)) own.push_back(f.name);
    }

    // Structure fields under the chosen encoding, with named types.
    Telescope fields;
    std::set<std::string> collected;
    auto add_direct = [&](const std::string& leaf) {
      const Binder* b = find_local(l.leaves, leaf);
      fields.push_back({leaf, b->type, BinderKind::kExplicit});
      collected.insert(leaf);
      l.origins.push_back({leaf, {{c.name, leaf}}});
    };
    if (!nested()) {
      for (const Binder& leaf : l.leaves) add_direct(leaf.name);
    } else {
      for (const ParentRef& p : l.parents) {
        std::set<std::string> reach = reachable_names(p.cls);
        bool disjoint = std::none_of(reach.begin(), reach.end(),
                                     [&](const std::string& n) {
                                       return collected.contains(n);
                                     });
        const ClassLayout& pl = layout(p.cls);
        if (disjoint) {
          std::string fname = "to_" + p.cls;
          fields.push_back({fname,
                            Term::app(Term::constant(p.cls), p.args),
                            BinderKind::kExplicit});
          collected.insert(fname);
          collected.insert(reach.begin(), reach.end());
          for (const FieldOrigin& o : pl.origins) {
            FieldOrigin n{o.leaf, {{c.name, fname}}};
            n.path.insert(n.path.end(), o.path.begin(), o.path.end());
            l.origins.push_back(std::move(n));
          }
          l.subobjects.push_back(p);
        } else {
          for (const Binder& leaf : pl.leaves) {
            if (!collected.contains(leaf.name)) add_direct(leaf.name);
          }
        }
      }
      for (const std::string& f : own) {
        if (!collected.contains(f)) add_direct(f);
      }
    }

    // Leaves referenced in a field type become projections of earlier fields.
    std::map<std::string, Term> leaf_terms;
    for (const FieldOrigin& o : l.origins) {
      Term t = Term::fvar(o.path.front().second);
      for (std::size_t i = 1; i < o.path.size(); ++i) {
        t = Term::proj(o.path[i].first, o.path[i].second, t);
      }
      leaf_terms[o.leaf] = t;
    }
    StructDecl decl;
    decl.name = c.name;
    decl.params = close_telescope(l.params);
    decl.ctor = c.name + ".mk";
    decl.is_class = c.is_class;
    std::vector<std::string> names;
    for (const Binder& p : l.params) names.push_back(p.name);
    for (const Binder& f : fields) {
      Term ty = replace_fvars(f.type, leaf_terms);
      decl.fields.push_back({f.name, abstract_many(ty, names), f.kind});
      names.push_back(f.name);
    }
    kernel_guard(c.pos, [&] { out_.env.add(decl); });
    add_layout(l);
    forgetful_instances(layout(c.name));
  }

  // A preferred-projection path from `self : C params` to class `cls`
  // applied to `args`, breadth first.
  std::optional<Term> preferred_path(const ClassLayout& from, const Term& self,
                                     const std::string& cls,
                                     const std::vector<Term>& args) const {
    struct Node {
      const ClassLayout* layout;
      std::vector<Term> args;
      Term term;
    };
    std::deque<Node> queue{{&from, fvars_of(from.params), self}};
    while (!queue.empty()) {
      Node n = queue.front();
      queue.pop_front();
      auto subst = param_subst(n.layout->params, n.args);
      for (const ParentRef& s : n.layout->subobjects) {
        std::vector<Term> sargs;
        for (const Term& a : s.args) sargs.push_back(replace_fvars(a, subst));
        Term t = Term::proj(n.layout->name, "to_" + s.cls, n.term);
        if (s.cls == cls && sargs.size() == args.size() &&
            std::equal(sargs.begin(), sargs.end(), args.begin(), alpha_eq)) {
          return t;
        }
        queue.push_back({&layout(s.cls), std::move(sargs), t});
      }
    }
    return std::nullopt;
  }

  Term leaf_access(const ClassLayout& from, const Term& self,
                   const std::string& leaf) const {
    const FieldOrigin* o = from.origin(leaf);
    Term t = self;
    for (const auto& [s, f] : o->path) t = Term::proj(s, f, t);
    return t;
  }

  // Constructor for `target args` assembled from the fields of `self`.
  Term rebuild(const ClassLayout& from, const Term& self,
               const ClassLayout& target, const std::vector<Term>& args) const {
    const StructDecl* decl = out_.env.find_struct(target.name);
    auto subst = param_subst(target.params, args);
    std::vector<Term> values;
    for (const Binder& f : decl->fields) {
      const ParentRef* sub = nullptr;
      for (const ParentRef& s : target.subobjects) {
        if (f.name == "to_" + s.cls) sub = &s;
      }
      if (!sub) {
        values.push_back(leaf_access(from, self, f.name));
        continue;
      }
      std::vector<Term> sargs;
      for (const Term& a : sub->args) sargs.push_back(replace_fvars(a, subst));
      if (auto path = preferred_path(from, self, sub->cls, sargs)) {
        values.push_back(*path);
      } else {
        values.push_back(rebuild(from, self, layout(sub->cls), sargs));
      }
    }
    return Term::mk(target.name, args, std::move(values));
  }

  void forgetful_instances(const ClassLayout& l) {
    std::string self_name = "i";
    if (find_local(l.params, self_name)) self_name = "self";
    if (find_local(l.params, self_name)) self_name = fresh_local_name(l.params, "i");
    Telescope ctx = l.params;
    ctx.push_back({self_name,
                   Term::app(Term::constant(l.name), fvars_of(l.params)),
                   BinderKind::kInstImplicit});
    Term self = Term::fvar(self_name);
    for (const ParentRef& p : l.parents) {
      bool preferred =
          std::any_of(l.subobjects.begin(), l.subobjects.end(),
                      [&](const ParentRef& s) { return s.cls == p.cls; });
      Term result = Term::app(Term::constant(p.cls), p.args);
      Term body = preferred
                      ? Term::proj(l.name, "to_" + p.cls, self)
                      : rebuild(l, self, layout(p.cls), p.args);
      DefDecl d{l.name + ".to_" + p.cls, close_telescope(ctx),
                close_over(ctx, result), close_over(ctx, body), true};
      kernel_guard({}, [&] {
        Term ty = check_type(out_.env, check_, ctx, body);
        if (!defeq(out_.env, check_, ctx, ty, result).equal) {
          throw IllTyped("generated instance " + d.name + " has type " +
                         print_term(ty));
        }
        out_.env.add(d);
      });
      if (!l.is_class) continue;
      InstanceKind kind =
          preferred ? InstanceKind::kPreferred : InstanceKind::kSynthesized;
      int priority = (preferred || !nested()) ? 1000 : 100;
      out_.instances.push_back({d.name, l.name, p.cls, priority, kind});
    }
  }

  // Instances

  // Fills omitted trailing instance arguments of a class application.
  Term complete_target(const Telescope& ctx, Term target, Position pos) {
    Term ty = kernel_guard(pos, [&] {
      return whnf(out_.env, check_, ctx, infer_type(out_.env, ctx, target));
    });
    while (ty.is(TermKind::kPi) &&
           ty.binder_kind() == BinderKind::kInstImplicit) {
      ResolveResult r = resolve(out_.env, out_.instances, ctx, ty.binder_type());
      if (!r.ok()) {
        throw ElabError("failed to synthesize " + print_term(ty.binder_type()),
                        pos);
      }
      target = Term::app(target, r.instance);
      ty = whnf(out_.env, check_, ctx, instantiate(ty.body(), r.instance));
    }
    return target;
  }

  Term instance_value(const InstanceItem& item, TermBuilder& b,
                      std::string cls, const std::vector<Term>& args,
                      std::map<std::string, const SAssign*>& assigns) {
    // Copied: adding opaque declarations below may move the original.
    const Telescope fields = out_.env.find_struct(cls)->fields;
    std::vector<Term> values;
    for (const Binder& f : fields) {
      std::vector<Term> prefix = args;
      prefix.insert(prefix.end(), values.begin(), values.end());
      Term ftype = instantiate_rev(f.type, prefix);
      auto it = assigns.find(f.name);
      if (it != assigns.end()) {
        const SAssign* a = it->second;
        assigns.erase(it);
        if (a->value) {
          values.push_back(b.build(*a->value));
        } else {
          std::string name = item.name + "." + f.name;
          kernel_guard(a->pos, [&] {
            out_.env.add(OpaqueDecl{name, close_telescope(b.ctx()),
                                    close_over(b.ctx(), ftype)});
          });
          values.push_back(
              Term::app(Term::constant(name), fvars_of(b.ctx())));
        }
        continue;
      }
      auto sa = as_struct_app(out_.env, check_, b.ctx(), ftype);
      if (sa && sa->decl->is_class && f.name == "to_" + sa->decl->name) {
        std::string sub = sa->decl->name;
        values.push_back(instance_value(item, b, sub, sa->params, assigns));
        continue;
      }
      throw ElabError(fmt::format("instance '{}' is missing field '{}'",
                                  item.name, f.name),
                      item.pos);
    }
    return Term::mk(cls, args, std::move(values));
  }

  void item(const InstanceItem& item) {
    TermBuilder b(out_.env, {});
    b.push_binders(item.binders);
    check_distinct(b.ctx(), item.pos);
    Term target = complete_target(b.ctx(), b.build(*item.target), item.pos);
    Term head = app_head(target);
    const ClassLayout* cl =
        head.is(TermKind::kConst) ? out_.layout(head.name()) : nullptr;
    if (!cl || !cl->is_class) {
      throw ElabError("instance target is not a class", item.target->pos);
    }
    std::vector<Term> args = app_args(target);
    Term value;
    if (item.body) {
      value = b.build(*item.body);
    } else {
      std::map<std::string, const SAssign*> assigns;
      for (const SAssign& a : item.assigns) {
        if (!assigns.emplace(a.name, &a).second) {
          throw ElabError("field '" + a.name + "' assigned twice", a.pos);
        }
      }
      value = instance_value(item, b, cl->name, args, assigns);
      if (!assigns.empty()) {
        const SAssign* a = assigns.begin()->second;
        throw ElabError(fmt::format("'{}' has no field '{}'", cl->name, a->name),
                        a->pos);
      }
    }
    const Telescope& ctx = b.ctx();
    kernel_guard(item.pos, [&] {
      Term ty = check_type(out_.env, DefEqConfig{}, ctx, value);
      if (!defeq(out_.env, DefEqConfig{}, ctx, ty, target).equal) {
        throw IllTyped(fmt::format("instance '{}' has type {}, expected {}",
                                   item.name, print_term(ty),
                                   print_term(target)));
      }
      out_.env.add(DefDecl{item.name, close_telescope(ctx),
                           close_over(ctx, target), close_over(ctx, value),
                           true});
    });
    out_.instances.push_back(
        {item.name, "", cl->name, item.priority.value_or(1000),
         InstanceKind::kUser});
  }

  // Variables, goals, checks

  void item(const VariablesItem& v) {
    TermBuilder b(out_.env, out_.variables);
    b.push_binders(v.binders);
    check_distinct(b.ctx(), v.pos);
    out_.variables = b.ctx();
  }

  void item(const GoalItem& g) {
    if (out_.goal(g.label)) throw ElabError("duplicate goal '" + g.label + "'", g.pos);
    TermBuilder b(out_.env, out_.variables);
    b.push_binders(g.binders);
    check_distinct(b.ctx(), g.pos);
    Term target = b.build(*g.type);
    kernel_guard(g.pos, [&] { infer_type(out_.env, b.ctx(), target); });
    out_.goals.push_back({g.label, b.ctx(), target, g.pos});
  }

  void item(const DefeqItem& d) {
    if (out_.defeq(d.label)) {
      throw ElabError("duplicate defeq '" + d.label + "'", d.pos);
    }
    TermBuilder b(out_.env, out_.variables);
    b.push_binders(d.binders);
    check_distinct(b.ctx(), d.pos);
    Term lhs = b.build(*d.lhs);
    Term rhs = b.build(*d.rhs);
    kernel_guard(d.pos, [&] {
      check_type(out_.env, DefEqConfig{}, b.ctx(), lhs);
      check_type(out_.env, DefEqConfig{}, b.ctx(), rhs);
    });
    out_.defeqs.push_back({d.label, b.ctx(), lhs, rhs, d.pos});
  }

  void item(const OpaqueItem& o) {
    TermBuilder b(out_.env, {});
    b.push_binders(o.binders);
    check_distinct(b.ctx(), o.pos);
    Term ty = b.build(*o.type);
    kernel_guard(o.pos, [&] {
      Term s = whnf(out_.env, check_, b.ctx(),
                    check_type(out_.env, check_, b.ctx(), ty));
      if (!s.is(TermKind::kSort)) throw IllTyped("opaque type is not a type");
      out_.env.add(OpaqueDecl{o.name, close_telescope(b.ctx()),
                              close_over(b.ctx(), ty)});
    });
  }

  template <typename F>
  static auto kernel_guard(Position pos, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const KernelError& e) {
      throw ElabError(e.what(), pos);
    }
  }

  Elaboration out_;
  DefEqConfig check_;
};

}  // namespace

Elaboration elaborate(const SurfaceModule& ast,
                      const EncodingStrategy& strategy) {
  return Elaborator(strategy).run(ast);
}

}  // namespace hierlab
