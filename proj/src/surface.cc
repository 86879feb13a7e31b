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

#include <fmt/core.h>

#include <deque>
#include <string>
#include <utility>
#include <vector>

#include "hierlab/kernel.h"
#include "hierlab/printer.h"
#include "hierlab/surface.h"

namespace hierlab {

namespace {

enum class Prec { kArrow = 0, kApp = 1, kAtom = 2 };

std::string paren(std::string s, bool yes) {
  return yes ? "(" + s + ")" : s;
}

std::string print(const SExpr& e, Prec prec);

std::string print_binder(const SBinder& b) {
  std::string ty = print(*b.type, Prec::kArrow);
  if (b.kind == BinderKind::kInstImplicit) {
    return b.anonymous ? "[" + ty + "]" : fmt::format("[{} : {}]", b.name, ty);
  }
  return fmt::format("({} : {})", b.name, ty);
}

std::string print_binders(const std::vector<SBinder>& bs) {
  std::string out;
  for (const SBinder& b : bs) out += " " + print_binder(b);
  return out;
}

std::string print(const SExpr& e, Prec prec) {
  switch (e.kind) {
    case SExpr::Kind::kIdent:
      return (e.explicit_at ? "@" : "") + e.name;
    case SExpr::Kind::kType:
      return "Type";
    case SExpr::Kind::kApp: {
      std::string s;
      for (const SExprPtr& it : e.items) {
        if (!s.empty()) s += " ";
        s += print(*it, Prec::kAtom);
      }
      return paren(s, prec > Prec::kApp);
    }
    case SExpr::Kind::kArrow: {
      std::string dom = e.binder.name.empty()
                            ? print(*e.binder.type, Prec::kApp)
                            : print_binder(e.binder);
      return paren(dom + " → " + print(*e.body, Prec::kArrow),
                   prec > Prec::kArrow);
    }
    case SExpr::Kind::kFun:
      return paren("fun " + print_binder(e.binder) + " => " +
                       print(*e.body, Prec::kArrow),
                   prec > Prec::kArrow);
    case SExpr::Kind::kProj: {
      const SExpr& x = *e.items[0];
      std::string target = x.kind == SExpr::Kind::kProj
                               ? print(x, Prec::kAtom)
                               : "(" + print(x, Prec::kArrow) + ")";
      return target + "." + e.name;
    }
  }
  return "?";
}

struct ItemPrinter {
  std::string operator()(const ClassItem& c) const {
    std::string s = (c.is_class ? "class " : "structure ") + c.name +
                    print_binders(c.params);
    for (std::size_t i = 0; i < c.extends.size(); ++i) {
      s += (i ? ", " : " extends ") + print(*c.extends[i], Prec::kApp);
    }
    if (!c.fields.empty()) {
      s += " where";
      for (const SField& f : c.fields) {
        s += fmt::format("\n  ({} : {})", f.name, print(*f.type, Prec::kArrow));
      }
    }
    return s;
  }
  std::string operator()(const InstanceItem& i) const {
    std::string s;
    if (i.priority) s += fmt::format("@[priority {}] ", *i.priority);
    s += "instance " + i.name + print_binders(i.binders) + " : " +
         print(*i.target, Prec::kApp);
    if (i.body) {
      s += " := " + print(*i.body, Prec::kArrow);
    } else if (!i.assigns.empty()) {
      s += " where";
      for (const SAssign& a : i.assigns) {
        s += fmt::format("\n  ({} := {})", a.name,
                         a.value ? print(*a.value, Prec::kArrow) : "opaque");
      }
    }
    return s;
  }
  std::string operator()(const VariablesItem& v) const {
    return "variables" + print_binders(v.binders);
  }
  std::string operator()(const GoalItem& g) const {
    return "goal " + g.label + print_binders(g.binders) + " : " +
           print(*g.type, Prec::kArrow);
  }
  std::string operator()(const DefeqItem& d) const {
    return "defeq " + d.label + print_binders(d.binders) + " : " +
           print(*d.lhs, Prec::kArrow) + " = " + print(*d.rhs, Prec::kArrow);
  }
  std::string operator()(const OpaqueItem& o) const {
    return "opaque " + o.name + print_binders(o.binders) + " : " +
           print(*o.type, Prec::kArrow);
  }
};

std::vector<std::string> split_dots(const std::string& name) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = name.find('.', start);
    out.push_back(name.substr(start, dot - start));
    if (dot == std::string::npos) return out;
    start = dot + 1;
  }
}

}  // namespace

std::string print_sexpr(const SExpr& e) { return print(e, Prec::kArrow); }

std::string print_module(const SurfaceModule& m) {
  std::string out;
  for (const SurfaceItem& item : m.items) {
    out += std::visit(ItemPrinter{}, item);
    out += "\n";
  }
  return out;
}

TermBuilder::TermBuilder(const Environment& env, Telescope ctx)
    : env_(env), ctx_(std::move(ctx)) {}

Telescope TermBuilder::push_binders(const std::vector<SBinder>& binders) {
  Telescope added;
  for (const SBinder& b : binders) {
    Binder entry{b.name, build(*b.type), b.kind};
    ctx_.push_back(entry);
    added.push_back(std::move(entry));
  }
  return added;
}

Term TermBuilder::build(const SExpr& e) {
  switch (e.kind) {
    case SExpr::Kind::kIdent:
      return build_app(e, {}, e.pos);
    case SExpr::Kind::kType:
      return Term::sort();
    case SExpr::Kind::kApp: {
      std::vector<Term> args;
      for (std::size_t i = 1; i < e.items.size(); ++i) {
        args.push_back(build(*e.items[i]));
      }
      const SExpr& head = *e.items[0];
      if (head.kind == SExpr::Kind::kIdent) {
        return build_app(head, std::move(args), head.pos);
      }
      return Term::app(build(head), args);
    }
    case SExpr::Kind::kArrow:
    case SExpr::Kind::kFun: {
      Term dom = build(*e.binder.type);
      bool is_pi = e.kind == SExpr::Kind::kArrow;
      if (e.binder.name.empty()) {
        return Term::pi("_", dom, build(*e.body), e.binder.kind);
      }
      push({e.binder.name, dom, e.binder.kind});
      Term body = build(*e.body);
      pop();
      Term closed = abstract(body, e.binder.name);
      return is_pi ? Term::pi(e.binder.name, dom, closed, e.binder.kind)
                   : Term::lam(e.binder.name, dom, closed, e.binder.kind);
    }
    case SExpr::Kind::kProj:
      return project(build(*e.items[0]), e.name, e.pos);
  }
  throw ParseError(e.pos, "unsupported expression");
}

Term TermBuilder::build_app(const SExpr& head, std::vector<Term> args,
                            Position pos) {
  const std::string& name = head.name;
  if (!find_local(ctx_, name)) {
    if (const StructDecl* s = env_.find_ctor(name)) {
      std::size_t np = s->params.size();
      std::size_t n = np + s->fields.size();
      if (args.size() < n) {
        throw ParseError(pos, fmt::format("constructor '{}' expects {} "
                                          "arguments, got {}",
                                          name, n, args.size()));
      }
      std::vector<Term> params(args.begin(), args.begin() + np);
      std::vector<Term> fields(args.begin() + np, args.begin() + n);
      Term t = Term::mk(s->name, std::move(params), std::move(fields));
      std::vector<Term> rest(args.begin() + n, args.end());
      return rest.empty() ? t : Term::app(t, rest);
    }
  }
  Term fn = resolve_ident(name, pos);
  return args.empty() ? fn : Term::app(fn, args);
}

Term TermBuilder::resolve_ident(const std::string& name, Position pos) {
  std::vector<std::string> segs = split_dots(name);
  // Longest resolvable prefix wins; the remaining segments are projections.
  for (std::size_t k = segs.size(); k >= 1; --k) {
    std::string prefix = segs[0];
    for (std::size_t i = 1; i < k; ++i) prefix += "." + segs[i];
    Term t;
    if (find_local(ctx_, prefix)) {
      t = Term::fvar(prefix);
    } else if (env_.find(prefix)) {
      t = Term::constant(prefix);
    } else if (env_.find_ctor(prefix)) {
      const StructDecl* s = env_.find_ctor(prefix);
      if (!s->params.empty() || !s->fields.empty()) {
        throw ParseError(pos, "constructor '" + prefix + "' must be applied");
      }
      t = Term::mk(s->name, {}, {});
    } else {
      continue;
    }
    for (std::size_t i = k; i < segs.size(); ++i) t = project(t, segs[i], pos);
    return t;
  }
  throw ScopeError(name, pos);
}

Term TermBuilder::project(const Term& target, const std::string& field,
                          Position pos) {
  DefEqConfig config;
  Term ty;
  try {
    ty = infer_type(env_, ctx_, target);
  } catch (const KernelError& e) {
    throw ParseError(pos, e.what());
  }
  std::optional<StructApp> sa = as_struct_app(env_, config, ctx_, ty);
  if (!sa) {
    throw ParseError(pos, fmt::format("cannot project '{}' out of '{}' : {}",
                                      field, print_term(target),
                                      print_term(ty)));
  }
  // Breadth-first through substructure fields: the shortest path wins.
  std::deque<std::pair<Term, StructApp>> queue{{target, *sa}};
  std::size_t visited = 0;
  while (!queue.empty() && visited++ < 4096) {
    auto [cur, app] = queue.front();
    queue.pop_front();
    const StructDecl& decl = *app.decl;
    if (decl.field_index(field)) return Term::proj(decl.name, field, cur);
    for (std::size_t k = 0; k < decl.fields.size(); ++k) {
      Term sub = Term::proj(decl.name, decl.fields[k].name, cur);
      Term fty = field_type(decl, app.params, k, cur);
      if (auto inner = as_struct_app(env_, config, ctx_, fty)) {
        queue.emplace_back(sub, *inner);
      }
    }
  }
  throw ParseError(pos, fmt::format("'{}' has no field '{}'",
                                    print_term(ty), field));
}

Term parse_term(std::string_view text, const Telescope& ctx,
                const Environment& env, bool check) {
  SExprPtr e = parse_expr(text);
  TermBuilder builder(env, ctx);
  Term t = builder.build(*e);
  if (check) check_type(env, DefEqConfig{}, ctx, t);
  return t;
}

Telescope parse_context(std::string_view text, const Environment& env,
                        Telescope base) {
  TermBuilder builder(env, std::move(base));
  builder.push_binders(parse_binders(text));
  return builder.ctx();
}

}  // namespace hierlab
