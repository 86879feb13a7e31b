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

#ifndef HIERLAB_TESTS_TEST_UTIL_H_
#define HIERLAB_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hierlab/analyzer.h"
#include "hierlab/elaborator.h"
#include "hierlab/environment.h"
#include "hierlab/kernel.h"
#include "hierlab/surface.h"
#include "hierlab/term.h"

namespace hierlab::testing {

inline std::string read_corpus(const std::string& name) {
  std::ifstream in(std::string(HIERLAB_CORPUS_DIR) + "/" + name,
                   std::ios::binary);
  if (!in) throw std::runtime_error("missing corpus file " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<std::string>& corpus_files() {
  static const std::vector<std::string> files = {
      "fig1.hier",   "module.hier",   "cube.hier",  "rootonly.hier",
      "point.hier",  "empty.hier",    "single.hier"};
  return files;
}

inline Elaboration elab_text(const std::string& text,
                             Encoding enc = Encoding::kNested,
                             std::map<std::string, std::vector<std::string>>
                                 order = {}) {
  return elaborate(parse(text), EncodingStrategy{enc, std::move(order)});
}

inline Elaboration elab(const std::string& file, Encoding enc = Encoding::kNested,
                        std::map<std::string, std::vector<std::string>>
                            order = {}) {
  return elab_text(read_corpus(file), enc, std::move(order));
}

inline DefEqConfig eta(bool kernel, bool unifier = false) {
  DefEqConfig c;
  c.eta_kernel = kernel;
  c.eta_unifier = unifier;
  return c;
}

// Independent reference for eta-free conversion: full beta/delta/iota
// normalization by direct recursion, then alpha comparison. Only used on
// terms that are known to normalize (corpus and generated hierarchies).
class RefNormalizer {
 public:
  explicit RefNormalizer(const Environment& env) : env_(env) {}

  Term normalize(const Term& t) {
    if (++steps_ > 200000) throw std::runtime_error("reference fuel");
    Term w = head_reduce(t);
    switch (w.kind()) {
      case TermKind::kApp: {
        Term head = normalize(app_head(w));
        std::vector<Term> args;
        for (const Term& a : app_args(w)) args.push_back(normalize(a));
        return Term::app(head, args);
      }
      case TermKind::kLam:
      case TermKind::kPi: {
        std::string x = "ref#" + std::to_string(fresh_++);
        Term body = normalize(instantiate(w.body(), Term::fvar(x)));
        Term dom = normalize(w.binder_type());
        Term closed = abstract(body, x);
        return w.is(TermKind::kLam) ? Term::lam(w.name(), dom, closed)
                                    : Term::pi(w.name(), dom, closed);
      }
      case TermKind::kMk: {
        std::vector<Term> ps, fs;
        for (const Term& p : w.params()) ps.push_back(normalize(p));
        for (const Term& f : w.fields()) fs.push_back(normalize(f));
        return Term::mk(w.name(), ps, fs);
      }
      case TermKind::kProj:
        return Term::proj(w.name(), w.field(), normalize(w.target()));
      default:
        return w;
    }
  }

  bool equal(const Term& a, const Term& b) {
    return alpha_eq(normalize(a), normalize(b));
  }

 private:
  Term head_reduce(Term t) {
    for (;;) {
      if (++steps_ > 200000) throw std::runtime_error("reference fuel");
      if (t.is(TermKind::kApp)) {
        Term head = head_reduce(app_head(t));
        std::vector<Term> args = app_args(t);
        if (head.is(TermKind::kLam)) {
          Term r = instantiate(head.body(), args[0]);
          std::vector<Term> rest(args.begin() + 1, args.end());
          t = rest.empty() ? r : Term::app(r, rest);
          continue;
        }
        if (head.raw() != app_head(t).raw()) {
          t = Term::app(head, args);
          if (!head.is(TermKind::kApp)) return t;
          continue;
        }
        return t;
      }
      if (t.is(TermKind::kConst)) {
        const DefDecl* d = env_.find_def(t.name());
        if (!d) return t;
        t = lam_telescope(d->binders, d->body);
        continue;
      }
      if (t.is(TermKind::kProj)) {
        Term target = head_reduce(t.target());
        if (target.is(TermKind::kMk)) {
          const StructDecl* s = env_.find_struct(target.name());
          auto k = s ? s->field_index(t.field()) : std::nullopt;
          if (k && *k < target.fields().size()) {
            t = target.fields()[*k];
            continue;
          }
        }
        return Term::proj(t.name(), t.field(), target);
      }
      return t;
    }
  }

  const Environment& env_;
  std::uint64_t steps_ = 0;
  int fresh_ = 0;
};

// Parents named in each class's `extends` clause, straight from the AST.
inline std::map<std::string, std::vector<std::string>> declared_parents(
    const SurfaceModule& m) {
  std::map<std::string, std::vector<std::string>> out;
  for (const SurfaceItem& item : m.items) {
    const auto* c = std::get_if<ClassItem>(&item);
    if (!c) continue;
    auto& ps = out[c->name];
    for (const SExprPtr& e : c->extends) {
      const SExpr* head = e.get();
      while (head->kind == SExpr::Kind::kApp) head = head->items[0].get();
      ps.push_back(head->name);
    }
  }
  return out;
}

// Strict ancestors by transitive closure over `declared_parents`.
inline std::set<std::string> ancestors(
    const std::map<std::string, std::vector<std::string>>& parents,
    const std::string& cls) {
  std::set<std::string> seen;
  std::vector<std::string> todo = {cls};
  while (!todo.empty()) {
    std::string c = todo.back();
    todo.pop_back();
    auto it = parents.find(c);
    if (it == parents.end()) continue;
    for (const std::string& p : it->second) {
      if (seen.insert(p).second) todo.push_back(p);
    }
  }
  return seen;
}

// Opens a class's parameter telescope and adds `[i : C params]`.
inline Telescope instance_context(const Environment& env,
                                  const std::string& cls,
                                  std::vector<Term>* params_out = nullptr) {
  const StructDecl* s = env.find_struct(cls);
  Telescope ctx;
  std::vector<Term> params;
  for (const Binder& b : s->params) {
    ctx.push_back({b.name, instantiate_rev(b.type, params), b.kind});
    params.push_back(Term::fvar(b.name));
  }
  ctx.push_back({"i", Term::app(Term::constant(cls), params),
                 BinderKind::kInstImplicit});
  if (params_out) *params_out = params;
  return ctx;
}

}  // namespace hierlab::testing

#endif  // HIERLAB_TESTS_TEST_UTIL_H_
