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

#include "hierlab/kernel.h"

#include <fmt/core.h>

#include <algorithm>
#include <stdexcept>
#include <utility>

#include "hierlab/errors.h"
#include "hierlab/printer.h"

namespace hierlab {

void DefEqConfig::validate() const {
  if (unfold_depth <= 0) {
    throw std::invalid_argument("unfold_depth must be positive");
  }
}

MetaId MetaContext::fresh(std::string hint, Term type, BinderKind kind) {
  metas_.push_back({std::move(hint), std::move(type), kind, std::nullopt});
  return static_cast<MetaId>(metas_.size() - 1);
}

void MetaContext::assign(MetaId id, Term value) {
  MetaDecl& d = metas_.at(id);
  if (d.value) throw std::logic_error("metavariable assigned twice");
  d.value = std::move(value);
}

Term MetaContext::instantiate(const Term& t) const {
  if (!t.has_meta()) return t;
  return replace(t, [&](const Term& s, std::uint32_t) -> Term {
    if (!s.has_meta()) return s;
    if (s.is(TermKind::kMeta)) {
      if (s.meta_id() < metas_.size() && metas_[s.meta_id()].value) {
        return instantiate(*metas_[s.meta_id()].value);
      }
      return s;
    }
    return Term{};
  });
}

std::string fresh_local_name(const Telescope& ctx, const std::string& base) {
  std::string stem = base.substr(0, base.find('#'));
  if (stem.empty() || stem == "_") stem = "x";
  std::string name = fmt::format("{}#{}", stem, ctx.size());
  for (int k = 1; find_local(ctx, name); ++k) {
    name = fmt::format("{}#{}.{}", stem, ctx.size(), k);
  }
  return name;
}

Term field_type(const StructDecl& decl, const std::vector<Term>& params,
                std::size_t index, const Term& target) {
  std::vector<Term> vals = params;
  for (std::size_t j = 0; j < index; ++j) {
    vals.push_back(Term::proj(decl.name, decl.fields[j].name, target));
  }
  return instantiate_rev(decl.fields[index].type, vals);
}

namespace {

enum class Transparency { kAll, kReducible };

class Reducer {
 public:
  Reducer(const Environment& env, const DefEqConfig& config,
          const MetaContext* metas, Trace* trace, Transparency transparency)
      : env_(env),
        config_(config),
        metas_(metas),
        trace_(trace),
        transparency_(transparency) {}

  Term whnf(const Term& t) {
    int fuel = config_.unfold_depth;
    return whnf_core(t, fuel);
  }

 private:
  const DefDecl* unfoldable(const Term& c) const {
    if (!c.is(TermKind::kConst)) return nullptr;
    const DefDecl* d = env_.find_def(c.name());
    if (!d) return nullptr;
    if (transparency_ == Transparency::kReducible && !d->reducible) {
      return nullptr;
    }
    return d;
  }

  void spend(int& fuel, const std::string& name) {
    if (--fuel < 0) throw FuelExhausted(config_.unfold_depth);
    log("delta " + name);
  }

  void log(std::string line) {
    if (trace_) trace_->push_back(std::move(line));
  }

  const Term* assigned(const Term& m) const {
    if (!metas_ || m.meta_id() >= metas_->size()) return nullptr;
    const MetaDecl& d = metas_->decl(m.meta_id());
    return d.value ? &*d.value : nullptr;
  }

  Term whnf_core(const Term& t, int& fuel) {
    Term cur = t;
    for (;;) {
      switch (cur.kind()) {
        case TermKind::kMeta:
          if (const Term* v = assigned(cur)) {
            cur = *v;
            continue;
          }
          return cur;
        case TermKind::kConst:
          if (const DefDecl* d = unfoldable(cur)) {
            spend(fuel, d->name);
            cur = def_value(*d);
            continue;
          }
          return cur;
        case TermKind::kApp: {
          const Term& h = app_head(cur);
          std::vector<Term> args = app_args(cur);
          if (h.is(TermKind::kLam)) {
            Term body = h;
            std::size_t i = 0;
            while (body.is(TermKind::kLam) && i < args.size()) {
              body = instantiate(body.body(), args[i++]);
            }
            log("beta");
            cur = Term::app(body, std::span<const Term>(args).subspan(i));
            continue;
          }
          if (const DefDecl* d = unfoldable(h)) {
            spend(fuel, d->name);
            cur = Term::app(def_value(*d), args);
            continue;
          }
          if (h.is(TermKind::kMeta)) {
            if (const Term* v = assigned(h)) {
              cur = Term::app(*v, args);
              continue;
            }
            return cur;
          }
          if (h.is(TermKind::kProj)) {
            Term h2 = whnf_core(h, fuel);
            if (h2.raw() == h.raw()) return cur;
            cur = Term::app(h2, args);
            continue;
          }
          return cur;
        }
        case TermKind::kProj: {
          Term x = whnf_core(cur.target(), fuel);
          if (x.is(TermKind::kMk) && x.name() == cur.name()) {
            const StructDecl* s = env_.find_struct(cur.name());
            if (!s) throw IllTyped("projection of unknown structure " + cur.name());
            auto idx = s->field_index(cur.field());
            if (!idx || *idx >= x.fields().size()) {
              throw IllTyped(fmt::format("no field {} in {}", cur.field(),
                                         print_term(x)));
            }
            log(fmt::format("iota {}.{}", cur.name(), cur.field()));
            cur = x.fields()[*idx];
            continue;
          }
          if (x.raw() == cur.target().raw()) return cur;
          return Term::proj(cur.name(), cur.field(), std::move(x));
        }
        default:
          return cur;
      }
    }
  }

  const Environment& env_;
  const DefEqConfig& config_;
  const MetaContext* metas_;
  Trace* trace_;
  Transparency transparency_;
};

class Comparator;

class TypeChecker {
 public:
  TypeChecker(const Environment& env, const DefEqConfig& config,
              const MetaContext* metas, Comparator* checker)
      : env_(env), config_(config), metas_(metas), checker_(checker) {}

  Term infer(Telescope& ctx, const Term& t);

 private:
  Term whnf(const Term& t) {
    return Reducer(env_, config_, metas_, nullptr, Transparency::kAll).whnf(t);
  }
  void expect(Telescope& ctx, const Term& actual, const Term& expected,
              const Term& where);
  void expect_type(Telescope& ctx, const Term& t);

  const Environment& env_;
  const DefEqConfig& config_;
  const MetaContext* metas_;
  // Non-null: verify argument and field types with this comparator.
  Comparator* checker_;
};

class Comparator {
 public:
  Comparator(const Environment& env, const DefEqConfig& config, Telescope ctx,
             MetaContext* metas, bool assign, bool eta,
             Transparency transparency, Trace* trace)
      : env_(env),
        config_(config),
        ctx_(std::move(ctx)),
        meta_scope_(ctx_.size()),
        metas_(metas),
        assign_(assign),
        eta_(eta),
        transparency_(transparency),
        trace_(trace) {}

  bool is_def_eq(const Term& a0, const Term& b0) {
    Term a = inst(a0), b = inst(b0);
    if (alpha_eq(a, b)) return true;
    if (auto r = try_assign(a, b)) return *r;
    if (same_const_head(a, b)) {
      std::optional<MetaContext> saved;
      if (metas_) saved = *metas_;
      if (args_def_eq(app_args(a), app_args(b))) return true;
      if (saved) *metas_ = std::move(*saved);
      mismatch_lhs = mismatch_rhs = Term{};
      occurs_failure = false;
    }
    Reducer red(env_, config_, metas_, trace_, transparency_);
    Term wa = red.whnf(a), wb = red.whnf(b);
    if (wa.raw() != a.raw() || wb.raw() != b.raw()) {
      if (alpha_eq(wa, wb)) return true;
      if (auto r = try_assign(wa, wb)) return *r;
    }
    if (wa.kind() == wb.kind() && structural(wa, wb)) return true;
    if (eta_) {
      if (wa.is(TermKind::kMk) && !wb.is(TermKind::kMk) && try_eta(wa, wb)) {
        return true;
      }
      if (wb.is(TermKind::kMk) && !wa.is(TermKind::kMk) && try_eta(wb, wa)) {
        return true;
      }
    }
    if (!mismatch_lhs) {
      mismatch_lhs = wa;
      mismatch_rhs = wb;
      log(fmt::format("mismatch {} =?= {}", print_term(inst(wa)),
                      print_term(inst(wb))));
    }
    return false;
  }

  Telescope& ctx() { return ctx_; }

  bool occurs_failure = false;
  MetaId occurs_meta = 0;
  Term mismatch_lhs;
  Term mismatch_rhs;

 private:
  Term inst(const Term& t) const { return metas_ ? metas_->instantiate(t) : t; }

  void log(std::string line) {
    if (trace_) trace_->push_back(std::move(line));
  }

  bool assignable(const Term& t) const {
    return assign_ && metas_ && t.is(TermKind::kMeta) &&
           !metas_->is_assigned(t.meta_id());
  }

  // Returns a verdict when one side is an assignable metavariable.
  std::optional<bool> try_assign(const Term& a, const Term& b) {
    if (assignable(a)) return assign(a.meta_id(), b);
    if (assignable(b)) return assign(b.meta_id(), a);
    return std::nullopt;
  }

  bool assign(MetaId id, const Term& value) {
    if (hierlab::occurs_meta(value, id)) {
      occurs_failure = true;
      occurs_meta = id;
      log(fmt::format("occurs-check ?m.{} in {}", id, print_term(value)));
      return false;
    }
    // The value may not mention locals opened after the metavariable's scope.
    for (std::size_t k = meta_scope_; k < ctx_.size(); ++k) {
      if (occurs_fvar(value, ctx_[k].name)) return false;
    }
    log(fmt::format("assign ?m.{} := {}", id, print_term(value)));
    metas_->assign(id, value);
    return true;
  }

  bool structural(const Term& a, const Term& b) {
    switch (a.kind()) {
      case TermKind::kSort:
        return true;
      case TermKind::kFVar:
      case TermKind::kConst:
        return a.name() == b.name();
      case TermKind::kMeta:
        return a.meta_id() == b.meta_id();
      case TermKind::kBVar:
        return a.bvar_index() == b.bvar_index();
      case TermKind::kApp: {
        std::vector<Term> xs = app_args(a), ys = app_args(b);
        if (xs.size() != ys.size()) return false;
        if (!is_def_eq(app_head(a), app_head(b))) return false;
        return args_def_eq(xs, ys);
      }
      case TermKind::kLam:
      case TermKind::kPi: {
        if (!is_def_eq(a.binder_type(), b.binder_type())) return false;
        std::string x = fresh_local_name(ctx_, a.name());
        ctx_.push_back({x, a.binder_type(), a.binder_kind()});
        Term v = Term::fvar(x);
        bool ok = is_def_eq(instantiate(a.body(), v), instantiate(b.body(), v));
        ctx_.pop_back();
        return ok;
      }
      case TermKind::kMk:
        if (a.name() != b.name() || a.params().size() != b.params().size() ||
            a.fields().size() != b.fields().size()) {
          return false;
        }
        for (std::size_t i = 0; i < a.params().size(); ++i) {
          if (!is_def_eq(a.params()[i], b.params()[i])) return false;
        }
        for (std::size_t i = 0; i < a.fields().size(); ++i) {
          if (!is_def_eq(a.fields()[i], b.fields()[i])) return false;
        }
        return true;
      case TermKind::kProj:
        return a.name() == b.name() && a.field() == b.field() &&
               is_def_eq(a.target(), b.target());
    }
    return false;
  }

  static bool same_const_head(const Term& a, const Term& b) {
    if (!a.is(TermKind::kApp) || !b.is(TermKind::kApp)) return false;
    const Term& ha = app_head(a);
    const Term& hb = app_head(b);
    return ha.is(TermKind::kConst) && hb.is(TermKind::kConst) &&
           ha.name() == hb.name() && app_args(a).size() == app_args(b).size();
  }

  // Pairs that fail while a side still mentions an unassigned metavariable
  // are retried once later pairs have made progress.
  bool args_def_eq(const std::vector<Term>& xs, const std::vector<Term>& ys) {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < xs.size(); ++i) pending.push_back(i);
    for (;;) {
      std::vector<std::size_t> postponed;
      for (std::size_t i : pending) {
        bool open = assign_ && metas_ &&
                    (inst(xs[i]).has_meta() || inst(ys[i]).has_meta());
        if (!open) {
          if (!is_def_eq(xs[i], ys[i])) return false;
          continue;
        }
        MetaContext saved = *metas_;
        if (is_def_eq(xs[i], ys[i])) continue;
        *metas_ = std::move(saved);
        mismatch_lhs = mismatch_rhs = Term{};
        occurs_failure = false;
        log(fmt::format("postpone {} =?= {}", print_term(inst(xs[i])),
                        print_term(inst(ys[i]))));
        postponed.push_back(i);
      }
      if (postponed.empty()) return true;
      if (postponed.size() == pending.size()) {
        // No progress: rerun the first pair to record its mismatch.
        return is_def_eq(xs[postponed[0]], ys[postponed[0]]);
      }
      pending = std::move(postponed);
    }
  }

  // Structure eta: `mk` against a value `other` of the same structure type
  // compares every field with the corresponding projection of `other`.
  bool try_eta(const Term& mk, const Term& other) {
    const StructDecl* s = env_.find_struct(mk.name());
    if (!s || mk.fields().size() != s->fields.size()) return false;
    Term ty;
    try {
      ty = TypeChecker(env_, config_, metas_, nullptr).infer(ctx_, other);
    } catch (const IllTyped&) {
      return false;
    }
    auto sa = as_struct_app(env_, config_, ctx_, ty, metas_);
    if (!sa || sa->decl != s || sa->params.size() != mk.params().size()) {
      return false;
    }
    log(fmt::format("eta {} against {}", s->name, print_term(inst(other))));
    for (std::size_t i = 0; i < mk.params().size(); ++i) {
      if (!is_def_eq(mk.params()[i], sa->params[i])) return false;
    }
    for (std::size_t i = 0; i < s->fields.size(); ++i) {
      if (!is_def_eq(mk.fields()[i],
                     Term::proj(s->name, s->fields[i].name, other))) {
        return false;
      }
    }
    return true;
  }

  const Environment& env_;
  const DefEqConfig& config_;
  Telescope ctx_;
  std::size_t meta_scope_;
  MetaContext* metas_;
  bool assign_;
  bool eta_;
  Transparency transparency_;
  Trace* trace_;
};

void TypeChecker::expect(Telescope& ctx, const Term& actual,
                         const Term& expected, const Term& where) {
  Telescope saved = checker_->ctx();
  checker_->ctx() = ctx;
  bool ok = checker_->is_def_eq(actual, expected);
  checker_->ctx() = std::move(saved);
  if (!ok) {
    throw IllTyped(fmt::format("type mismatch at {}: expected {}, got {}",
                               print_term(where), print_term(expected),
                               print_term(actual)));
  }
}

void TypeChecker::expect_type(Telescope& ctx, const Term& t) {
  Term ty = whnf(infer(ctx, t));
  if (!ty.is(TermKind::kSort)) {
    throw IllTyped(fmt::format("{} is not a type", print_term(t)));
  }
}

Term TypeChecker::infer(Telescope& ctx, const Term& t) {
  switch (t.kind()) {
    case TermKind::kSort:
      return Term::sort();
    case TermKind::kBVar:
      throw IllTyped("loose bound variable");
    case TermKind::kFVar: {
      const Binder* b = find_local(ctx, t.name());
      if (!b) throw IllTyped("unknown variable " + t.name());
      return b->type;
    }
    case TermKind::kMeta:
      if (!metas_ || t.meta_id() >= metas_->size()) {
        throw IllTyped(fmt::format("unknown metavariable ?m.{}", t.meta_id()));
      }
      return metas_->instantiate(metas_->decl(t.meta_id()).type);
    case TermKind::kConst: {
      const Declaration* d = env_.find(t.name());
      if (!d) throw IllTyped("unknown constant " + t.name());
      return d->type();
    }
    case TermKind::kApp: {
      Term fty = whnf(infer(ctx, t.fn()));
      if (!fty.is(TermKind::kPi)) {
        throw IllTyped(fmt::format("function expected in {}, got type {}",
                                   print_term(t), print_term(fty)));
      }
      if (checker_) expect(ctx, infer(ctx, t.arg()), fty.binder_type(), t.arg());
      return instantiate(fty.body(), t.arg());
    }
    case TermKind::kLam: {
      if (checker_) expect_type(ctx, t.binder_type());
      std::string x = fresh_local_name(ctx, t.name());
      ctx.push_back({x, t.binder_type(), t.binder_kind()});
      Term body_ty = infer(ctx, instantiate(t.body(), Term::fvar(x)));
      ctx.pop_back();
      return Term::pi(t.name(), t.binder_type(), abstract(body_ty, x),
                      t.binder_kind());
    }
    case TermKind::kPi: {
      if (checker_) {
        expect_type(ctx, t.binder_type());
        std::string x = fresh_local_name(ctx, t.name());
        ctx.push_back({x, t.binder_type(), t.binder_kind()});
        expect_type(ctx, instantiate(t.body(), Term::fvar(x)));
        ctx.pop_back();
      }
      return Term::sort();
    }
    case TermKind::kMk: {
      const StructDecl* s = env_.find_struct(t.name());
      if (!s) throw IllTyped("unknown structure " + t.name());
      if (t.params().size() != s->params.size() ||
          t.fields().size() != s->fields.size()) {
        throw IllTyped(fmt::format("{} expects {} parameters and {} fields",
                                   s->ctor, s->params.size(), s->fields.size()));
      }
      if (checker_) {
        std::vector<Term> vals;
        for (std::size_t i = 0; i < s->params.size(); ++i) {
          expect(ctx, infer(ctx, t.params()[i]),
                 instantiate_rev(s->params[i].type, vals), t.params()[i]);
          vals.push_back(t.params()[i]);
        }
        for (std::size_t i = 0; i < s->fields.size(); ++i) {
          expect(ctx, infer(ctx, t.fields()[i]),
                 instantiate_rev(s->fields[i].type, vals), t.fields()[i]);
          vals.push_back(t.fields()[i]);
        }
      }
      return Term::app(Term::constant(s->name), t.params());
    }
    case TermKind::kProj: {
      Term ty = infer(ctx, t.target());
      auto sa = as_struct_app(env_, config_, ctx, ty, metas_);
      if (!sa || sa->decl->name != t.name()) {
        throw IllTyped(fmt::format("projection {}.{} of a value of type {}",
                                   t.name(), t.field(), print_term(ty)));
      }
      auto idx = sa->decl->field_index(t.field());
      if (!idx) {
        throw IllTyped(fmt::format("structure {} has no field {}", t.name(),
                                   t.field()));
      }
      return field_type(*sa->decl, sa->params, *idx, t.target());
    }
  }
  throw IllTyped("unsupported term");
}

}  // namespace

std::optional<StructApp> as_struct_app(const Environment& env,
                                       const DefEqConfig& config,
                                       const Telescope& /*ctx*/,
                                       const Term& type,
                                       const MetaContext* metas) {
  Term w = Reducer(env, config, metas, nullptr, Transparency::kAll).whnf(type);
  const Term& h = app_head(w);
  if (!h.is(TermKind::kConst)) return std::nullopt;
  const StructDecl* s = env.find_struct(h.name());
  if (!s) return std::nullopt;
  std::vector<Term> args = app_args(w);
  if (args.size() != s->params.size()) return std::nullopt;
  return StructApp{s, std::move(args)};
}

Term whnf(const Environment& env, const DefEqConfig& config,
          const Telescope& /*ctx*/, const Term& t, Trace* trace) {
  config.validate();
  return Reducer(env, config, nullptr, trace, Transparency::kAll).whnf(t);
}

Term infer_type(const Environment& env, const Telescope& ctx, const Term& t,
                const MetaContext* metas) {
  DefEqConfig config;
  Telescope local = ctx;
  return TypeChecker(env, config, metas, nullptr).infer(local, t);
}

Term check_type(const Environment& env, const DefEqConfig& config,
                const Telescope& ctx, const Term& t) {
  config.validate();
  Comparator cmp(env, config, ctx, nullptr, false, config.eta_kernel,
                 Transparency::kAll, nullptr);
  Telescope local = ctx;
  return TypeChecker(env, config, nullptr, &cmp).infer(local, t);
}

DefEqResult defeq(const Environment& env, const DefEqConfig& config,
                  const Telescope& ctx, const Term& a, const Term& b) {
  config.validate();
  DefEqResult r;
  Comparator cmp(env, config, ctx, nullptr, false, config.eta_kernel,
                 Transparency::kAll, &r.trace);
  r.equal = cmp.is_def_eq(a, b);
  return r;
}

UnifyResult unify(const Environment& env, const DefEqConfig& config,
                  const Telescope& ctx, MetaContext& metas, const Term& a,
                  const Term& b) {
  config.validate();
  UnifyResult r;
  MetaContext scratch = metas;
  Comparator cmp(env, config, ctx, &scratch, true, config.eta_unifier,
                 Transparency::kReducible, &r.trace);
  if (cmp.is_def_eq(a, b)) {
    r.status = UnifyStatus::kSuccess;
    metas = std::move(scratch);
    return r;
  }
  if (cmp.occurs_failure) {
    r.status = UnifyStatus::kOccursCheck;
    r.meta = cmp.occurs_meta;
  } else {
    r.status = UnifyStatus::kMismatch;
  }
  r.lhs = scratch.instantiate(cmp.mismatch_lhs);
  r.rhs = scratch.instantiate(cmp.mismatch_rhs);
  return r;
}

}  // namespace hierlab
