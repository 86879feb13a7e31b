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

#include "hierlab/resolution.h"

#include <fmt/core.h>

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hierlab/errors.h"
#include "hierlab/printer.h"

namespace hierlab {

const char* to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kPreferred:
      return "preferred";
    case InstanceKind::kSynthesized:
      return "synthesized";
    case InstanceKind::kUser:
      return "user";
  }
  return "?";
}

const char* to_string(ResolveStatus status) {
  switch (status) {
    case ResolveStatus::kFound:
      return "found";
    case ResolveStatus::kNotFound:
      return "not-found";
    case ResolveStatus::kDepthExceeded:
      return "depth-exceeded";
  }
  return "?";
}

void SearchConfig::validate() const {
  if (max_depth <= 0) throw std::invalid_argument("max_depth must be positive");
  eta.validate();
}

namespace {

struct Candidate {
  std::string name;
  // Local instance binder: its value is the free variable itself.
  bool local = false;
  int priority = 1000;
  std::size_t recency = 0;
};

std::string class_head(const Environment& env, const DefEqConfig& config,
                       const Telescope& ctx, const Term& type) {
  Term w = whnf(env, config, ctx, type);
  Term head = app_head(w);
  if (!head.is(TermKind::kConst)) return {};
  const StructDecl* s = env.find_struct(head.name());
  return s && s->is_class ? s->name : std::string{};
}

class Search {
 public:
  Search(const Environment& env, const std::vector<InstanceInfo>& instances,
         const Telescope& ctx, const SearchConfig& config)
      : env_(env), instances_(instances), ctx_(ctx), config_(config) {}

  ResolveResult run(const Term& target) {
    ResolveResult result;
    result.goal = target;
    std::vector<MetaId> goals;
    Term goal = target;
    Term ty;
    try {
      ty = whnf(env_, config_.eta, ctx_, infer_type(env_, ctx_, target));
    } catch (const KernelError& e) {
      log(0, fmt::format("fail {}", e.what()));
      result.trace = std::move(trace_);
      return result;
    }
    // Complete `C a b` to `C a b ?i1 .. ?ik` over trailing instance binders.
    while (ty.is(TermKind::kPi) &&
           ty.binder_kind() == BinderKind::kInstImplicit) {
      MetaId m = metas_.fresh(ty.name(), ty.binder_type(),
                              BinderKind::kInstImplicit);
      goals.push_back(m);
      goal = Term::app(goal, Term::meta(m));
      ty = whnf(env_, config_.eta, ctx_, instantiate(ty.body(), Term::meta(m)));
    }
    if (!ty.is(TermKind::kSort)) {
      log(0, fmt::format("fail {} is not a class application",
                         print_term(target)));
      result.trace = std::move(trace_);
      return result;
    }
    MetaId root = metas_.fresh("goal", goal, BinderKind::kInstImplicit);
    goals.push_back(root);
    bool found = solve_all(goals, 0, 0, [&] {
      Term inst = metas_.instantiate(Term::meta(root));
      if (inst.has_meta()) return false;
      result.instance = inst;
      result.goal = metas_.instantiate(goal);
      return true;
    });
    if (found) {
      result.status = ResolveStatus::kFound;
    } else if (depth_hit_) {
      result.status = ResolveStatus::kDepthExceeded;
    }
    result.trace = std::move(trace_);
    return result;
  }

 private:
  using Cont = std::function<bool()>;

  void log(int depth, std::string line) {
    if (config_.trace) {
      trace_.push_back(std::string(2 * depth, ' ') + std::move(line));
    }
  }

  std::vector<Candidate> candidates(const std::string& cls) {
    std::vector<Candidate> out;
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      const InstanceInfo& info = instances_[i];
      if (info.to_class == cls) {
        out.push_back({info.decl_name, false, info.priority, i});
      }
    }
    for (std::size_t j = 0; j < ctx_.size(); ++j) {
      const Binder& b = ctx_[j];
      if (b.kind != BinderKind::kInstImplicit) continue;
      if (class_head(env_, config_.eta, ctx_, b.type) == cls) {
        out.push_back({b.name, true, 1000, instances_.size() + j});
      }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Candidate& a, const Candidate& b) {
                       if (a.priority != b.priority) {
                         return a.priority > b.priority;
                       }
                       return a.recency > b.recency;
                     });
    return out;
  }

  bool solve_all(const std::vector<MetaId>& goals, std::size_t i, int depth,
                 const Cont& k) {
    if (i == goals.size()) return k();
    if (metas_.is_assigned(goals[i])) return solve_all(goals, i + 1, depth, k);
    return solve(goals[i], depth,
                 [&] { return solve_all(goals, i + 1, depth, k); });
  }

  bool solve(MetaId m, int depth, const Cont& k) {
    Term ty = metas_.instantiate(metas_.decl(m).type);
    if (depth > config_.max_depth) {
      depth_hit_ = true;
      log(depth, fmt::format("fail depth limit {} at {}", config_.max_depth,
                             print_term(ty)));
      return false;
    }
    std::string key = print_term(ty);
    log(depth, "goal " + key);
    if (std::find(path_.begin(), path_.end(), key) != path_.end()) {
      log(depth, "fail loop " + key);
      return false;
    }
    std::string cls = class_head(env_, config_.eta, ctx_, ty);
    if (cls.empty()) {
      log(depth, "fail not a class " + key);
      return false;
    }
    path_.push_back(key);
    for (const Candidate& cand : candidates(cls)) {
      MetaContext saved = metas_;
      log(depth, fmt::format("try {} (priority {})", cand.name, cand.priority));
      std::vector<MetaId> subgoals;
      std::vector<MetaId> explicit_args;
      Term value;
      Term result_type;
      if (cand.local) {
        value = Term::fvar(cand.name);
        result_type = find_local(ctx_, cand.name)->type;
      } else {
        const Declaration* d = env_.find(cand.name);
        const Telescope& binders = d->as_def() ? d->as_def()->binders
                                               : d->as_opaque()->binders;
        const Term& rt = d->as_def() ? d->as_def()->result_type
                                     : d->as_opaque()->result_type;
        std::vector<Term> args;
        for (const Binder& b : binders) {
          MetaId a = metas_.fresh(b.name, instantiate_rev(b.type, args), b.kind);
          (b.kind == BinderKind::kInstImplicit ? subgoals : explicit_args)
              .push_back(a);
          args.push_back(Term::meta(a));
        }
        value = Term::app(Term::constant(cand.name), args);
        result_type = instantiate_rev(rt, args);
      }
      UnifyResult u = unify(env_, config_.eta, ctx_, metas_, ty, result_type);
      if (!u.ok()) {
        if (u.status == UnifyStatus::kOccursCheck) {
          log(depth, fmt::format("fail {}: occurs check ?m.{}", cand.name,
                                 u.meta));
        } else {
          log(depth, fmt::format("fail {}: {} =?= {}", cand.name,
                                 print_term(metas_.instantiate(u.lhs)),
                                 print_term(metas_.instantiate(u.rhs))));
        }
        metas_ = std::move(saved);
        continue;
      }
      metas_.assign(m, value);
      bool ok = solve_all(subgoals, 0, depth + 1, [&] {
        for (MetaId a : explicit_args) {
          if (!metas_.is_assigned(a)) return false;
        }
        log(depth, "ok " + print_term(metas_.instantiate(Term::meta(m))));
        path_.pop_back();
        bool r = k();
        path_.push_back(key);
        return r;
      });
      if (ok) return true;
      log(depth, "fail " + cand.name);
      metas_ = std::move(saved);
    }
    path_.pop_back();
    return false;
  }

  const Environment& env_;
  const std::vector<InstanceInfo>& instances_;
  const Telescope& ctx_;
  const SearchConfig& config_;
  MetaContext metas_;
  std::vector<std::string> path_;
  bool depth_hit_ = false;
  Trace trace_;
};

}  // namespace

ResolveResult resolve(const Environment& env,
                      const std::vector<InstanceInfo>& instances,
                      const Telescope& ctx, const Term& target,
                      const SearchConfig& config) {
  config.validate();
  return Search(env, instances, ctx, config).run(target);
}

}  // namespace hierlab
