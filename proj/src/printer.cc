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

#include "hierlab/printer.h"

#include <algorithm>
#include <vector>

#include <fmt/core.h>

namespace hierlab {

namespace {

enum class Prec { kArrow = 0, kApp = 1, kAtom = 2 };

class Printer {
 public:
  std::string print(const Term& t, Prec prec) {
    switch (t.kind()) {
      case TermKind::kSort:
        return "Type";
      case TermKind::kBVar: {
        std::uint32_t i = t.bvar_index();
        if (i < names_.size()) return names_[names_.size() - 1 - i];
        return fmt::format("#{}", i);
      }
      case TermKind::kFVar:
      case TermKind::kConst:
        return t.name();
      case TermKind::kMeta:
        return fmt::format("?m.{}", t.meta_id());
      case TermKind::kApp: {
        std::string s = print(app_head(t), Prec::kAtom);
        for (const Term& a : app_args(t)) s += " " + print(a, Prec::kAtom);
        return paren(s, prec > Prec::kApp);
      }
      case TermKind::kMk: {
        std::string s = t.name() + ".mk";
        for (const Term& p : t.params()) s += " " + print(p, Prec::kAtom);
        for (const Term& f : t.fields()) s += " " + print(f, Prec::kAtom);
        bool bare = t.params().empty() && t.fields().empty();
        return paren(s, !bare && prec > Prec::kApp);
      }
      case TermKind::kProj: {
        const Term& x = t.target();
        bool postfix_ok = x.is(TermKind::kFVar) || x.is(TermKind::kConst) ||
                          x.is(TermKind::kProj);
        std::string inner = print(x, Prec::kAtom);
        if (!postfix_ok && inner.front() != '(') inner = "(" + inner + ")";
        return inner + "." + t.field();
      }
      case TermKind::kPi:
      case TermKind::kLam:
        return paren(print_binder(t), prec > Prec::kArrow);
    }
    return "?";
  }

 private:
  static std::string paren(const std::string& s, bool yes) {
    return yes ? "(" + s + ")" : s;
  }

  std::string pick_name(const std::string& base, const Term& body) {
    std::vector<std::string> free;
    collect_fvars(body, free);
    std::string name = base.empty() ? "x" : base;
    auto taken = [&](const std::string& n) {
      return std::find(free.begin(), free.end(), n) != free.end() ||
             std::find(names_.begin(), names_.end(), n) != names_.end();
    };
    if (!taken(name)) return name;
    for (int k = 1;; ++k) {
      std::string cand = fmt::format("{}_{}", name, k);
      if (!taken(cand)) return cand;
    }
  }

  std::string print_binder(const Term& t) {
    std::string dom = print(t.binder_type(), t.is(TermKind::kPi) &&
                                                     t.body().loose_bvar_range() == 0
                                                 ? Prec::kApp
                                                 : Prec::kArrow);
    if (t.is(TermKind::kPi) && t.body().loose_bvar_range() == 0 &&
        t.binder_kind() == BinderKind::kExplicit) {
      names_.push_back("_");
      std::string cod = print(t.body(), Prec::kArrow);
      names_.pop_back();
      return dom + " → " + cod;
    }
    std::string name = pick_name(t.name(), t.body());
    names_.push_back(name);
    std::string body = print(t.body(), Prec::kArrow);
    names_.pop_back();
    std::string b = t.binder_kind() == BinderKind::kInstImplicit
                        ? fmt::format("[{} : {}]", name, dom)
                        : fmt::format("({} : {})", name, dom);
    if (t.is(TermKind::kPi)) return b + " → " + body;
    return "fun " + b + " => " + body;
  }

  std::vector<std::string> names_;

  friend std::string hierlab::print_telescope(const Telescope&);
};

std::string print_binder_entry(const Binder& b, const std::string& type) {
  return b.kind == BinderKind::kInstImplicit
             ? fmt::format("[{} : {}]", b.name, type)
             : fmt::format("({} : {})", b.name, type);
}

}  // namespace

std::string print_term(const Term& t) {
  if (!t) return "<null>";
  Printer p;
  return p.print(t, Prec::kArrow);
}

std::string print_telescope(const Telescope& tele) {
  Printer p;
  std::string out;
  for (const Binder& b : tele) {
    if (!out.empty()) out += " ";
    out += print_binder_entry(b, p.print(b.type, Prec::kArrow));
    p.names_.push_back(b.name);
  }
  return out;
}

std::string print_context(const Telescope& ctx) {
  std::string out;
  for (const Binder& b : ctx) {
    if (!out.empty()) out += " ";
    out += print_binder_entry(b, print_term(b.type));
  }
  return out;
}

}  // namespace hierlab
