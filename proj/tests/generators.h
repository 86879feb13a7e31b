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

// Seeded generators shared by the property suites and the acceptance run.

#ifndef HIERLAB_TESTS_GENERATORS_H_
#define HIERLAB_TESTS_GENERATORS_H_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hierlab/environment.h"
#include "hierlab/kernel.h"
#include "test_util.h"

namespace hierlab::testing {

inline Term V(const std::string& n) { return Term::fvar(n); }
inline Term C(const std::string& n) { return Term::constant(n); }
inline Term arrow(Term a, Term b) { return Term::pi("_", std::move(a), std::move(b)); }

inline std::vector<DefEqConfig> all_configs() {
  std::vector<DefEqConfig> out;
  for (bool k : {false, true}) {
    for (bool u : {false, true}) out.push_back(eta(k, u));
  }
  return out;
}

// A random structure `S (α : Type)` with up to four fields, some of them
// depending on earlier ones, plus a context to build values in.
struct RandomStruct {
  Environment env;
  StructDecl decl;
  Telescope ctx;               // α, x : α, g : α → α, b : B, u : S α
  std::vector<Term> values;    // well-typed field values in ctx
};

inline RandomStruct random_struct(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  RandomStruct r;
  r.env.add(OpaqueDecl{"B", {}, Term::sort()});
  // marker (α : Type) (f : α → α) : Type, with a canonical inhabitant.
  Telescope mp = close_telescope({{"α", Term::sort(), BinderKind::kExplicit},
                                  {"f", arrow(V("α"), V("α")), BinderKind::kExplicit}});
  r.env.add(OpaqueDecl{"marker", mp, Term::sort()});
  r.env.add(OpaqueDecl{"witness", mp,
                       close_over({{"α", Term::sort(), BinderKind::kExplicit},
                                   {"f", arrow(V("α"), V("α")), BinderKind::kExplicit}},
                                  Term::app(C("marker"), std::vector<Term>{V("α"), V("f")}))});

  Telescope local = {{"α", Term::sort(), BinderKind::kExplicit}};
  std::vector<int> endo_fields;  // indices of fields of type α → α
  int n = pick(5);
  std::vector<int> kinds;
  for (int k = 0; k < n; ++k) {
    int kind = pick(endo_fields.empty() ? 3 : 4);
    Term ty;
    switch (kind) {
      case 0: ty = V("α"); break;
      case 1: ty = arrow(V("α"), V("α")); break;
      case 2: ty = C("B"); break;
      default: {
        int j = endo_fields[pick(static_cast<int>(endo_fields.size()))];
        ty = Term::app(C("marker"), std::vector<Term>{V("α"), V("f" + std::to_string(j))});
        kind = 3 + j;  // remember which field it depends on
      }
    }
    if (kind == 1) endo_fields.push_back(k);
    kinds.push_back(kind);
    local.push_back({"f" + std::to_string(k), ty, BinderKind::kExplicit});
  }
  Telescope closed = close_telescope(local);
  r.decl.name = "S";
  r.decl.ctor = "S.mk";
  r.decl.is_class = pick(2) == 0;
  r.decl.params = {closed[0]};
  r.decl.fields.assign(closed.begin() + 1, closed.end());
  r.env.add(r.decl);

  r.ctx = {{"α", Term::sort(), BinderKind::kExplicit},
           {"x", V("α"), BinderKind::kExplicit},
           {"g", arrow(V("α"), V("α")), BinderKind::kExplicit},
           {"b", C("B"), BinderKind::kExplicit},
           {"u", Term::app(C("S"), V("α")), BinderKind::kExplicit}};
  auto elem = [&]() {
    Term t = V("x");
    for (int d = pick(3); d > 0; --d) t = Term::app(V("g"), t);
    return t;
  };
  for (int k = 0; k < n; ++k) {
    switch (kinds[k]) {
      case 0: r.values.push_back(elem()); break;
      case 1:
        r.values.push_back(pick(2) ? V("g")
                                   : Term::lam("y", V("α"), Term::app(V("g"), Term::bvar(0))));
        break;
      case 2: r.values.push_back(V("b")); break;
      default: {
        int j = kinds[k] - 3;
        r.values.push_back(Term::app(C("witness"), std::vector<Term>{V("α"), r.values[j]}));
      }
    }
  }
  return r;
}

}  // namespace hierlab::testing

#endif  // HIERLAB_TESTS_GENERATORS_H_
