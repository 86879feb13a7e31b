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

// Seeded property suites for the kernel.

#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hierlab/kernel.h"
#include "hierlab/printer.h"
#include "generators.h"
#include "test_util.h"

namespace hierlab {
namespace {

using testing::elab;
using testing::elab_text;
using testing::eta;
using testing::RefNormalizer;

constexpr int kCases = 250;

using testing::all_configs;
using testing::random_struct;
using testing::RandomStruct;

Term V(const std::string& n) { return Term::fvar(n); }
Term C(const std::string& n) { return Term::constant(n); }

TEST(KernelProperty, IotaSoundness) {
  for (int seed = 0; seed < kCases; ++seed) {
    RandomStruct r = random_struct(seed);
    Term mk = Term::mk("S", {V("α")}, r.values);
    ASSERT_NO_THROW(check_type(r.env, eta(false), r.ctx, mk)) << "seed " << seed;
    RefNormalizer ref(r.env);
    for (std::size_t k = 0; k < r.values.size(); ++k) {
      Term proj = Term::proj("S", r.decl.fields[k].name, mk);
      for (const DefEqConfig& c : all_configs()) {
        EXPECT_TRUE(defeq(r.env, c, r.ctx, proj, r.values[k]).equal)
            << "seed " << seed << " field " << k;
      }
      EXPECT_TRUE(ref.equal(proj, r.values[k]));
    }
  }
}

TEST(KernelProperty, EtaGate) {
  for (int seed = 0; seed < kCases; ++seed) {
    RandomStruct r = random_struct(1000 + seed);
    std::vector<Term> projs;
    for (const Binder& f : r.decl.fields) projs.push_back(Term::proj("S", f.name, V("u")));
    Term mk = Term::mk("S", {V("α")}, projs);
    ASSERT_NO_THROW(check_type(r.env, eta(false), r.ctx, mk)) << "seed " << seed;
    for (const DefEqConfig& c : all_configs()) {
      EXPECT_EQ(defeq(r.env, c, r.ctx, V("u"), mk).equal, c.eta_kernel)
          << "seed " << seed;
      EXPECT_EQ(defeq(r.env, c, r.ctx, mk, V("u")).equal, c.eta_kernel);
    }
    // The reference normalizer has no eta, so the two stay apart.
    EXPECT_FALSE(RefNormalizer(r.env).equal(V("u"), mk));
  }
}

// Diamond composites from the bundled corpora and generated hierarchies.
struct Pair {
  const Environment* env;
  Telescope ctx;
  Term a, b;
};

std::vector<Elaboration>& pair_sources() {
  static std::vector<Elaboration> elabs = [] {
    std::vector<Elaboration> out;
    for (const char* f : {"fig1.hier", "module.hier", "cube.hier", "rootonly.hier"}) {
      for (Encoding enc : {Encoding::kFlat, Encoding::kNested, Encoding::kFlatHack}) {
        out.push_back(elab(f, enc));
      }
    }
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
      for (Encoding enc : {Encoding::kFlat, Encoding::kNested}) {
        out.push_back(elab_text(generate_hierarchy(seed), enc));
      }
    }
    return out;
  }();
  return elabs;
}

std::vector<Pair> diamond_pairs() {
  std::vector<Pair> out;
  for (const Elaboration& e : pair_sources()) {
    for (const Diamond& d : enumerate_diamonds(build_graph(e))) {
      DiamondReport r = check_diamond(e.env, eta(false), d);
      out.push_back({&e.env, r.ctx, r.term_a, r.term_b});
    }
  }
  return out;
}

TEST(KernelProperty, DefeqReflexiveSymmetricAndMatchesReference) {
  std::vector<Pair> pairs = diamond_pairs();
  ASSERT_GE(pairs.size(), 200u);
  for (const Pair& p : pairs) {
    RefNormalizer ref(*p.env);
    bool expected_off = ref.equal(p.a, p.b);
    for (const DefEqConfig& c : all_configs()) {
      bool ab = defeq(*p.env, c, p.ctx, p.a, p.b).equal;
      bool ba = defeq(*p.env, c, p.ctx, p.b, p.a).equal;
      EXPECT_EQ(ab, ba) << print_term(p.a) << " vs " << print_term(p.b);
      EXPECT_TRUE(defeq(*p.env, c, p.ctx, p.a, p.a).equal);
      if (!c.eta_kernel) EXPECT_EQ(ab, expected_off) << print_term(p.a);
      // Eta only ever adds equations.
      if (c.eta_kernel && expected_off) EXPECT_TRUE(ab);
    }
  }
}

TEST(KernelProperty, UnifySoundness) {
  int successes = 0;
  int cases = 0;
  for (const Pair& p : diamond_pairs()) {
    // Hide the innermost composite of `a` behind a metavariable.
    if (!p.a.is(TermKind::kApp)) continue;
    std::vector<Term> args = app_args(p.a);
    Term inner = args.back();
    for (bool eu : {false, true}) {
      MetaContext mc;
      Term ty = infer_type(*p.env, p.ctx, inner);
      MetaId h = mc.fresh("h", ty, BinderKind::kInstImplicit);
      args.back() = Term::meta(h);
      Term pattern = Term::app(app_head(p.a), args);
      DefEqConfig c = eta(true, eu);
      UnifyResult r = unify(*p.env, c, p.ctx, mc, pattern, p.b);
      ++cases;
      if (!r.ok()) continue;
      ++successes;
      // A meta left open was unconstrained (fieldless targets under eta);
      // any well-typed choice must then work, so plug the original back in.
      if (!mc.is_assigned(h)) mc.assign(h, inner);
      Term solved = mc.instantiate(pattern);
      EXPECT_FALSE(solved.has_meta()) << print_term(solved);
      EXPECT_TRUE(defeq(*p.env, c, p.ctx, solved, p.b).equal)
          << print_term(solved) << " vs " << print_term(p.b);
    }
  }
  EXPECT_GE(cases, 200);
  EXPECT_GT(successes, 0);
}

TEST(KernelProperty, DeltaStability) {
  int checked = 0;
  for (const Elaboration& e : pair_sources()) {
    RefNormalizer ref(e.env);
    for (const Declaration& d : e.env.declarations()) {
      const DefDecl* def = d.as_def();
      if (!def) continue;
      Telescope ctx;
      std::vector<Term> vars;
      for (const Binder& b : def->binders) {
        std::string name = fresh_local_name(ctx, b.name);
        ctx.push_back({name, instantiate_rev(b.type, vars), b.kind});
        vars.push_back(V(name));
      }
      Term lhs = Term::app(C(def->name), vars);
      Term rhs = instantiate_rev(def->body, vars);
      EXPECT_TRUE(defeq(e.env, eta(false), ctx, lhs, rhs).equal) << def->name;
      EXPECT_TRUE(ref.equal(lhs, rhs)) << def->name;
      ++checked;
    }
  }
  EXPECT_GE(checked, 200);
}

}  // namespace
}  // namespace hierlab
