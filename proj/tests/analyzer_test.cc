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

#include "hierlab/analyzer.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hierlab/errors.h"
#include "test_util.h"

namespace hierlab {
namespace {

using testing::elab;
using testing::elab_text;
using testing::eta;
using Order = std::map<std::string, std::vector<std::string>>;

// Paths as sequences of instance names, enumerated by brute force.
using Path = std::vector<std::string>;

std::map<std::pair<std::string, std::string>, std::set<Path>> all_paths(
    const HierGraph& g) {
  std::map<std::pair<std::string, std::string>, std::set<Path>> out;
  std::function<void(const std::string&, const std::string&, Path&)> walk =
      [&](const std::string& src, const std::string& at, Path& path) {
        for (const HierEdge& e : g.edges) {
          if (e.from != at) continue;
          path.push_back(e.decl);
          out[{src, e.to}].insert(path);
          walk(src, e.to, path);
          path.pop_back();
        }
      };
  for (const std::string& n : g.nodes) {
    Path p;
    walk(n, n, p);
  }
  return out;
}

std::size_t expected_diamonds(const HierGraph& g) {
  std::size_t total = 0;
  for (const auto& [_, paths] : all_paths(g)) {
    total += paths.size() * (paths.size() - 1) / 2;
  }
  return total;
}

Path names(const std::vector<HierEdge>& p) {
  Path out;
  for (const HierEdge& e : p) out.push_back(e.decl);
  return out;
}

TEST(GraphTest, NestedFig1Edges) {
  HierGraph g = build_graph(elab("fig1.hier"));
  EXPECT_EQ(g.nodes.size(), 6u);
  ASSERT_EQ(g.edges.size(), 7u);
  std::map<std::string, EdgeKind> kinds;
  for (const HierEdge& e : g.edges) kinds[e.decl] = e.kind;
  EXPECT_EQ(kinds["ring.to_semiring"], EdgeKind::kPreferred);
  EXPECT_EQ(kinds["ring.to_add_comm_group"], EdgeKind::kNonPreferred);
  EXPECT_EQ(kinds["add_comm_group.to_add_comm_monoid"], EdgeKind::kNonPreferred);
  EXPECT_EQ(kinds["add_comm_group.to_add_group"], EdgeKind::kPreferred);
  for (const HierEdge& e : build_graph(elab("fig1.hier", Encoding::kFlat)).edges) {
    EXPECT_EQ(e.kind, EdgeKind::kFlat);
  }
}

TEST(GraphTest, UserInstancesAreNotEdges) {
  HierGraph g = build_graph(elab("module.hier"));
  for (const HierEdge& e : g.edges) {
    EXPECT_NE(e.decl, "semiring.to_module");
    EXPECT_NE(e.decl, "int.ring");
  }
}

TEST(GraphTest, CyclesAreRejected) {
  Elaboration e = elab("fig1.hier");
  std::vector<InstanceInfo> infos = e.instances;
  infos.push_back({"semiring.back", "add_monoid", "ring", 1000, InstanceKind::kPreferred});
  EXPECT_THROW(build_graph(e.env, infos, Encoding::kNested), CycleDetected);
}

TEST(DiamondTest, EnumerationMatchesBruteForce) {
  for (const char* f : {"fig1.hier", "cube.hier", "rootonly.hier"}) {
    for (Encoding enc : {Encoding::kFlat, Encoding::kNested, Encoding::kFlatHack}) {
      HierGraph g = build_graph(elab(f, enc));
      std::vector<Diamond> ds = enumerate_diamonds(g);
      EXPECT_EQ(ds.size(), expected_diamonds(g)) << f << " " << to_string(enc);
      auto paths = all_paths(g);
      for (const Diamond& d : ds) {
        const auto& known = paths[{d.source, d.target}];
        EXPECT_TRUE(known.contains(names(d.path_a)));
        EXPECT_TRUE(known.contains(names(d.path_b)));
        EXPECT_NE(names(d.path_a), names(d.path_b));
      }
    }
  }
  EXPECT_EQ(enumerate_diamonds(build_graph(elab("fig1.hier"))).size(), 5u);
}

TEST(DiamondTest, PathLengthBound) {
  HierGraph g = build_graph(elab("fig1.hier"));
  for (const Diamond& d : enumerate_diamonds(g, 2)) {
    EXPECT_LE(d.path_a.size(), 2u);
    EXPECT_LE(d.path_b.size(), 2u);
  }
  EXPECT_LT(enumerate_diamonds(g, 2).size(), enumerate_diamonds(g).size());
}

TEST(DiamondTest, Fig1NestedHasOneBadSquare) {
  DiamondSummary s = analyze_diamonds(elab("fig1.hier"), eta(false));
  ASSERT_EQ(s.reports.size(), 5u);
  EXPECT_EQ(s.commuting(), 4);
  EXPECT_EQ(s.mismatches(), 0);
  for (const DiamondReport& r : s.reports) {
    if (r.oracle) continue;
    EXPECT_EQ(r.diamond.source, "ring");
    EXPECT_EQ(r.diamond.target, "add_comm_monoid");
  }
  EXPECT_TRUE(analyze_diamonds(elab("fig1.hier"), eta(true)).all_commute());
}

TEST(DiamondTest, PredictorAgreesOnFig1Placements) {
  std::vector<Elaboration> cases;
  cases.push_back(elab("fig1.hier"));
  cases.push_back(elab("fig1.hier", Encoding::kNested,
                       Order{{"add_comm_group", {"add_comm_monoid"}}}));
  cases.push_back(elab("fig1.hier", Encoding::kFlatHack));
  for (const Elaboration& e : cases) {
    DiamondSummary s = analyze_diamonds(e, eta(false));
    EXPECT_EQ(s.mismatches(), 0);
  }
  EXPECT_TRUE(analyze_diamonds(cases[1], eta(false)).all_commute());
  EXPECT_TRUE(analyze_diamonds(cases[2], eta(false)).all_commute());
}

TEST(DiamondTest, PredictorLooksAtLastEdges) {
  HierEdge p{"a", "b", "p", EdgeKind::kPreferred};
  HierEdge n{"a", "b", "n", EdgeKind::kNonPreferred};
  HierEdge f{"a", "b", "f", EdgeKind::kFlat};
  EXPECT_TRUE(predict_diamond({"s", "t", {n, p}, {p}}));
  EXPECT_FALSE(predict_diamond({"s", "t", {p, n}, {p}}));
  EXPECT_TRUE(predict_diamond({"s", "t", {f}, {n}}));
  EXPECT_FALSE(predict_diamond({"s", "t", {f}, {p}}));
}

TEST(DiamondTest, ReportJsonSchema) {
  auto j = nlohmann::json::parse(report_json(analyze_diamonds(elab("fig1.hier"), eta(false))));
  EXPECT_EQ(j["config"]["encoding"], "nested");
  EXPECT_EQ(j["config"]["eta_kernel"], false);
  ASSERT_EQ(j["diamonds"].size(), 5u);
  for (const auto& d : j["diamonds"]) {
    for (const char* key : {"source", "target", "pathA", "pathB", "oracle", "predictor"}) {
      EXPECT_TRUE(d.contains(key)) << key;
    }
    EXPECT_TRUE(d["oracle"] == "commuting" || d["oracle"] == "not-commuting");
  }
  EXPECT_EQ(j["summary"]["total"], 5);
  EXPECT_EQ(j["summary"]["commuting"], 4);
  EXPECT_EQ(j["summary"]["mismatches"], 0);
}

TEST(CoherenceProperty, FlatCommutesWithoutEta) {
  int hierarchies = 0;
  for (std::uint64_t seed = 0; seed < 220; ++seed) {
    DiamondSummary s =
        analyze_diamonds(elab_text(generate_hierarchy(seed), Encoding::kFlat), eta(false));
    EXPECT_TRUE(s.all_commute()) << generate_hierarchy(seed);
    ++hierarchies;
  }
  for (const char* f : {"fig1.hier", "cube.hier", "rootonly.hier"}) {
    EXPECT_TRUE(analyze_diamonds(elab(f, Encoding::kFlat), eta(false)).all_commute()) << f;
  }
  EXPECT_GE(hierarchies, 200);
}

TEST(CoherenceProperty, NestedCommutesWithKernelEta) {
  int diamonds = 0;
  for (std::uint64_t seed = 0; seed < 220; ++seed) {
    DiamondSummary s =
        analyze_diamonds(elab_text(generate_hierarchy(seed), Encoding::kNested), eta(true));
    EXPECT_TRUE(s.all_commute()) << generate_hierarchy(seed);
    diamonds += static_cast<int>(s.reports.size());
  }
  for (const char* f : {"fig1.hier", "cube.hier", "rootonly.hier"}) {
    EXPECT_TRUE(analyze_diamonds(elab(f), eta(true)).all_commute()) << f;
  }
  EXPECT_GT(diamonds, 0);
}

// Placement count and coherent count for the cube, recomputed here with the
// reference normalizer and a local last-edge rule.
TEST(SpanningTest, CubeCountsAgreeWithIndependentCheck) {
  SurfaceModule ast = parse(testing::read_corpus("cube.hier"));
  auto parents = testing::declared_parents(ast);
  std::vector<std::pair<std::string, std::vector<std::string>>> multi;
  for (const auto& [cls, ps] : parents) {
    if (ps.size() >= 2) multi.emplace_back(cls, ps);
  }
  std::size_t placements = 1;
  for (const auto& [_, ps] : multi) placements *= ps.size();
  ASSERT_EQ(placements, 24u);

  int oracle_coherent = 0;
  int predicted_coherent = 0;
  std::vector<std::size_t> pick(multi.size(), 0);
  for (std::size_t n = 0; n < placements; ++n) {
    Order order;
    std::size_t rest = n;
    for (std::size_t k = 0; k < multi.size(); ++k) {
      order[multi[k].first] = {multi[k].second[rest % multi[k].second.size()]};
      rest /= multi[k].second.size();
    }
    Elaboration e = elab_text(testing::read_corpus("cube.hier"), Encoding::kNested, order);
    std::map<std::string, bool> preferred;
    for (const InstanceInfo& i : e.instances) {
      preferred[i.decl_name] = i.kind == InstanceKind::kPreferred;
    }
    testing::RefNormalizer ref(e.env);
    bool all = true, all_pred = true;
    for (const Diamond& d : enumerate_diamonds(build_graph(e))) {
      DiamondReport r = check_diamond(e.env, eta(false), d);
      all = all && ref.equal(r.term_a, r.term_b);
      all_pred = all_pred && preferred[d.path_a.back().decl] ==
                                 preferred[d.path_b.back().decl];
    }
    oracle_coherent += all;
    predicted_coherent += all_pred;
  }

  SpanningResult off = spanning_search(ast, eta(false));
  EXPECT_EQ(off.placements.size(), placements);
  EXPECT_EQ(off.coherent, oracle_coherent);
  EXPECT_EQ(off.predicted_coherent, predicted_coherent);
  EXPECT_EQ(predicted_coherent, 0);
  EXPECT_TRUE(off.invariance_violations.empty());
  SpanningResult on = spanning_search(ast, eta(true));
  EXPECT_EQ(on.coherent, 24);
}

TEST(SpanningTest, Fig1HasACoherentPlacement) {
  SpanningResult r = spanning_search(parse(testing::read_corpus("fig1.hier")), eta(false));
  ASSERT_EQ(r.placements.size(), 4u);
  EXPECT_EQ(r.coherent, 3);
  bool found_3b = false;
  for (const Placement& p : r.placements) {
    if (p.first_parent.at("add_comm_group") == "add_comm_monoid" &&
        p.first_parent.at("ring") == "semiring") {
      found_3b = true;
      EXPECT_TRUE(p.summary.all_commute());
    }
    EXPECT_TRUE(p.order_invariant);
  }
  EXPECT_TRUE(found_3b);
  std::string text = spanning_text(r, eta(false));
  EXPECT_NE(text.find("3 / 4 coherent"), std::string::npos);
}

TEST(SpanningTest, VacuousCases) {
  for (const char* f : {"single.hier", "empty.hier"}) {
    SpanningResult r = spanning_search(parse(testing::read_corpus(f)), eta(false));
    EXPECT_EQ(r.placements.size(), 1u) << f;
    EXPECT_EQ(r.coherent, 1) << f;
  }
}

TEST(GeneratorTest, RespectsBoundsAndIsDeterministic) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    std::string src = generate_hierarchy(seed);
    EXPECT_EQ(src, generate_hierarchy(seed));
    SurfaceModule m = parse(src);
    EXPECT_LE(m.items.size(), 6u);
    for (const SurfaceItem& it : m.items) {
      const auto& c = std::get<ClassItem>(it);
      EXPECT_LE(c.extends.size(), 3u);
      EXPECT_LE(c.fields.size(), 4u);
    }
  }
  EXPECT_NE(generate_hierarchy(1), generate_hierarchy(2));
}

}  // namespace
}  // namespace hierlab
