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

#include <fmt/core.h>

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hierlab/errors.h"
#include "hierlab/printer.h"

namespace hierlab {

const char* to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kPreferred:
      return "preferred";
    case EdgeKind::kNonPreferred:
      return "non-preferred";
    case EdgeKind::kFlat:
      return "flat";
  }
  return "?";
}

HierGraph build_graph(const Environment& env,
                      const std::vector<InstanceInfo>& instances,
                      Encoding encoding) {
  HierGraph g;
  for (const Declaration& d : env.declarations()) {
    if (const StructDecl* s = d.as_struct(); s && s->is_class) {
      g.nodes.push_back(s->name);
    }
  }
  for (const InstanceInfo& i : instances) {
    if (i.from_class.empty()) continue;
    EdgeKind kind = encoding == Encoding::kFlat ? EdgeKind::kFlat
                    : i.kind == InstanceKind::kPreferred
                        ? EdgeKind::kPreferred
                        : EdgeKind::kNonPreferred;
    g.edges.push_back({i.from_class, i.to_class, i.decl_name, kind});
  }
  // Three-colour DFS for cycles.
  std::map<std::string, int> colour;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    colour[n] = 1;
    for (const HierEdge& e : g.edges) {
      if (e.from != n) continue;
      if (colour[e.to] == 1) {
        throw CycleDetected("instance graph has a cycle through '" + e.to + "'");
      }
      if (colour[e.to] == 0) visit(e.to);
    }
    colour[n] = 2;
  };
  for (const std::string& n : g.nodes) {
    if (colour[n] == 0) visit(n);
  }
  return g;
}

HierGraph build_graph(const Elaboration& e) {
  return build_graph(e.env, e.instances, e.strategy.encoding);
}

namespace {

std::vector<std::string> decl_names(const std::vector<HierEdge>& path) {
  std::vector<std::string> out;
  for (const HierEdge& e : path) out.push_back(e.decl);
  return out;
}

std::string path_string(const std::vector<HierEdge>& path) {
  std::string out;
  for (const HierEdge& e : path) {
    if (!out.empty()) out += " ∘ ";
    out += e.decl;
  }
  return out;
}

}  // namespace

std::vector<Diamond> enumerate_diamonds(const HierGraph& g, int max_path_len) {
  if (max_path_len < 1) max_path_len = 1;
  std::map<std::pair<std::string, std::string>,
           std::vector<std::vector<HierEdge>>>
      paths;
  std::vector<HierEdge> cur;
  std::function<void(const std::string&, const std::string&)> walk =
      [&](const std::string& src, const std::string& at) {
        if (static_cast<int>(cur.size()) >= max_path_len) return;
        for (const HierEdge& e : g.edges) {
          if (e.from != at) continue;
          cur.push_back(e);
          paths[{src, e.to}].push_back(cur);
          walk(src, e.to);
          cur.pop_back();
        }
      };
  for (const std::string& n : g.nodes) walk(n, n);

  std::vector<Diamond> out;
  for (auto& [ends, ps] : paths) {
    std::sort(ps.begin(), ps.end(), [](const auto& a, const auto& b) {
      return decl_names(a) < decl_names(b);
    });
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        out.push_back({ends.first, ends.second, ps[i], ps[j]});
      }
    }
  }
  return out;
}

bool predict_diamond(const Diamond& d) {
  auto preferred = [](const std::vector<HierEdge>& p) {
    return p.back().kind == EdgeKind::kPreferred;
  };
  return preferred(d.path_a) == preferred(d.path_b);
}

DiamondReport check_diamond(const Environment& env, const DefEqConfig& config,
                            const Diamond& d) {
  DiamondReport r;
  r.diamond = d;
  r.config = config;
  const StructDecl* src = env.find_struct(d.source);
  if (!src) throw KernelError("unknown class '" + d.source + "'");
  std::vector<Term> params;
  for (const Binder& b : src->params) {
    r.ctx.push_back({b.name, instantiate_rev(b.type, params), b.kind});
    params.push_back(Term::fvar(b.name));
  }
  std::string self = find_local(r.ctx, "i") ? fresh_local_name(r.ctx, "inst")
                                            : std::string("i");
  r.ctx.push_back({self, Term::app(Term::constant(src->name), params),
                   BinderKind::kInstImplicit});
  auto compose = [&](const std::vector<HierEdge>& path) {
    Term t = Term::fvar(self);
    for (const HierEdge& e : path) {
      Term ty = infer_type(env, r.ctx, t);
      auto sa = as_struct_app(env, config, r.ctx, ty);
      if (!sa) throw KernelError("composite is not a structure value");
      std::vector<Term> args = sa->params;
      args.push_back(t);
      t = Term::app(Term::constant(e.decl), args);
    }
    return t;
  };
  r.term_a = compose(d.path_a);
  r.term_b = compose(d.path_b);
  DefEqResult eq = defeq(env, config, r.ctx, r.term_a, r.term_b);
  r.oracle = eq.equal;
  r.trace = std::move(eq.trace);
  r.predictor = predict_diamond(d);
  return r;
}

int DiamondSummary::commuting() const {
  return static_cast<int>(std::count_if(
      reports.begin(), reports.end(),
      [](const DiamondReport& r) { return r.oracle; }));
}

int DiamondSummary::mismatches() const {
  return static_cast<int>(std::count_if(
      reports.begin(), reports.end(),
      [](const DiamondReport& r) { return r.oracle != r.predictor; }));
}

bool DiamondSummary::all_predicted() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const DiamondReport& r) { return r.predictor; });
}

DiamondSummary analyze_diamonds(const Elaboration& e, const DefEqConfig& config,
                                int max_path_len) {
  DiamondSummary s;
  s.encoding = e.strategy.encoding;
  s.config = config;
  for (const Diamond& d : enumerate_diamonds(build_graph(e), max_path_len)) {
    s.reports.push_back(check_diamond(e.env, config, d));
  }
  return s;
}

namespace {

using nlohmann::ordered_json;

const char* verdict(bool commutes) {
  return commutes ? "commuting" : "not-commuting";
}

ordered_json config_json(Encoding enc, const DefEqConfig& c) {
  return {{"encoding", to_string(enc)},
          {"eta_kernel", c.eta_kernel},
          {"eta_unifier", c.eta_unifier}};
}

ordered_json diamonds_json(const DiamondSummary& s) {
  ordered_json ds = ordered_json::array();
  for (const DiamondReport& r : s.reports) {
    ds.push_back({{"source", r.diamond.source},
                  {"target", r.diamond.target},
                  {"pathA", decl_names(r.diamond.path_a)},
                  {"pathB", decl_names(r.diamond.path_b)},
                  {"oracle", verdict(r.oracle)},
                  {"predictor", verdict(r.predictor)}});
  }
  return ds;
}

ordered_json summary_json(const DiamondSummary& s) {
  return {{"total", s.reports.size()},
          {"commuting", s.commuting()},
          {"mismatches", s.mismatches()}};
}

std::string diamond_line(const DiamondReport& r) {
  return fmt::format("{:<14} {:<14} {} -> {}: {} | {}", verdict(r.oracle),
                     verdict(r.predictor), r.diamond.source, r.diamond.target,
                     path_string(r.diamond.path_a),
                     path_string(r.diamond.path_b));
}

std::string placement_label(const Placement& p) {
  if (p.first_parent.empty()) return "(no multi-parent classes)";
  std::string out;
  for (const auto& [cls, parent] : p.first_parent) {
    if (!out.empty()) out += " ";
    out += cls + ":" + parent;
  }
  return out;
}

std::vector<std::string> parent_names(const ClassItem& c) {
  std::vector<std::string> out;
  for (const SExprPtr& e : c.extends) {
    const SExpr* head = e->kind == SExpr::Kind::kApp ? e->items[0].get() : e.get();
    out.push_back(head->name);
  }
  return out;
}

std::map<std::string, bool> verdict_map(const DiamondSummary& s) {
  std::map<std::string, bool> out;
  for (const DiamondReport& r : s.reports) {
    out[path_string(r.diamond.path_a) + " | " + path_string(r.diamond.path_b)] =
        r.oracle;
  }
  return out;
}

}  // namespace

std::string report_text(const DiamondSummary& s) {
  std::string out = fmt::format(
      "encoding {}, eta-kernel {}, eta-unifier {}\n", to_string(s.encoding),
      s.config.eta_kernel ? "on" : "off", s.config.eta_unifier ? "on" : "off");
  out += fmt::format("{:<14} {:<14} diamond\n", "oracle", "predictor");
  for (const DiamondReport& r : s.reports) out += diamond_line(r) + "\n";
  out += fmt::format("{} diamonds, {} commuting, {} predictor mismatches\n",
                     s.reports.size(), s.commuting(), s.mismatches());
  return out;
}

std::string report_json(const DiamondSummary& s) {
  ordered_json root = {{"config", config_json(s.encoding, s.config)},
                       {"diamonds", diamonds_json(s)},
                       {"summary", summary_json(s)}};
  return root.dump(2) + "\n";
}

SpanningResult spanning_search(const SurfaceModule& ast,
                               const DefEqConfig& config, int max_path_len) {
  std::vector<std::pair<std::string, std::vector<std::string>>> choices;
  for (const SurfaceItem& item : ast.items) {
    const auto* c = std::get_if<ClassItem>(&item);
    if (c && c->is_class && c->extends.size() >= 2) {
      choices.emplace_back(c->name, parent_names(*c));
    }
  }
  SpanningResult result;
  std::vector<std::size_t> pick(choices.size(), 0);
  for (;;) {
    EncodingStrategy strategy;
    EncodingStrategy reversed;
    Placement p;
    for (std::size_t k = 0; k < choices.size(); ++k) {
      const auto& [cls, parents] = choices[k];
      const std::string& first = parents[pick[k]];
      p.first_parent[cls] = first;
      strategy.parent_order[cls] = {first};
      std::vector<std::string> rest{first};
      for (auto it = parents.rbegin(); it != parents.rend(); ++it) {
        if (*it != first) rest.push_back(*it);
      }
      reversed.parent_order[cls] = rest;
    }
    p.summary = analyze_diamonds(elaborate(ast, strategy), config, max_path_len);
    DiamondSummary alt =
        analyze_diamonds(elaborate(ast, reversed), config, max_path_len);
    if (verdict_map(alt) != verdict_map(p.summary)) {
      p.order_invariant = false;
      result.invariance_violations.push_back(placement_label(p));
    }
    if (p.summary.all_commute()) ++result.coherent;
    if (p.summary.all_predicted()) ++result.predicted_coherent;
    result.placements.push_back(std::move(p));

    // Odometer over the choices, last class fastest.
    std::size_t k = choices.size();
    while (k > 0) {
      --k;
      if (++pick[k] < choices[k].second.size()) break;
      pick[k] = 0;
      if (k == 0) return result;
    }
    if (choices.empty()) return result;
  }
}

std::string spanning_text(const SpanningResult& r, const DefEqConfig& config) {
  std::string out = fmt::format("encoding nested, eta-kernel {}, eta-unifier {}\n",
                                config.eta_kernel ? "on" : "off",
                                config.eta_unifier ? "on" : "off");
  for (const Placement& p : r.placements) {
    const DiamondSummary& s = p.summary;
    out += fmt::format("{}: {} ({}/{} diamonds commute){}\n", placement_label(p),
                       s.all_commute() ? "coherent" : "incoherent",
                       s.commuting(), s.reports.size(),
                       p.order_invariant ? "" : " [order-sensitive]");
    for (const DiamondReport& d : s.reports) {
      if (!d.oracle) out += "  " + diamond_line(d) + "\n";
    }
  }
  out += fmt::format("{} / {} coherent\n", r.coherent, r.placements.size());
  out += fmt::format("{} / {} predicted coherent\n", r.predicted_coherent,
                     r.placements.size());
  if (!r.invariance_violations.empty()) {
    out += fmt::format("{} placements depend on the order of non-first parents\n",
                       r.invariance_violations.size());
  }
  return out;
}

std::string spanning_json(const SpanningResult& r, const DefEqConfig& config) {
  ordered_json placements = ordered_json::array();
  for (const Placement& p : r.placements) {
    placements.push_back({{"first_parent", p.first_parent},
                          {"coherent", p.summary.all_commute()},
                          {"predicted_coherent", p.summary.all_predicted()},
                          {"order_invariant", p.order_invariant},
                          {"diamonds", diamonds_json(p.summary)},
                          {"summary", summary_json(p.summary)}});
  }
  ordered_json root = {{"config", config_json(Encoding::kNested, config)},
                       {"placements", placements},
                       {"summary",
                        {{"placements", r.placements.size()},
                         {"coherent", r.coherent},
                         {"predicted_coherent", r.predicted_coherent},
                         {"order_sensitive", r.invariance_violations.size()}}}};
  return root.dump(2) + "\n";
}

std::string generate_hierarchy(std::uint64_t seed, const GeneratorOptions& opts) {
  static const std::vector<std::pair<std::string, std::string>> kPool = {
      {"zero", "α"},         {"one", "α"},          {"neg", "α → α"},
      {"inv", "α → α"},      {"add", "α → α → α"}, {"mul", "α → α → α"},
  };
  std::mt19937_64 rng(seed);
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  int n = uniform(1, std::max(1, opts.max_classes));
  std::vector<std::set<std::string>> leaves(n);
  std::string out = fmt::format("-- generated hierarchy, seed {}\n", seed);
  for (int i = 0; i < n; ++i) {
    std::vector<int> earlier(i);
    for (int k = 0; k < i; ++k) earlier[k] = k;
    std::shuffle(earlier.begin(), earlier.end(), rng);
    int k = uniform(0, std::min(i, opts.max_parents));
    earlier.resize(k);
    std::sort(earlier.begin(), earlier.end());
    out += fmt::format("\nclass c{} (α : Type)", i);
    for (int j = 0; j < k; ++j) {
      out += fmt::format("{}c{} α", j ? ", " : " extends ", earlier[j]);
      leaves[i].insert(leaves[earlier[j]].begin(), leaves[earlier[j]].end());
    }
    std::vector<std::size_t> fresh;
    for (std::size_t f = 0; f < kPool.size(); ++f) {
      if (!leaves[i].contains(kPool[f].first)) fresh.push_back(f);
    }
    std::shuffle(fresh.begin(), fresh.end(), rng);
    int m = std::min<int>(uniform(0, opts.max_fields), fresh.size());
    if (m > 0) out += " where";
    for (int f = 0; f < m; ++f) {
      const auto& [name, type] = kPool[fresh[f]];
      out += fmt::format("\n  ({} : {})", name, type);
      leaves[i].insert(name);
    }
    out += "\n";
  }
  return out;
}

}  // namespace hierlab
