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

// hier: command-line driver for the hierlab library.
//
// Exit codes: 0 success / equal / found / all commute, 1 for the negative
// verdict of defeq, resolve and diamonds, 2 for any error.

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hierlab/analyzer.h"
#include "hierlab/elaborator.h"
#include "hierlab/errors.h"
#include "hierlab/kernel.h"
#include "hierlab/printer.h"
#include "hierlab/resolution.h"
#include "hierlab/surface.h"

namespace {

using hierlab::DefEqConfig;
using hierlab::Elaboration;
using hierlab::EncodingStrategy;
using nlohmann::ordered_json;

struct RunConfig {
  std::string input;
  std::string encoding = "nested";
  std::string eta_kernel = "on";
  std::string eta_unifier = "off";
  std::string emit = "text";
  bool trace = false;
  bool check = false;
  std::uint64_t seed = 0;
  int max_depth = 32;
  std::vector<std::string> parent_order;
  std::string ctx;
  std::string item;
  std::vector<std::string> terms;
};

struct UsageError : hierlab::Error {
  using Error::Error;
};

bool on_off(const std::string& v, const char* flag) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw UsageError(fmt::format("{} expects on or off, got '{}'", flag, v));
}

DefEqConfig defeq_config(const RunConfig& rc) {
  DefEqConfig c;
  c.eta_kernel = on_off(rc.eta_kernel, "--eta-kernel");
  c.eta_unifier = on_off(rc.eta_unifier, "--eta-unifier");
  return c;
}

EncodingStrategy strategy(const RunConfig& rc) {
  EncodingStrategy s;
  auto enc = hierlab::parse_encoding(rc.encoding);
  if (!enc) throw UsageError("unknown encoding '" + rc.encoding + "'");
  s.encoding = *enc;
  for (const std::string& spec : rc.parent_order) {
    auto colon = spec.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == spec.size()) {
      throw hierlab::OverrideInvalid("--parent-order expects class:parent, got '" +
                                     spec + "'");
    }
    std::string cls = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    std::vector<std::string> parents;
    std::stringstream ss(rest);
    for (std::string p; std::getline(ss, p, ',');) parents.push_back(p);
    if (s.parent_order.contains(cls)) {
      throw hierlab::OverrideInvalid("parent order for '" + cls +
                                     "' given twice");
    }
    s.parent_order[cls] = parents;
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

hierlab::SurfaceModule load(const RunConfig& rc) {
  return hierlab::parse(read_file(rc.input));
}

Elaboration load_elaborated(const RunConfig& rc) {
  return hierlab::elaborate(load(rc), strategy(rc));
}

hierlab::Telescope cli_context(const RunConfig& rc, const Elaboration& e) {
  return hierlab::parse_context(rc.ctx, e.env, e.variables);
}

void print_trace(const hierlab::Trace& t) {
  for (const std::string& line : t) std::cout << "  | " << line << "\n";
}

ordered_json config_json(const RunConfig& rc, const DefEqConfig& c) {
  return {{"encoding", rc.encoding},
          {"eta_kernel", c.eta_kernel},
          {"eta_unifier", c.eta_unifier}};
}

int cmd_elaborate(const RunConfig& rc) {
  Elaboration e = load_elaborated(rc);
  std::cout << (rc.emit == "json" ? hierlab::dump_json(e)
                                  : hierlab::dump_text(e));
  return 0;
}

int cmd_defeq(const RunConfig& rc) {
  Elaboration e = load_elaborated(rc);
  DefEqConfig c = defeq_config(rc);
  struct Job {
    std::string label;
    hierlab::Telescope ctx;
    hierlab::Term lhs, rhs;
  };
  std::vector<Job> jobs;
  if (rc.terms.size() == 2) {
    hierlab::Telescope ctx = cli_context(rc, e);
    jobs.push_back({"cli", ctx,
                    hierlab::parse_term(rc.terms[0], ctx, e.env, rc.check),
                    hierlab::parse_term(rc.terms[1], ctx, e.env, rc.check)});
  } else if (rc.terms.empty()) {
    for (const hierlab::DefeqSpec& d : e.defeqs) {
      if (rc.item.empty() || rc.item == d.label) {
        jobs.push_back({d.label, d.ctx, d.lhs, d.rhs});
      }
    }
    if (jobs.empty()) throw UsageError("no defeq items to check");
  } else {
    throw UsageError("defeq expects either no terms or LHS and RHS");
  }
  bool all = true;
  ordered_json results = ordered_json::array();
  for (const Job& j : jobs) {
    hierlab::DefEqResult r = hierlab::defeq(e.env, c, j.ctx, j.lhs, j.rhs);
    all = all && r.equal;
    if (rc.emit == "json") {
      ordered_json item = {{"label", j.label},
                           {"lhs", hierlab::print_term(j.lhs)},
                           {"rhs", hierlab::print_term(j.rhs)},
                           {"verdict", r.equal ? "equal" : "not-equal"}};
      if (rc.trace) item["trace"] = r.trace;
      results.push_back(item);
    } else {
      std::cout << fmt::format("defeq {}: {}\n  lhs: {}\n  rhs: {}\n", j.label,
                               r.equal ? "equal" : "not-equal",
                               hierlab::print_term(j.lhs),
                               hierlab::print_term(j.rhs));
      if (rc.trace) print_trace(r.trace);
    }
  }
  if (rc.emit == "json") {
    ordered_json root = {{"config", config_json(rc, c)}, {"results", results}};
    std::cout << root.dump(2) << "\n";
  }
  return all ? 0 : 1;
}

int cmd_resolve(const RunConfig& rc) {
  Elaboration e = load_elaborated(rc);
  hierlab::SearchConfig sc;
  sc.eta = defeq_config(rc);
  sc.max_depth = rc.max_depth;
  sc.trace = true;
  struct Job {
    std::string label;
    hierlab::Telescope ctx;
    hierlab::Term target;
  };
  std::vector<Job> jobs;
  if (rc.terms.size() == 1) {
    hierlab::Telescope ctx = cli_context(rc, e);
    jobs.push_back(
        {"cli", ctx, hierlab::parse_term(rc.terms[0], ctx, e.env, rc.check)});
  } else if (rc.terms.empty()) {
    for (const hierlab::GoalSpec& g : e.goals) {
      if (rc.item.empty() || rc.item == g.label) {
        jobs.push_back({g.label, g.ctx, g.target});
      }
    }
    if (jobs.empty()) throw UsageError("no goals to resolve");
  } else {
    throw UsageError("resolve expects at most one goal term");
  }
  bool all = true;
  ordered_json results = ordered_json::array();
  for (const Job& j : jobs) {
    hierlab::ResolveResult r =
        hierlab::resolve(e.env, e.instances, j.ctx, j.target, sc);
    all = all && r.ok();
    bool show_trace = rc.trace || !r.ok();
    if (rc.emit == "json") {
      ordered_json item = {{"label", j.label},
                           {"goal", hierlab::print_term(r.goal)},
                           {"status", hierlab::to_string(r.status)}};
      if (r.ok()) item["instance"] = hierlab::print_term(r.instance);
      if (show_trace) item["trace"] = r.trace;
      results.push_back(item);
    } else {
      std::cout << fmt::format("goal {}: {}\n  target: {}\n", j.label,
                               hierlab::to_string(r.status),
                               hierlab::print_term(r.goal));
      if (r.ok()) {
        std::cout << "  instance: " << hierlab::print_term(r.instance) << "\n";
      }
      if (show_trace) print_trace(r.trace);
    }
  }
  if (rc.emit == "json") {
    ordered_json root = {{"config", config_json(rc, sc.eta)},
                         {"results", results}};
    std::cout << root.dump(2) << "\n";
  }
  return all ? 0 : 1;
}

int cmd_diamonds(const RunConfig& rc) {
  Elaboration e = load_elaborated(rc);
  hierlab::DiamondSummary s = hierlab::analyze_diamonds(e, defeq_config(rc));
  if (rc.emit == "json") {
    std::cout << hierlab::report_json(s);
  } else {
    std::cout << hierlab::report_text(s);
    if (rc.trace) {
      for (const hierlab::DiamondReport& r : s.reports) {
        std::cout << fmt::format("{} -> {}\n  A: {}\n  B: {}\n",
                                 r.diamond.source, r.diamond.target,
                                 hierlab::print_term(r.term_a),
                                 hierlab::print_term(r.term_b));
        print_trace(r.trace);
      }
    }
  }
  return s.all_commute() ? 0 : 1;
}

int cmd_spanning_search(const RunConfig& rc) {
  DefEqConfig c = defeq_config(rc);
  hierlab::SpanningResult r = hierlab::spanning_search(load(rc), c);
  std::cout << (rc.emit == "json" ? hierlab::spanning_json(r, c)
                                  : hierlab::spanning_text(r, c));
  return 0;
}

int cmd_generate(const RunConfig& rc) {
  std::cout << hierlab::generate_hierarchy(rc.seed);
  return 0;
}

std::string where(const RunConfig& rc, hierlab::Position pos) {
  return fmt::format("{}:{}:{}", rc.input, pos.line, pos.column);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierlab: inheritance encodings, definitional equality and "
               "typeclass diamonds"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig rc;

  app.add_option("--encoding", rc.encoding, "flat, nested or flat-hack")
      ->check(CLI::IsMember({"flat", "nested", "flat-hack", "flat_hack"}));
  app.add_option("--eta-kernel", rc.eta_kernel, "structure eta in defeq")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--eta-unifier", rc.eta_unifier,
                 "structure eta in unification and instance search")
      ->check(CLI::IsMember({"on", "off"}));
  app.add_option("--emit", rc.emit, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--trace", rc.trace, "print reduction and search traces");
  app.add_option("--seed", rc.seed, "seed for generated hierarchies");
  app.add_option("--max-depth", rc.max_depth, "instance search depth limit")
      ->check(CLI::PositiveNumber);
  app.add_option("--parent-order", rc.parent_order,
                 "class:parent, or class:p1,p2,... (repeatable)")
      ->type_size(1)
      ->allow_extra_args(false)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  auto* elab = app.add_subcommand("elaborate", "dump the elaborated environment");
  elab->add_option("file", rc.input)->required();

  auto* deq = app.add_subcommand("defeq", "check definitional equality");
  deq->add_option("file", rc.input)->required();
  deq->add_option("terms", rc.terms, "LHS RHS (default: the file's defeq items)");
  deq->add_option("--ctx", rc.ctx, "extra binders, e.g. \"(R : Type) [iR : ring R]\"");
  deq->add_option("--item", rc.item, "only the defeq item with this label");
  deq->add_flag("--check", rc.check, "typecheck the terms");

  auto* res = app.add_subcommand("resolve", "run instance search");
  res->add_option("file", rc.input)->required();
  res->add_option("target", rc.terms, "goal type (default: the file's goals)");
  res->add_option("--ctx", rc.ctx, "extra binders");
  res->add_option("--item,--goal", rc.item, "only the goal with this label");
  res->add_flag("--check", rc.check, "typecheck the goal");

  auto* dia = app.add_subcommand("diamonds", "check every instance diamond");
  dia->add_option("file", rc.input)->required();

  auto* span = app.add_subcommand("spanning-search",
                                  "try every preferred-parent placement");
  span->add_option("file", rc.input)->required();

  app.add_subcommand("generate", "print a random hierarchy for --seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*elab) return cmd_elaborate(rc);
    if (*deq) return cmd_defeq(rc);
    if (*res) return cmd_resolve(rc);
    if (*dia) return cmd_diamonds(rc);
    if (*span) return cmd_spanning_search(rc);
    return cmd_generate(rc);
  } catch (const hierlab::ParseError& e) {
    std::cerr << rc.input << ":" << e.what() << "\n";
  } catch (const hierlab::ScopeError& e) {
    std::cerr << rc.input << ":" << e.what() << "\n";
  } catch (const hierlab::ElabError& e) {
    std::cerr << where(rc, e.position) << ": " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 2;
}
