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

// Runs the `hier` binary end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <string>

#include "hierlab/analyzer.h"

namespace {

struct CliRun {
  int status = -1;
  std::string out;
};

std::string corpus(const std::string& f) {
  return std::string(HIERLAB_CORPUS_DIR) + "/" + f;
}

CliRun hier(const std::string& args) {
  std::string cmd = std::string(HIERLAB_HIER_BIN) + " " + args + " 2>&1";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

bool contains(const CliRun& r, const std::string& s) {
  return r.out.find(s) != std::string::npos;
}

TEST(CliTest, ElaborateDumps) {
  CliRun text = hier("elaborate " + corpus("fig1.hier"));
  EXPECT_EQ(text.status, 0);
  EXPECT_TRUE(contains(text, "field to_semiring : semiring α"));
  EXPECT_TRUE(contains(text, "@[priority 100] instance ring.to_add_comm_group"));
  CliRun json = hier("--emit json --encoding flat elaborate " + corpus("fig1.hier"));
  ASSERT_EQ(json.status, 0);
  auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["encoding"], "flat");
}

TEST(CliTest, DefeqMatrix) {
  std::string m = corpus("module.hier");
  CliRun flat = hier("defeq " + m + " --encoding flat --eta-kernel off");
  EXPECT_EQ(flat.status, 0);
  EXPECT_TRUE(contains(flat, "defeq ring_acm_diamond: equal"));
  CliRun nested = hier("defeq " + m + " --eta-kernel off");
  EXPECT_EQ(nested.status, 1);
  EXPECT_TRUE(contains(nested, "not-equal"));
  EXPECT_EQ(hier("defeq " + m + " --eta-kernel on").status, 0);
  CliRun terms = hier("defeq " + corpus("point.hier") +
                   " --ctx '(p : point)' p 'point.mk p.x p.y' --eta-kernel off");
  EXPECT_EQ(terms.status, 1);
}

TEST(CliTest, ResolveMatrix) {
  std::string m = corpus("module.hier");
  CliRun off = hier("resolve " + m + " --item neg_smul");
  EXPECT_EQ(off.status, 1);
  EXPECT_TRUE(contains(off, "goal neg_smul: not-found"));
  EXPECT_TRUE(contains(off, "| fail semiring.to_module"));
  EXPECT_EQ(hier("resolve " + m + " --item neg_smul --eta-unifier on").status, 0);
  CliRun ring = hier("resolve " + m + " --item module_of_ring");
  EXPECT_TRUE(contains(ring, "instance: semiring.to_module R (ring.to_semiring R iR)"));
  CliRun cli = hier("resolve " + corpus("fig1.hier") +
                 " --ctx '(α : Type) [i : ring α]' 'add_monoid α' --max-depth 1");
  EXPECT_EQ(cli.status, 1);
  EXPECT_TRUE(contains(cli, "depth-exceeded"));
}

TEST(CliTest, DiamondsAndSpanning) {
  std::string f = corpus("fig1.hier");
  EXPECT_EQ(hier("diamonds " + f + " --encoding flat-hack --eta-kernel off").status, 0);
  EXPECT_EQ(hier("diamonds " + f + " --eta-kernel off").status, 1);
  EXPECT_EQ(hier("diamonds " + f +
                 " --eta-kernel off --parent-order add_comm_group:add_comm_monoid")
                .status,
            0);
  CliRun json = hier("--emit json diamonds " + f + " --eta-kernel off");
  auto j = nlohmann::json::parse(json.out);
  EXPECT_EQ(j["summary"]["commuting"], 4);
  CliRun cube = hier("spanning-search " + corpus("cube.hier") + " --eta-kernel off");
  EXPECT_EQ(cube.status, 0);
  EXPECT_TRUE(contains(cube, "0 / 24 predicted coherent"));
  EXPECT_TRUE(contains(hier("spanning-search " + corpus("cube.hier")), "24 / 24 coherent"));
  EXPECT_TRUE(contains(hier("spanning-search " + corpus("single.hier")), "1 / 1 coherent"));
}

TEST(CliTest, GenerateMatchesLibrary) {
  CliRun r = hier("generate --seed 11");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, hierlab::generate_hierarchy(11));
}

TEST(CliTest, ErrorsExitTwoWithPositions) {
  auto dir = std::filesystem::temp_directory_path() / "hierlab_cli_test";
  std::filesystem::create_directories(dir);
  auto bad = dir / "bad.hier";
  std::ofstream(bad) << "class c (α : Type) :=\n  (x : α\n";
  CliRun r = hier("elaborate " + bad.string());
  EXPECT_EQ(r.status, 2);
  EXPECT_TRUE(contains(r, bad.string() + ":3:1")) << r.out;
  auto clash = dir / "clash.hier";
  std::ofstream(clash) << "class a (α : Type) := (x : α)\n"
                          "class b (α : Type) := (x : α → α)\n"
                          "class c (α : Type) extends a α, b α\n";
  EXPECT_EQ(hier("elaborate " + clash.string()).status, 2);
  EXPECT_EQ(hier("elaborate /nonexistent/file.hier").status, 2);
  EXPECT_EQ(hier("elaborate " + corpus("fig1.hier") + " --eta-kernel maybe").status, 2);
  EXPECT_EQ(hier("elaborate " + corpus("fig1.hier") + " --parent-order ring:monoid").status, 2);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, OutputIsDeterministic) {
  std::string cmd = "--emit json spanning-search " + corpus("fig1.hier") + " --eta-kernel off";
  EXPECT_EQ(hier(cmd).out, hier(cmd).out);
  std::string res = "resolve " + corpus("module.hier") + " --trace";
  EXPECT_EQ(hier(res).out, hier(res).out);
}

}  // namespace
