//------------------------------------------------------------------------------
//
//   Copyright 2026 The clubgood Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "clubgood/config.hpp"
#include "clubgood/errors.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace clubgood;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir()
{
  auto const *info = ::testing::UnitTest::GetInstance()->current_test_info();
  fs::path    dir  = fs::temp_directory_path() / "clubgood_tests" / info->name();
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(fs::path const &p)
{
  std::ifstream     in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

char const *kSolve = R"({
  "command": "solve",
  "economy": {"buyers": 2, "cost": "1/4", "valuation": {"kind": "pi", "pi": "1"}},
  "params": {"profile": [0.9, 0.7]}
})";

}  // namespace

TEST(Config, ParsesFractionsAndNumbers)
{
  EXPECT_DOUBLE_EQ(parse_number(Json("3/8"), "x"), 0.375);
  EXPECT_DOUBLE_EQ(parse_number(Json(0.25), "x"), 0.25);
  EXPECT_DOUBLE_EQ(parse_number(Json("-1/4"), "x"), -0.25);
  EXPECT_THROW(parse_number(Json("1/0"), "x"), ConfigError);
  EXPECT_THROW(parse_number(Json("0.5/2"), "x"), ConfigError);
  EXPECT_THROW(parse_number(Json(true), "x"), ConfigError);
}

TEST(Config, BuildsEconomiesFromJson)
{
  auto e = economy_from_json(Json::parse(
      R"({"buyers": 3, "cost": 0.5, "valuation": {"kind": "linear_in_k", "intercept": 1, "slope": "1/10"},
          "profit_effect": {"kind": "table", "values": [0, 0.1, 0.15, 0.18]}})"));
  EXPECT_EQ(e.buyers(), 3);
  EXPECT_DOUBLE_EQ(e.value(0.5, 2), 0.6);
  EXPECT_DOUBLE_EQ(e.phi(3), 0.18);
}

TEST(Config, RejectsUnknownKeysAndBadBlocks)
{
  EXPECT_THROW(parse_config(R"({"command": "solve", "colour": 1})"), ConfigError);
  EXPECT_THROW(economy_from_json(Json::parse(R"({"buyers": 2, "cost": 1, "costs": 2})")), ConfigError);
  EXPECT_THROW(economy_from_json(Json::parse(R"({"buyers": 2, "cost": 1, "valuation": {"kind": "pi"}})")),
               ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
}

TEST(Config, NonRegularEconomyIsAPreconditionFailure)
{
  EXPECT_THROW(economy_from_json(Json::parse(
                   R"({"buyers": 2, "cost": 0.25,
                       "distribution": {"kind": "piecewise_linear", "knots": [[0,0],[0.1,0.9],[1,1]]}})")),
               PreconditionError);
}

TEST(Config, RandomCommandsNeedASeed)
{
  auto cfg = parse_config(R"({"command": "oracle-check", "params": {"economies": 1, "profiles": 10}})");
  RunOptions opt;
  opt.out_dir = scratch_dir();
  EXPECT_THROW(run(cfg, opt), ConfigError);
  opt.seed_override = 5;
  EXPECT_EQ(run(cfg, opt).exit_code, kExitOk);
}

TEST(Config, SolveWritesArtifactsAndManifest)
{
  RunOptions opt;
  opt.out_dir = scratch_dir();
  auto r      = run(parse_config(kSolve), opt);
  EXPECT_EQ(r.exit_code, kExitOk);
  auto solved = Json::parse(slurp(opt.out_dir / "solve.json"));
  EXPECT_EQ(solved.dump().find("0.7") != std::string::npos, true);
  auto manifest = Json::parse(slurp(opt.out_dir / "manifest.json"));
  EXPECT_EQ(manifest["command"], "solve");
  EXPECT_EQ(manifest["config_sha256"], sha256_hex(manifest["config"].dump()));
}

TEST(Config, ManifestReplaysToIdenticalArtifacts)
{
  fs::path   dir = scratch_dir();
  RunOptions a;
  a.out_dir = dir / "a";
  run(parse_config(R"({"command": "region", "economy": {"buyers": 2, "cost": "1/4",
                       "valuation": {"kind": "pi", "pi": "3/8"}}, "params": {"resolution": 40}})"),
      a);
  RunOptions b;
  b.out_dir = dir / "b";
  run(parse_config(slurp(a.out_dir / "manifest.json")), b);
  EXPECT_EQ(slurp(a.out_dir / "region.csv"), slurp(b.out_dir / "region.csv"));
  EXPECT_EQ(slurp(a.out_dir / "manifest.json"), slurp(b.out_dir / "manifest.json"));
}

TEST(Config, TamperedManifestIsRejected)
{
  RunOptions opt;
  opt.out_dir = scratch_dir();
  run(parse_config(kSolve), opt);
  auto m = Json::parse(slurp(opt.out_dir / "manifest.json"));
  m["config"]["params"]["profile"][0] = 0.5;
  EXPECT_THROW(parse_config(m.dump()), ConfigError);
}

TEST(Config, OutputsAreIndependentOfThreadCount)
{
  fs::path   dir = scratch_dir();
  auto       cfg = parse_config(R"({"command": "interim", "seed": 3, "economy": {"buyers": 3, "cost": "1/2",
                       "valuation": {"kind": "linear_in_k", "intercept": 1, "slope": "1/10"}},
                       "params": {"points": 6, "method": "monte_carlo", "draws": 3000}})");
  RunOptions one;
  one.out_dir = dir / "one";
  RunOptions three;
  three.out_dir = dir / "three";
  three.threads = 3;
  run(cfg, one);
  run(cfg, three);
  EXPECT_EQ(slurp(one.out_dir / "interim.csv"), slurp(three.out_dir / "interim.csv"));
}

TEST(Config, Sha256KnownVector)
{
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
