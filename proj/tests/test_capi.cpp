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

// Exercises the shared library through its C header only.

#include "clubgood/clubgood.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

char const *kEconomy =
    R"({"buyers": 2, "cost": "1/4", "valuation": {"kind": "pi", "pi": "1"}})";

}  // namespace

TEST(CApi, VersionIsSet)
{
  EXPECT_STREQ(cg_version(), "0.1.0");
}

TEST(CApi, EconomyLifecycleAndSolve)
{
  cg_economy *e = nullptr;
  ASSERT_EQ(cg_economy_from_json(kEconomy, &e), CG_OK);
  EXPECT_EQ(cg_economy_buyers(e), 2);
  double psi = 0;
  ASSERT_EQ(cg_virtual_value(e, 0.75, 1, &psi), CG_OK);
  EXPECT_NEAR(psi, 0.5, 1e-12);

  double profile[2] = {0.9, 0.7};
  int    consume[2] = {-1, -1};
  int    size       = -1;
  double profit     = 0;
  double pay[2]     = {0, 0};
  ASSERT_EQ(cg_solve(e, profile, 2, consume, &size, &profit, pay), CG_OK);
  EXPECT_EQ(consume[0], 1);
  EXPECT_EQ(consume[1], 0);
  EXPECT_EQ(size, 1);
  EXPECT_NEAR(pay[0], 0.7, 1e-9);
  EXPECT_EQ(pay[1], 0.0);

  double q[2] = {0, 0};
  double m    = 0;
  ASSERT_EQ(cg_interim(e, 0.8, q, &m), CG_OK);
  EXPECT_NEAR(q[0], 0.8, 1e-12);
  EXPECT_NEAR(m, 0.5153125, 1e-10);
  cg_economy_free(e);
}

TEST(CApi, ErrorsAreReported)
{
  cg_economy *e = nullptr;
  EXPECT_EQ(cg_economy_from_json(R"({"buyers": 2})", &e), CG_ERR_CONFIG);
  EXPECT_NE(std::string(cg_last_error()), "");
  EXPECT_EQ(cg_economy_from_json(nullptr, &e), CG_ERR_INVALID_ARGUMENT);
  ASSERT_EQ(cg_economy_from_json(kEconomy, &e), CG_OK);
  double out = 0;
  EXPECT_EQ(cg_virtual_value(e, 2.0, 1, &out), CG_ERR_INVALID_ARGUMENT);
  double profile[1] = {0.5};
  EXPECT_EQ(cg_solve(e, profile, 1, nullptr, nullptr, nullptr, nullptr), CG_ERR_INVALID_ARGUMENT);
  cg_economy_free(e);
  cg_economy_free(nullptr);
}

TEST(CApi, RunWritesArtifacts)
{
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "clubgood_capi";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"command": "cutoffs", "params": {"pi": "5/8", "cost": "1/4"}})";
  }
  ASSERT_EQ(cg_run((dir / "cfg.json").c_str(), (dir / "out").c_str(), 1, 0, 0), CG_OK) << cg_last_error();
  EXPECT_TRUE(fs::exists(dir / "out" / "cutoffs.txt"));
  EXPECT_TRUE(fs::exists(dir / "out" / "manifest.json"));
  EXPECT_NE(std::string(cg_last_summary()), "");
  EXPECT_EQ(cg_run((dir / "missing.json").c_str(), (dir / "out").c_str(), 1, 0, 0), CG_ERR_CONFIG);
}

TEST(CApi, VerifyAllSubset)
{
  int   ids[1] = {9};
  char *report = nullptr;
  EXPECT_EQ(cg_verify_all(20260101, 1, ids, 1, &report), CG_OK);
  ASSERT_NE(report, nullptr);
  EXPECT_NE(std::string(report).find("PASS"), std::string::npos);
  cg_string_free(report);
}
