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

#include "clubgood/clubgood.h"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

int main(int argc, char **argv)
{
  CLI::App app{"Optimal club-good mechanisms: allocation, payments, verification"};
  std::string   config;
  std::string   out = ".";
  int           threads = 1;
  std::uint64_t seed    = 0;
  app.add_option("--config", config, "Config file or manifest of a previous run")->required();
  app.add_option("--out", out, "Output directory");
  app.add_option("--threads", threads, "Worker threads (affects speed only)")->check(CLI::PositiveNumber);
  auto *seed_opt = app.add_option("--seed", seed, "Overrides the config seed");
  app.set_version_flag("--version", std::string(cg_version()));
  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  cg_status status = cg_run(config.c_str(), out.c_str(), threads, seed_opt->count() > 0 ? 1 : 0, seed);
  std::cout << cg_last_summary();
  switch (status)
  {
  case CG_OK:
    return 0;
  case CG_ERR_CONFIG:
    std::cerr << "config error: " << cg_last_error() << "\n";
    return 2;
  case CG_ERR_PRECONDITION:
    std::cerr << "precondition failed: " << cg_last_error() << "\n";
    return 3;
  case CG_ERR_VERIFICATION:
    std::cerr << "verification failed\n";
    return 4;
  default:
    std::cerr << "error: " << cg_last_error() << "\n";
    return 1;
  }
}
