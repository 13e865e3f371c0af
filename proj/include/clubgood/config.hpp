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

#pragma once

#include "clubgood/economy.hpp"
#include "clubgood/verification.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace clubgood {

using Json = nlohmann::json;

// Decimal number or exact fraction "p/q".
double parse_number(Json const &value, std::string const &where);

// Economy block: buyers, cost, distribution, valuation, profit_effect, validation_grid.
Economy economy_from_json(Json const &block);

// Economy block without "buyers", used for families indexed by market size.
EconomyFamily family_from_json(Json const &block);

struct RunConfig
{
  std::string                  command;
  std::optional<std::uint64_t> seed;
  Json                         economy;  // null when absent
  Json                         params;   // object
  // Canonical form used for the manifest and its hash.
  Json to_json() const;
};

// Accepts a config file or a manifest written by a previous run.
RunConfig parse_config(std::string const &text);

struct RunOptions
{
  std::filesystem::path        out_dir = ".";
  int                          threads = 1;
  std::optional<std::uint64_t> seed_override;
};

enum ExitCode : int
{
  kExitOk           = 0,
  kExitInternal     = 1,
  kExitConfig       = 2,
  kExitPrecondition = 3,
  kExitVerification = 4,
};

struct RunResult
{
  int                      exit_code = kExitOk;
  std::string              summary;
  std::vector<std::string> artifacts;
};

// Validates every parameter before computing, writes artifacts and a manifest.
// Config and precondition failures are thrown as ConfigError / PreconditionError.
RunResult run(RunConfig const &config, RunOptions const &options);

std::string sha256_hex(std::string const &data);

char const *version_string();

}  // namespace clubgood
