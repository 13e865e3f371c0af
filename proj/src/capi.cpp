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

#include "clubgood/acceptance.hpp"
#include "clubgood/allocation.hpp"
#include "clubgood/config.hpp"
#include "clubgood/errors.hpp"
#include "clubgood/payments.hpp"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

struct cg_economy
{
  clubgood::Economy economy;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_summary;

template <class Fn>
cg_status guarded(Fn &&fn)
{
  last_error.clear();
  try
  {
    return fn();
  }
  catch (clubgood::ConfigError const &e)
  {
    last_error = e.what();
    return CG_ERR_CONFIG;
  }
  catch (clubgood::PreconditionError const &e)
  {
    last_error = e.what();
    return CG_ERR_PRECONDITION;
  }
  catch (clubgood::NumericalError const &e)
  {
    last_error = e.what();
    return CG_ERR_NUMERICAL;
  }
  catch (std::invalid_argument const &e)
  {
    last_error = e.what();
    return CG_ERR_INVALID_ARGUMENT;
  }
  catch (std::out_of_range const &e)
  {
    last_error = e.what();
    return CG_ERR_INVALID_ARGUMENT;
  }
  catch (std::exception const &e)
  {
    last_error = e.what();
    return CG_ERR_INTERNAL;
  }
  catch (...)
  {
    last_error = "unknown error";
    return CG_ERR_INTERNAL;
  }
}

cg_status null_argument(char const *name)
{
  last_error = std::string(name) + " must not be NULL";
  return CG_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char *cg_version(void)
{
  return clubgood::version_string();
}

const char *cg_last_error(void)
{
  return last_error.c_str();
}

const char *cg_last_summary(void)
{
  return last_summary.c_str();
}

cg_status cg_economy_from_json(const char *json, cg_economy **out)
{
  if (json == nullptr || out == nullptr)
  {
    return null_argument("json and out");
  }
  *out = nullptr;
  return guarded([&] {
    clubgood::Json j;
    try
    {
      j = clubgood::Json::parse(json);
    }
    catch (clubgood::Json::parse_error const &e)
    {
      throw clubgood::ConfigError(std::string("economy is not valid JSON: ") + e.what());
    }
    *out = new cg_economy{clubgood::economy_from_json(j)};
    return CG_OK;
  });
}

void cg_economy_free(cg_economy *economy)
{
  delete economy;
}

int cg_economy_buyers(const cg_economy *economy)
{
  return economy ? economy->economy.buyers() : 0;
}

cg_status cg_virtual_value(const cg_economy *economy, double theta, int set_size, double *out)
{
  if (economy == nullptr || out == nullptr)
  {
    return null_argument("economy and out");
  }
  return guarded([&] {
    if (set_size < 1 || set_size > economy->economy.buyers())
    {
      throw std::out_of_range("set size outside 1..n");
    }
    *out = economy->economy.virtual_value(theta, set_size);
    return CG_OK;
  });
}

cg_status cg_solve(const cg_economy *economy, const double *profile, size_t n, int *consume,
                   int *set_size, double *profit, double *transfers)
{
  if (economy == nullptr || profile == nullptr)
  {
    return null_argument("economy and profile");
  }
  return guarded([&] {
    if (n != static_cast<size_t>(economy->economy.buyers()))
    {
      throw std::invalid_argument("profile length must equal the number of buyers");
    }
    std::span<double const> prof(profile, n);
    clubgood::Allocation    a = clubgood::solve_allocation(economy->economy, prof);
    if (consume)
    {
      for (size_t i = 0; i < n; ++i)
      {
        consume[i] = a.consume[i] ? 1 : 0;
      }
    }
    if (set_size)
    {
      *set_size = a.set_size;
    }
    if (profit)
    {
      *profit = a.profit;
    }
    if (transfers)
    {
      clubgood::TransferVector t = clubgood::expost_transfers(economy->economy, prof);
      std::memcpy(transfers, t.payments.data(), n * sizeof(double));
    }
    return CG_OK;
  });
}

cg_status cg_interim(const cg_economy *economy, double theta, double *q_by_k, double *payment)
{
  if (economy == nullptr)
  {
    return null_argument("economy");
  }
  return guarded([&] {
    if (economy->economy.buyers() != 2)
    {
      throw clubgood::PreconditionError("exact interim quadrature needs exactly two buyers");
    }
    clubgood::OpponentQuadrature quad(economy->economy, 0);
    clubgood::InterimPoint       p = quad.at(theta);
    if (q_by_k)
    {
      std::memcpy(q_by_k, p.q_by_k.data(), p.q_by_k.size() * sizeof(double));
    }
    if (payment)
    {
      *payment = p.m;
    }
    return CG_OK;
  });
}

cg_status cg_run(const char *config_path, const char *out_dir, int threads, int has_seed, uint64_t seed)
{
  if (config_path == nullptr || out_dir == nullptr)
  {
    return null_argument("config_path and out_dir");
  }
  last_summary.clear();
  return guarded([&] {
    std::ifstream in(config_path, std::ios::binary);
    if (!in)
    {
      throw clubgood::ConfigError(std::string("cannot read config ") + config_path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    clubgood::RunConfig  config = clubgood::parse_config(buf.str());
    clubgood::RunOptions options;
    options.out_dir = out_dir;
    options.threads = threads;
    if (has_seed)
    {
      options.seed_override = seed;
    }
    clubgood::RunResult result = clubgood::run(config, options);
    last_summary               = result.summary;
    if (result.exit_code == clubgood::kExitVerification)
    {
      last_error = "verification failed";
      return CG_ERR_VERIFICATION;
    }
    return result.exit_code == clubgood::kExitOk ? CG_OK : CG_ERR_INTERNAL;
  });
}

cg_status cg_verify_all(uint64_t seed, int threads, const int *ids, size_t count, char **report)
{
  if (report == nullptr || (count > 0 && ids == nullptr))
  {
    return null_argument("report and ids");
  }
  *report = nullptr;
  return guarded([&] {
    clubgood::AcceptanceOptions o;
    o.seed    = seed;
    o.threads = threads;
    o.only.assign(ids, ids + count);
    std::string text;
    bool        all = true;
    clubgood::run_acceptance(o, [&](clubgood::CriterionResult const &r) {
      all = all && r.pass;
      text += clubgood::format_criterion(r) + "\n";
    });
    *report = static_cast<char *>(std::malloc(text.size() + 1));
    if (*report == nullptr)
    {
      throw std::bad_alloc();
    }
    std::memcpy(*report, text.c_str(), text.size() + 1);
    return all ? CG_OK : CG_ERR_VERIFICATION;
  });
}

void cg_string_free(char *text)
{
  std::free(text);
}

}  // extern "C"
