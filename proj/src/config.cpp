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

#include "clubgood/acceptance.hpp"
#include "clubgood/allocation.hpp"
#include "clubgood/errors.hpp"
#include "clubgood/indirect.hpp"
#include "clubgood/numerics.hpp"
#include "clubgood/payments.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <set>
#include <sstream>

namespace clubgood {

namespace {

constexpr char const *kVersion = "0.1.0";

// Object view that rejects keys outside an allowed set.
class Obj
{
public:
  Obj(Json const &j, std::string where, std::set<std::string> allowed)
    : j_(j)
    , where_(std::move(where))
  {
    if (!j_.is_object())
    {
      throw ConfigError(where_ + " must be an object");
    }
    for (auto const &item : j_.items())
    {
      if (allowed.count(item.key()) == 0)
      {
        throw ConfigError("unknown key '" + item.key() + "' in " + where_);
      }
    }
  }

  bool has(std::string const &key) const { return j_.contains(key); }

  Json const &get(std::string const &key) const
  {
    if (!has(key))
    {
      throw ConfigError("missing key '" + key + "' in " + where_);
    }
    return j_.at(key);
  }

  std::string path(std::string const &key) const { return where_ + "." + key; }

  double num(std::string const &key) const { return parse_number(get(key), path(key)); }
  double num(std::string const &key, double fallback) const { return has(key) ? num(key) : fallback; }

  long long integer(std::string const &key, long long lo, long long hi) const
  {
    Json const &v = get(key);
    long long   out;
    if (v.is_number_integer())
    {
      out = v.get<long long>();
    }
    else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>())
    {
      out = static_cast<long long>(v.get<double>());
    }
    else
    {
      throw ConfigError(path(key) + " must be an integer");
    }
    if (out < lo || out > hi)
    {
      throw ConfigError(path(key) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return out;
  }
  long long integer(std::string const &key, long long lo, long long hi, long long fallback) const
  {
    return has(key) ? integer(key, lo, hi) : fallback;
  }

  std::string str(std::string const &key) const
  {
    Json const &v = get(key);
    if (!v.is_string())
    {
      throw ConfigError(path(key) + " must be a string");
    }
    return v.get<std::string>();
  }
  std::string str(std::string const &key, std::string const &fallback) const
  {
    return has(key) ? str(key) : fallback;
  }

private:
  Json const &j_;
  std::string where_;
};

double parse_decimal(std::string const &s, std::string const &where)
{
  double      out = 0.0;
  char const *b   = s.data();
  char const *e   = s.data() + s.size();
  if (b != e && *b == '+')
  {
    ++b;
  }
  auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc() || res.ptr != e)
  {
    throw ConfigError(where + ": cannot parse number '" + s + "'");
  }
  return out;
}

TypeDistribution distribution_from_json(Json const &j, std::string const &where)
{
  Obj         o(j, where, {"kind", "upper", "knots"});
  std::string kind = o.str("kind");
  if (kind == "uniform")
  {
    if (o.has("knots"))
    {
      throw ConfigError(where + ": uniform distributions take no knots");
    }
    double upper = o.num("upper", 1.0);
    if (!(upper > 0.0) || !std::isfinite(upper))
    {
      throw ConfigError(where + ".upper must be positive");
    }
    return TypeDistribution::uniform(upper);
  }
  if (kind == "piecewise_linear")
  {
    if (o.has("upper"))
    {
      throw ConfigError(where + ": the last knot sets the upper bound");
    }
    Json const &ks = o.get("knots");
    if (!ks.is_array())
    {
      throw ConfigError(where + ".knots must be an array of [theta, cdf] pairs");
    }
    std::vector<TypeDistribution::Knot> knots;
    for (std::size_t i = 0; i < ks.size(); ++i)
    {
      std::string kw = where + ".knots[" + std::to_string(i) + "]";
      if (!ks[i].is_array() || ks[i].size() != 2)
      {
        throw ConfigError(kw + " must be a [theta, cdf] pair");
      }
      knots.push_back({parse_number(ks[i][0], kw), parse_number(ks[i][1], kw)});
    }
    try
    {
      return TypeDistribution::piecewise_linear(std::move(knots));
    }
    catch (std::invalid_argument const &e)
    {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ".kind must be 'uniform' or 'piecewise_linear'");
}

ValuationModel valuation_from_json(Json const &j, std::string const &where)
{
  Obj         o(j, where, {"kind", "pi", "intercept", "slope", "level", "decay"});
  std::string kind = o.str("kind");
  auto        only = [&](std::set<std::string> const &keys) {
    for (auto const &item : j.items())
    {
      if (item.key() != "kind" && keys.count(item.key()) == 0)
      {
        throw ConfigError("key '" + item.key() + "' does not apply to valuation kind '" + kind + "'");
      }
    }
  };
  if (kind == "none")
  {
    only({});
    return ValuationModel::no_network_effects();
  }
  if (kind == "pi")
  {
    only({"pi"});
    double pi = o.num("pi");
    if (!(pi >= 0.0 && pi <= 1.0))
    {
      throw ConfigError(where + ".pi must lie in [0, 1]");
    }
    return ValuationModel::pi_family(pi);
  }
  if (kind == "linear_in_k")
  {
    only({"intercept", "slope"});
    return ValuationModel::linear_in_k(o.num("intercept"), o.num("slope"));
  }
  if (kind == "saturating")
  {
    only({"level", "decay"});
    return ValuationModel::saturating(o.num("level"), o.num("decay"));
  }
  throw ConfigError(where + ".kind must be one of none, pi, linear_in_k, saturating");
}

std::function<std::vector<double>(int)> phi_from_json(Json const &j, std::string const &where)
{
  if (j.is_null())
  {
    return [](int n) { return phi_zero(n); };
  }
  Obj         o(j, where, {"kind", "values", "slope", "scale"});
  std::string kind = o.str("kind");
  auto        only = [&](std::set<std::string> const &keys) {
    for (auto const &item : j.items())
    {
      if (item.key() != "kind" && keys.count(item.key()) == 0)
      {
        throw ConfigError("key '" + item.key() + "' does not apply to profit_effect kind '" + kind + "'");
      }
    }
  };
  if (kind == "zero")
  {
    only({});
    return [](int n) { return phi_zero(n); };
  }
  if (kind == "linear")
  {
    only({"slope"});
    double slope = o.num("slope");
    return [slope](int n) { return phi_linear(n, slope); };
  }
  if (kind == "log")
  {
    only({"scale"});
    double scale = o.num("scale");
    return [scale](int n) { return phi_log(n, scale); };
  }
  if (kind == "table")
  {
    only({"values"});
    Json const &vs = o.get("values");
    if (!vs.is_array())
    {
      throw ConfigError(where + ".values must be an array");
    }
    std::vector<double> values;
    for (std::size_t i = 0; i < vs.size(); ++i)
    {
      values.push_back(parse_number(vs[i], where + ".values[" + std::to_string(i) + "]"));
    }
    return [values, where](int n) {
      if (values.size() != static_cast<std::size_t>(n) + 1)
      {
        throw ConfigError(where + ".values needs buyers + 1 entries");
      }
      return values;
    };
  }
  throw ConfigError(where + ".kind must be one of zero, table, linear, log");
}

struct EconomyParts
{
  int                                     buyers = 0;
  double                                  cost   = 0.0;
  TypeDistribution                        dist   = TypeDistribution::uniform(1.0);
  ValuationModel                          val    = ValuationModel::no_network_effects();
  std::function<std::vector<double>(int)> phi;
  int                                     grid = 1001;
};

EconomyParts parts_from_json(Json const &j, bool with_buyers)
{
  std::set<std::string> keys{"cost", "distribution", "valuation", "profit_effect", "validation_grid"};
  if (with_buyers)
  {
    keys.insert("buyers");
  }
  Obj          o(j, "economy", keys);
  EconomyParts p;
  if (with_buyers)
  {
    p.buyers = static_cast<int>(o.integer("buyers", 1, 64));
  }
  p.cost = o.num("cost");
  if (!std::isfinite(p.cost))
  {
    throw ConfigError("economy.cost must be finite");
  }
  p.dist = o.has("distribution") ? distribution_from_json(o.get("distribution"), "economy.distribution")
                                 : TypeDistribution::uniform(1.0);
  p.val  = o.has("valuation") ? valuation_from_json(o.get("valuation"), "economy.valuation")
                              : ValuationModel::no_network_effects();
  p.phi  = phi_from_json(o.has("profit_effect") ? o.get("profit_effect") : Json(), "economy.profit_effect");
  p.grid = static_cast<int>(o.integer("validation_grid", 3, 1000001, 1001));
  return p;
}

void write_file(std::filesystem::path const &path, std::string const &content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
  {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << content;
  if (!out)
  {
    throw std::runtime_error("failed writing " + path.string());
  }
}

struct Context
{
  std::filesystem::path    out_dir;
  int                      threads = 1;
  std::uint64_t            seed    = 0;
  std::vector<std::string> artifacts;
  std::ostringstream       summary;

  void write(std::string const &name, std::string const &content)
  {
    write_file(out_dir / name, content);
    artifacts.push_back(name);
  }
};

using Task = std::function<int(Context &)>;

std::string lines_of(std::vector<double> const &v)
{
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
  {
    s += (i ? " " : "") + format_double(v[i]);
  }
  return s;
}

struct GameSpec
{
  std::string  game;
  double       pi   = 0.0;
  double       cost = 0.0;
  TableOptions table;
  Json         economy;
};

GameSpec game_spec(Obj const &p, RunConfig const &config)
{
  GameSpec g;
  g.game        = p.str("game");
  g.table.knots = static_cast<int>(p.integer("knots", 2, 1000001, 2001));
  g.table.draws = static_cast<std::size_t>(p.integer("table_draws", 1, 100000000, 20000));
  if (g.game == "allpay")
  {
    if (p.has("pi") || p.has("cost"))
    {
      throw ConfigError("the all-pay game reads its economy block, not params.pi / params.cost");
    }
    if (config.economy.is_null())
    {
      throw ConfigError("the all-pay game needs an economy block");
    }
    g.economy = config.economy;
  }
  else if (g.game == "gift" || g.game == "exclusivity")
  {
    if (!config.economy.is_null())
    {
      throw ConfigError("the " + g.game + " game is built from params.pi and params.cost");
    }
    g.pi   = p.num("pi");
    g.cost = p.num("cost");
  }
  else
  {
    throw ConfigError("params.game must be allpay, gift or exclusivity");
  }
  return g;
}

std::unique_ptr<IndirectGame> build_game(GameSpec const &g, Context const &ctx)
{
  TableOptions t = g.table;
  t.seed         = ctx.seed;
  t.threads      = ctx.threads;
  if (g.game == "allpay")
  {
    return std::make_unique<AllPayGame>(economy_from_json(g.economy), t);
  }
  if (g.game == "gift")
  {
    return std::make_unique<GiftGame>(g.pi, g.cost, t);
  }
  return std::make_unique<ExclusivityGame>(g.pi, g.cost, t);
}

std::string maps_csv(IndirectGame const &game)
{
  std::vector<NamedMap> maps;
  if (auto const *a = dynamic_cast<AllPayGame const *>(&game))
  {
    maps.push_back({"payment", a->payment_table()});
  }
  else if (auto const *gg = dynamic_cast<GiftGame const *>(&game))
  {
    maps = gg->maps();
  }
  else if (auto const *e = dynamic_cast<ExclusivityGame const *>(&game))
  {
    maps = e->maps();
  }
  std::ostringstream os;
  os << "map,theta,value\n";
  for (NamedMap const &m : maps)
  {
    for (std::size_t i = 0; i < m.map.xs().size(); ++i)
    {
      os << m.name << ',' << format_double(m.map.xs()[i]) << ',' << format_double(m.map.ys()[i]) << "\n";
    }
  }
  return os.str();
}

void require_seed(RunConfig const &config)
{
  if (!config.seed)
  {
    throw ConfigError("command '" + config.command + "' is random and needs an explicit seed");
  }
}

void require_economy(RunConfig const &config)
{
  if (config.economy.is_null())
  {
    throw ConfigError("command '" + config.command + "' needs an economy block");
  }
}

void forbid_economy(RunConfig const &config)
{
  if (!config.economy.is_null())
  {
    throw ConfigError("command '" + config.command + "' takes no economy block");
  }
}

Task plan(RunConfig const &config)
{
  std::string const &cmd = config.command;
  Json const         params = config.params.is_null() ? Json::object() : config.params;

  if (cmd == "solve")
  {
    require_economy(config);
    Obj         p(params, "params", {"profile"});
    Economy     econ = economy_from_json(config.economy);
    Json const &pj   = p.get("profile");
    if (!pj.is_array() || pj.size() != static_cast<std::size_t>(econ.buyers()))
    {
      throw ConfigError("params.profile must list one type per buyer");
    }
    std::vector<double> profile;
    for (std::size_t i = 0; i < pj.size(); ++i)
    {
      double t = parse_number(pj[i], "params.profile[" + std::to_string(i) + "]");
      if (!(t >= 0.0 && t <= econ.upper()))
      {
        throw ConfigError("params.profile[" + std::to_string(i) + "] lies outside the type support");
      }
      profile.push_back(t);
    }
    return [econ, profile](Context &ctx) {
      Allocation     a = solve_allocation(econ, profile);
      TransferVector t = expost_transfers(econ, profile);
      Json           out;
      out["consume"]   = a.consume;
      out["set_size"]  = a.set_size;
      out["provided"]  = a.provided;
      out["profit"]    = a.profit;
      out["transfers"] = t.payments;
      ctx.write("solve.json", out.dump(2) + "\n");
      std::vector<double> c(a.consume.begin(), a.consume.end());
      ctx.summary << "allocation " << lines_of(c) << "\ntransfers " << lines_of(t.payments) << "\n";
      return int{kExitOk};
    };
  }

  if (cmd == "oracle-check")
  {
    forbid_economy(config);
    require_seed(config);
    Obj  p(params, "params", {"economies", "profiles", "min_buyers", "max_buyers"});
    auto economies = static_cast<std::size_t>(p.integer("economies", 1, 10000000, 500));
    auto profiles  = static_cast<std::size_t>(p.integer("profiles", 1, 10000000, 200));
    int  lo        = static_cast<int>(p.integer("min_buyers", 1, 20, 2));
    int  hi        = static_cast<int>(p.integer("max_buyers", 1, 20, 8));
    if (hi < lo)
    {
      throw ConfigError("params.max_buyers must be at least params.min_buyers");
    }
    return [=](Context &ctx) {
      OracleCheckReport rep = oracle_check(ctx.seed, economies, profiles, lo, hi, ctx.threads);
      ctx.write("oracle_check.txt", rep.to_text());
      ctx.summary << rep.to_text();
      return rep.pass ? int{kExitOk} : int{kExitVerification};
    };
  }

  if (cmd == "region")
  {
    require_economy(config);
    Obj     p(params, "params", {"resolution"});
    Economy econ       = economy_from_json(config.economy);
    int     resolution = static_cast<int>(p.integer("resolution", 1, 20001, 201));
    if (econ.buyers() != 2)
    {
      throw PreconditionError("region grids need exactly two buyers");
    }
    return [econ, resolution](Context &ctx) {
      RegionGrid grid = region_grid(econ, resolution, ctx.threads);
      ctx.write("region.csv", grid.to_csv());
      ctx.summary << "region grid " << resolution << "x" << resolution << " written\n";
      return int{kExitOk};
    };
  }

  if (cmd == "interim")
  {
    require_economy(config);
    Obj            p(params, "params", {"buyer", "points", "method", "draws"});
    Economy        econ = economy_from_json(config.economy);
    InterimOptions io;
    int            buyer  = static_cast<int>(p.integer("buyer", 0, econ.buyers() - 1, 0));
    auto           points = static_cast<std::size_t>(p.integer("points", 2, 1000001, 401));
    std::string    method = p.str("method", econ.buyers() == 2 ? "quadrature" : "monte_carlo");
    if (method == "quadrature")
    {
      io.method = InterimMethod::Quadrature;
      if (econ.buyers() != 2)
      {
        throw ConfigError("quadrature interim schedules need exactly two buyers");
      }
      if (p.has("draws"))
      {
        throw ConfigError("params.draws applies to monte_carlo only");
      }
    }
    else if (method == "monte_carlo")
    {
      io.method = InterimMethod::MonteCarlo;
      io.draws  = static_cast<std::size_t>(p.integer("draws", 1, 1000000000, 100000));
      require_seed(config);
    }
    else
    {
      throw ConfigError("params.method must be quadrature or monte_carlo");
    }
    return [econ, io, buyer, points](Context &ctx) mutable {
      io.seed             = ctx.seed;
      io.threads          = ctx.threads;
      InterimSchedule sch = interim_schedule(econ, buyer, linspace(0.0, econ.upper(), points), io);
      ctx.write("interim.csv", sch.to_csv());
      ctx.summary << "interim schedule for buyer " << buyer << " on " << points << " points written\n";
      return int{kExitOk};
    };
  }

  if (cmd == "triviality")
  {
    require_economy(config);
    Obj     p(params, "params", {});
    Economy econ = economy_from_json(config.economy);
    return [econ](Context &ctx) {
      TrivialityVerdict v = classify_trivial(econ);
      ctx.write("triviality.txt", v.to_text());
      ctx.summary << v.to_text();
      return int{kExitOk};
    };
  }

  if (cmd == "cutoffs")
  {
    forbid_economy(config);
    Obj         p(params, "params", {"pi", "cost", "regime"});
    double      pi     = p.num("pi");
    double      cost   = p.num("cost");
    std::string regime = p.str("regime", "four-region");
    if (regime != "four-region" && regime != "solo" && regime != "shared")
    {
      throw ConfigError("params.regime must be four-region, solo or shared");
    }
    return [=](Context &ctx) {
      std::ostringstream os;
      if (regime == "four-region")
      {
        BenchmarkCutoffs c = solve_benchmark_cutoffs(pi, cost);
        os << "effects=" << (c.positive ? "positive" : "negative") << "\nx=" << format_double(c.x)
           << "\ny=" << format_double(c.y) << "\nz=" << format_double(c.z) << "\n";
      }
      else if (regime == "solo")
      {
        os << "reserve=" << format_double(rival_reserve(pi, cost)) << "\n";
      }
      else
      {
        os << "lowest_served=" << format_double(shared_entry(pi, cost)) << "\n";
      }
      ctx.write("cutoffs.txt", os.str());
      ctx.summary << os.str();
      return int{kExitOk};
    };
  }

  if (cmd == "indirect-build")
  {
    Obj      p(params, "params", {"game", "pi", "cost", "knots", "table_draws", "points"});
    GameSpec g      = game_spec(p, config);
    auto     points = static_cast<std::size_t>(p.integer("points", 2, 1000001, 401));
    if (g.game == "allpay")
    {
      Economy econ = economy_from_json(g.economy);
      if (econ.buyers() != 2)
      {
        require_seed(config);
      }
    }
    return [g, points](Context &ctx) {
      auto game = build_game(g, ctx);
      ctx.write("strategy.csv", strategy_csv(*game, linspace(0.0, game->economy().upper(), points)));
      ctx.write("maps.csv", maps_csv(*game));
      ctx.summary << g.game << " game built; strategy on " << points << " points written\n";
      return int{kExitOk};
    };
  }

  if (cmd == "indirect-verify")
  {
    require_seed(config);
    Obj p(params, "params",
          {"game", "pi", "cost", "knots", "table_draws", "types", "deviations", "draws", "lattice"});
    GameSpec g       = game_spec(p, config);
    auto     types   = static_cast<std::size_t>(p.integer("types", 2, 100001, 101));
    auto     devs    = static_cast<std::size_t>(p.integer("deviations", 2, 100001, 201));
    auto     draws   = static_cast<std::size_t>(p.integer("draws", 1, 100000000, 50000));
    int      lattice = static_cast<int>(p.integer("lattice", 0, 20001, 201));
    if (lattice == 1)
    {
      throw ConfigError("params.lattice must be 0 (skip) or at least 2");
    }
    if (g.game == "allpay" && lattice > 0 && economy_from_json(g.economy).buyers() != 2)
    {
      throw ConfigError("outcome equivalence needs two buyers; set params.lattice to 0");
    }
    return [=](Context &ctx) {
      auto              game  = build_game(g, ctx);
      double            upper = game->economy().upper();
      EquilibriumReport rep   = verify_equilibrium(*game, linspace(0.0, upper, types),
                                                   linspace(0.0, upper, devs), draws, ctx.seed, ctx.threads);
      if (lattice > 0)
      {
        EquilibriumReport oe = verify_outcome_equivalence(*game, lattice, ctx.threads);
        rep.lattice          = oe.lattice;
        rep.mismatches       = oe.mismatches;
        rep.band_cells       = oe.band_cells;
        rep.band_mismatches  = oe.band_mismatches;
        rep.max_payment_gap  = oe.max_payment_gap;
        rep.equivalence_pass = oe.equivalence_pass;
      }
      ctx.write("equilibrium.txt", rep.to_text());
      ctx.write("equilibrium.csv", rep.to_csv());
      ctx.summary << rep.to_text();
      return rep.equilibrium_pass && rep.equivalence_pass ? int{kExitOk} : int{kExitVerification};
    };
  }

  if (cmd == "limit")
  {
    require_economy(config);
    require_seed(config);
    Obj           p(params, "params",
                    {"n_sequence", "replications", "threshold_tolerance", "fraction_tolerance"});
    EconomyFamily family = family_from_json(config.economy);
    std::vector<int> ns{50, 200, 1000};
    if (p.has("n_sequence"))
    {
      Json const &js = p.get("n_sequence");
      if (!js.is_array() || js.empty())
      {
        throw ConfigError("params.n_sequence must be a nonempty array of market sizes");
      }
      ns.clear();
      for (Json const &v : js)
      {
        if (!v.is_number_integer() || v.get<long long>() < 1 || v.get<long long>() > 1000000)
        {
          throw ConfigError("params.n_sequence entries must be positive integers");
        }
        ns.push_back(v.get<int>());
      }
    }
    int    reps     = static_cast<int>(p.integer("replications", 1, 100000, 50));
    double thr_tol  = p.num("threshold_tolerance", 0.02);
    double frac_tol = p.num("fraction_tolerance", 0.05);
    return [=](Context &ctx) {
      LimitReport     rep  = posted_price_limit(family, ns, reps, ctx.seed, ctx.threads);
      LimitRow const &last = rep.rows.back();
      bool            pass = std::abs(last.threshold_mean - rep.price) <= thr_tol &&
                  std::abs(last.fraction_mean - rep.target_fraction) <= frac_tol;
      std::string text = rep.to_text() + "limit " + (pass ? "PASS" : "FAIL") + " at N=" +
                         std::to_string(last.buyers) + "\n";
      ctx.write("limit.txt", text);
      ctx.write("limit.csv", rep.to_csv());
      ctx.summary << text;
      return pass ? int{kExitOk} : int{kExitVerification};
    };
  }

  if (cmd == "verify-all")
  {
    forbid_economy(config);
    require_seed(config);
    Obj              p(params, "params", {"criteria"});
    std::vector<int> only;
    if (p.has("criteria"))
    {
      Json const &js = p.get("criteria");
      if (!js.is_array())
      {
        throw ConfigError("params.criteria must be an array of criterion numbers");
      }
      for (Json const &v : js)
      {
        if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 9)
        {
          throw ConfigError("params.criteria entries must be integers 1..9");
        }
        only.push_back(v.get<int>());
      }
    }
    return [only](Context &ctx) {
      AcceptanceOptions ao;
      ao.seed    = ctx.seed;
      ao.threads = ctx.threads;
      ao.only    = only;
      std::string text;
      bool        all = true;
      run_acceptance(ao, [&](CriterionResult const &r) {
        all = all && r.pass;
        // Timings stay out of the artifact so reruns reproduce it byte for byte.
        CriterionResult untimed = r;
        untimed.seconds         = 0.0;
        text += format_criterion(untimed, false) + "\n";
        ctx.summary << format_criterion(r) << "\n";
      });
      ctx.write("acceptance.txt", text);
      return all ? int{kExitOk} : int{kExitVerification};
    };
  }

  throw ConfigError("unknown command '" + cmd + "'");
}

}  // namespace

double parse_number(Json const &value, std::string const &where)
{
  double out = 0.0;
  if (value.is_number())
  {
    out = value.get<double>();
  }
  else if (value.is_string())
  {
    std::string s     = value.get<std::string>();
    auto        slash = s.find('/');
    if (slash == std::string::npos)
    {
      out = parse_decimal(s, where);
    }
    else
    {
      std::string num = s.substr(0, slash), den = s.substr(slash + 1);
      long long   p = 0, q = 0;
      auto        rp = std::from_chars(num.data() + (num.size() && num[0] == '+' ? 1 : 0),
                                       num.data() + num.size(), p);
      auto        rq = std::from_chars(den.data(), den.data() + den.size(), q);
      if (num.empty() || den.empty() || rp.ec != std::errc() || rp.ptr != num.data() + num.size() ||
          rq.ec != std::errc() || rq.ptr != den.data() + den.size())
      {
        throw ConfigError(where + ": fractions must be integer 'p/q', got '" + s + "'");
      }
      if (q <= 0)
      {
        throw ConfigError(where + ": fraction denominator must be positive");
      }
      out = static_cast<double>(p) / static_cast<double>(q);
    }
  }
  else
  {
    throw ConfigError(where + " must be a number or a 'p/q' string");
  }
  if (!std::isfinite(out))
  {
    throw ConfigError(where + " must be finite");
  }
  return out;
}

Economy economy_from_json(Json const &block)
{
  EconomyParts p = parts_from_json(block, true);
  return Economy(p.buyers, p.cost, p.dist, p.val, p.phi(p.buyers), p.grid);
}

EconomyFamily family_from_json(Json const &block)
{
  EconomyParts  p = parts_from_json(block, false);
  EconomyFamily f;
  f.distribution = p.dist;
  f.valuation    = p.val;
  f.phi          = p.phi;
  f.cost         = p.cost;
  return f;
}

Json RunConfig::to_json() const
{
  Json j;
  j["command"] = command;
  if (seed)
  {
    j["seed"] = *seed;
  }
  if (!economy.is_null())
  {
    j["economy"] = economy;
  }
  j["params"] = params.is_null() ? Json::object() : params;
  return j;
}

RunConfig parse_config(std::string const &text)
{
  Json j;
  try
  {
    j = Json::parse(text);
  }
  catch (Json::parse_error const &e)
  {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("tool") && j.contains("config"))
  {
    Obj m(j, "manifest", {"tool", "version", "command", "seed", "config_sha256", "config", "artifacts"});
    if (m.str("tool") != "clubgood")
    {
      throw ConfigError("manifest was written by a different tool");
    }
    Json const &inner = m.get("config");
    if (m.has("config_sha256") && m.str("config_sha256") != sha256_hex(inner.dump()))
    {
      throw ConfigError("manifest config hash does not match its embedded config");
    }
    j = inner;
  }
  Obj       o(j, "config", {"command", "seed", "economy", "params"});
  RunConfig c;
  c.command = o.str("command");
  if (o.has("seed"))
  {
    Json const &s = o.get("seed");
    if (s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0))
    {
      c.seed = s.get<std::uint64_t>();
    }
    else
    {
      throw ConfigError("config.seed must be a nonnegative integer");
    }
  }
  if (o.has("economy"))
  {
    c.economy = o.get("economy");
  }
  c.params = o.has("params") ? o.get("params") : Json::object();
  if (!c.params.is_object())
  {
    throw ConfigError("config.params must be an object");
  }
  return c;
}

RunResult run(RunConfig const &config, RunOptions const &options)
{
  RunConfig effective = config;
  if (options.seed_override)
  {
    effective.seed = options.seed_override;
  }
  if (options.threads < 1)
  {
    throw ConfigError("threads must be at least 1");
  }
  Task task = plan(effective);

  std::error_code ec;
  std::filesystem::create_directories(options.out_dir, ec);
  if (ec || !std::filesystem::is_directory(options.out_dir))
  {
    throw ConfigError("cannot create output directory " + options.out_dir.string());
  }
  Context ctx;
  ctx.out_dir = options.out_dir;
  ctx.threads = options.threads;
  ctx.seed    = effective.seed.value_or(0);
  int code    = task(ctx);

  Json cfg = effective.to_json();
  Json manifest;
  manifest["tool"]          = "clubgood";
  manifest["version"]       = kVersion;
  manifest["command"]       = effective.command;
  manifest["seed"]          = effective.seed ? Json(*effective.seed) : Json();
  manifest["config_sha256"] = sha256_hex(cfg.dump());
  manifest["config"]        = cfg;
  manifest["artifacts"]     = ctx.artifacts;
  write_file(options.out_dir / "manifest.json", manifest.dump(2) + "\n");

  RunResult r;
  r.exit_code = code;
  r.summary   = ctx.summary.str();
  r.artifacts = ctx.artifacts;
  r.artifacts.push_back("manifest.json");
  return r;
}

std::string sha256_hex(std::string const &data)
{
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int  len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
  {
    throw std::runtime_error("SHA-256 failed");
  }
  static char const hex[] = "0123456789abcdef";
  std::string       out;
  for (unsigned int i = 0; i < len; ++i)
  {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

char const *version_string()
{
  return kVersion;
}

}  // namespace clubgood
