#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "maxcon/cli.hpp"

namespace maxcon::cli
{

using nlohmann::json;

namespace
{

void reject_unknown(const json &j, const std::string &where, const std::set<std::string> &allowed)
{
  if (!j.is_object())
  {
    throw ConfigError(where + " must be an object");
  }
  for (const auto &[key, value] : j.items())
  {
    if (!allowed.count(key))
    {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double positive_number(const json &j, const std::string &where)
{
  if (!j.is_number())
  {
    throw ConfigError(where + " must be a number");
  }
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v))
  {
    throw ConfigError(where + " must be positive and finite");
  }
  return v;
}

std::size_t count(const json &j, const std::string &where, std::size_t min = 1)
{
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min))
  {
    throw ConfigError(where + " must be an integer >= " + std::to_string(min));
  }
  return j.get<std::size_t>();
}

template <class T, class F>
std::array<T, 3> triple(const json &j, const std::string &where, F element)
{
  if (j.is_array())
  {
    if (j.size() != 3)
    {
      throw ConfigError(where + " must have 3 entries");
    }
    return {element(j[0], where + "[0]"), element(j[1], where + "[1]"), element(j[2], where + "[2]")};
  }
  const T v = element(j, where);
  return {v, v, v};
}

derham::BoundarySpec parse_bc(const json &j)
{
  if (j.is_string())
  {
    const auto s = j.get<std::string>();
    if (s == "dirichlet")
    {
      return derham::BoundarySpec::dirichlet();
    }
    if (s == "neumann")
    {
      return derham::BoundarySpec::neumann();
    }
    throw ConfigError("bc must be 'dirichlet', 'neumann' or 6 face labels, got '" + s + "'");
  }
  if (!j.is_array() || j.size() != 6)
  {
    throw ConfigError("bc must be 'dirichlet', 'neumann' or 6 face labels");
  }
  std::vector<std::string> labels;
  for (const auto &e : j)
  {
    if (!e.is_string())
    {
      throw ConfigError("bc labels must be strings");
    }
    labels.push_back(e.get<std::string>());
  }
  try
  {
    return derham::BoundarySpec::parse(labels);
  }
  catch (const ValidationError &e)
  {
    throw ConfigError(std::string("bc: ") + e.what());
  }
}

EpsSpec parse_eps(const json &j, const std::string &base_dir)
{
  reject_unknown(j, "eps", {"scalar", "diag", "file"});
  if (j.size() != 1)
  {
    throw ConfigError("eps needs exactly one of scalar, diag, file");
  }
  EpsSpec e;
  if (j.contains("scalar"))
  {
    e.kind = EpsSpec::Kind::scalar;
    e.scalar = positive_number(j["scalar"], "eps.scalar");
  }
  else if (j.contains("diag"))
  {
    e.kind = EpsSpec::Kind::diag;
    if (!j["diag"].is_array())
    {
      throw ConfigError("eps.diag must be an array of 3 numbers");
    }
    e.diag = triple<double>(j["diag"], "eps.diag", positive_number);
  }
  else
  {
    if (!j["file"].is_string())
    {
      throw ConfigError("eps.file must be a path string");
    }
    std::filesystem::path p = j["file"].get<std::string>();
    if (p.is_relative() && !base_dir.empty())
    {
      p = std::filesystem::path(base_dir) / p;
    }
    e.kind = EpsSpec::Kind::file;
    e.file = p.string();
  }
  return e;
}

}  // namespace

derham::Grid3 RunConfig::grid() const
{
  return derham::build_grid(n, L);
}

derham::MaterialField RunConfig::material(const derham::Grid3 &g) const
{
  switch (eps.kind)
  {
  case EpsSpec::Kind::scalar:
    return derham::MaterialField::scalar(g, eps.scalar);
  case EpsSpec::Kind::diag:
    return derham::MaterialField::diagonal(g, eps.diag);
  case EpsSpec::Kind::file:
    return derham::MaterialField::from_csv(g, eps.file);
  case EpsSpec::Kind::identity:
    break;
  }
  return derham::MaterialField::identity(g);
}

constants::VerifyOptions RunConfig::verify_options() const
{
  constants::VerifyOptions o;
  o.tol = solver.tol;
  o.maxit = solver.maxit;
  o.seed = solver.seed;
  o.dense_cap = solver.dense_cap;
  return o;
}

std::string config_help()
{
  return R"(Config file (JSON, unknown keys rejected):
  grid.n           cells per axis, integer or [nx, ny, nz] (required, each >= 2)
  grid.L           box lengths, number or [Lx, Ly, Lz] (default 1)
  bc               "dirichlet" (all tangential), "neumann" (all normal), or six
                   labels "tangential"/"normal" for faces x0 x1 y0 y1 z0 z1
                   (required)
  eps.scalar       eps = value * id
  eps.diag         eps = diag(a, b, c) on every cell
  eps.file         CSV rows i,j,k,eps1,eps2,eps3 (one per cell); relative paths
                   resolve against the config directory. Default: eps = id
  solver.tol       eigenvalue tolerance (default 1e-8)
  solver.maxit     outer iterations (default 10000)
  solver.seed      start-vector seed (default 3735928559)
  solver.dense_cap largest dense eigenproblem (default 2000)
  outputs.json     report path (default stdout)
  outputs.csv      CSV path: check table for 'constants', level table for 'converge'
  levels           ascending cells-per-axis list for 'converge'
Exit status: 0 ok, 1 check or suite failure, 2 configuration error, 3 solver failure.)";
}

RunConfig parse_config(const json &j, const std::string &base_dir)
{
  reject_unknown(j, "config", {"grid", "bc", "eps", "solver", "outputs", "levels"});
  RunConfig c;
  if (!j.contains("grid"))
  {
    throw ConfigError("missing key 'grid'");
  }
  if (!j.contains("bc"))
  {
    throw ConfigError("missing key 'bc'");
  }
  const auto &g = j["grid"];
  reject_unknown(g, "grid", {"n", "L"});
  if (!g.contains("n"))
  {
    throw ConfigError("missing key 'grid.n'");
  }
  c.n = triple<std::size_t>(g["n"], "grid.n", [](const json &e, const std::string &w) { return count(e, w, 2); });
  if (g.contains("L"))
  {
    c.L = triple<double>(g["L"], "grid.L", positive_number);
  }
  c.bc = parse_bc(j["bc"]);
  if (j.contains("eps"))
  {
    c.eps = parse_eps(j["eps"], base_dir);
  }
  if (j.contains("solver"))
  {
    const auto &s = j["solver"];
    reject_unknown(s, "solver", {"tol", "maxit", "seed", "dense_cap"});
    if (s.contains("tol"))
    {
      c.solver.tol = positive_number(s["tol"], "solver.tol");
    }
    if (s.contains("maxit"))
    {
      c.solver.maxit = count(s["maxit"], "solver.maxit");
    }
    if (s.contains("seed"))
    {
      if (!s["seed"].is_number_unsigned())
      {
        throw ConfigError("solver.seed must be a non-negative integer");
      }
      c.solver.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("dense_cap"))
    {
      c.solver.dense_cap = count(s["dense_cap"], "solver.dense_cap", 0);
    }
  }
  if (j.contains("outputs"))
  {
    const auto &o = j["outputs"];
    reject_unknown(o, "outputs", {"json", "csv"});
    for (const char *key : {"json", "csv"})
    {
      if (o.contains(key))
      {
        if (!o[key].is_string())
        {
          throw ConfigError(std::string("outputs.") + key + " must be a path string");
        }
        (key[0] == 'j' ? c.outputs.json : c.outputs.csv) = o[key].get<std::string>();
      }
    }
  }
  if (j.contains("levels"))
  {
    if (!j["levels"].is_array())
    {
      throw ConfigError("levels must be an array of integers");
    }
    for (const auto &e : j["levels"])
    {
      c.levels.push_back(count(e, "levels", 2));
    }
  }
  return c;
}

RunConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config '" + path + "'");
  }
  json j;
  try
  {
    j = json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j, std::filesystem::path(path).parent_path().string());
}

}  // namespace maxcon::cli
