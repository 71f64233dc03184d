#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <random>

#include "maxcon/cli.hpp"
#include "maxcon/helmholtz.hpp"

namespace maxcon::cli
{

using nlohmann::json;

namespace
{

std::string num(double v)
{
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

json optional_number(const std::optional<double> &v)
{
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json report_to_json(const constants::ConstantsReport &r, const std::string &timestamp)
{
  json j;
  j["grid"] = {{"n", r.grid.n}, {"L", r.grid.L}, {"diameter", r.grid.diameter()}};
  j["bc"] = r.bc.labels();
  j["eps"] = {{"under", r.eps_under}, {"over", r.eps_over}, {"hat", r.eps_hat}};
  j["constants"] = {{"c_p", r.c_p},
                    {"c_m_div", r.c_m_div},
                    {"c_m_rot", r.c_m_rot},
                    {"c_m_rot_eps_id", r.c_m_rot_eps_id},
                    {"c_m_full", r.c_m_full},
                    {"c_m_full_direct", optional_number(r.c_m_full_direct)}};
  j["pw_bound"] = r.pw_bound;
  j["harmonic_dimension"] = r.harmonic_dimension;
  j["checks"] = json::array();
  for (const auto &c : r.checks)
  {
    j["checks"].push_back({{"name", c.name},
                           {"lhs", c.lhs},
                           {"rhs", c.rhs},
                           {"margin", c.margin},
                           {"pass", c.pass},
                           {"skipped", c.skipped ? json(*c.skipped) : json(nullptr)}});
  }
  j["solver"] = {{"tol", r.solver.tol}, {"iterations", r.solver.iterations}, {"seed", r.solver.seed}};
  j["all_passed"] = r.all_passed();
  j["timestamp"] = timestamp;
  return j;
}

constants::ConstantsReport report_from_json(const json &j, std::string *timestamp)
{
  try
  {
    constants::ConstantsReport r;
    r.grid = derham::build_grid(j.at("grid").at("n").get<derham::Index3>(),
                                j.at("grid").at("L").get<std::array<double, 3>>());
    r.bc = derham::BoundarySpec::parse(j.at("bc").get<std::vector<std::string>>());
    r.eps_under = j.at("eps").at("under");
    r.eps_over = j.at("eps").at("over");
    r.eps_hat = j.at("eps").at("hat");
    const auto &c = j.at("constants");
    r.c_p = c.at("c_p");
    r.c_m_div = c.at("c_m_div");
    r.c_m_rot = c.at("c_m_rot");
    r.c_m_rot_eps_id = c.at("c_m_rot_eps_id");
    r.c_m_full = c.at("c_m_full");
    if (!c.at("c_m_full_direct").is_null())
    {
      r.c_m_full_direct = c.at("c_m_full_direct").get<double>();
    }
    r.pw_bound = j.at("pw_bound");
    r.harmonic_dimension = j.at("harmonic_dimension");
    for (const auto &e : j.at("checks"))
    {
      constants::CheckRecord rec;
      rec.name = e.at("name");
      rec.lhs = e.at("lhs");
      rec.rhs = e.at("rhs");
      rec.margin = e.at("margin");
      rec.pass = e.at("pass");
      if (!e.at("skipped").is_null())
      {
        rec.skipped = e.at("skipped").get<std::string>();
      }
      r.checks.push_back(std::move(rec));
    }
    r.solver.tol = j.at("solver").at("tol");
    r.solver.iterations = j.at("solver").at("iterations");
    r.solver.seed = j.at("solver").at("seed");
    if (timestamp)
    {
      *timestamp = j.at("timestamp");
    }
    return r;
  }
  catch (const json::exception &e)
  {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

std::string dump_report(const json &j)
{
  return j.dump(2) + "\n";
}

std::string utc_timestamp()
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string checks_csv(const constants::ConstantsReport &r)
{
  std::string out = "name,lhs,rhs,margin,pass,skipped\n";
  for (const auto &c : r.checks)
  {
    out += c.name + "," + num(c.lhs) + "," + num(c.rhs) + "," + num(c.margin) + "," + (c.pass ? "true" : "false") +
           "," + (c.skipped ? "\"" + *c.skipped + "\"" : "") + "\n";
  }
  return out;
}

std::vector<LevelRow> convergence_study(const RunConfig &config, const std::vector<std::size_t> &levels)
{
  if (levels.empty())
  {
    throw ConfigError("converge needs at least one level");
  }
  for (std::size_t i = 1; i < levels.size(); ++i)
  {
    if (levels[i] <= levels[i - 1])
    {
      throw ConfigError("levels must be strictly ascending");
    }
  }
  if (config.eps.kind == EpsSpec::Kind::file)
  {
    throw ConfigError("converge needs a grid-independent eps (scalar or diag)");
  }
  dual::EigenOptions eo;
  eo.tol = config.solver.tol;
  eo.maxit = config.solver.maxit;
  eo.seed = config.solver.seed;

  std::vector<LevelRow> rows;
  for (std::size_t n : levels)
  {
    const auto grid = derham::build_grid({n, n, n}, config.L);
    const auto ops = derham::build_complex(grid, config.bc, config.material(grid));
    LevelRow row;
    row.n = n;
    const auto h = grid.h();
    row.h = std::max({h[0], h[1], h[2]});
    row.c_p = constants::poincare_constant(ops, eo);
    const double rot_id = constants::maxwell_rot_constant(ops, true, eo);
    row.c_m_rot = config.material(grid).is_identity() ? rot_id : constants::maxwell_rot_constant(ops, false, eo);
    row.c_m_full = constants::maxwell_full_constant(row.c_p, rot_id);
    rows.push_back(row);
  }
  return rows;
}

LevelRow richardson(const LevelRow &coarse, const LevelRow &fine)
{
  const double r = coarse.h / fine.h;
  const double f = 1.0 / (r * r - 1.0);
  LevelRow out;
  out.c_p = fine.c_p + (fine.c_p - coarse.c_p) * f;
  out.c_m_rot = fine.c_m_rot + (fine.c_m_rot - coarse.c_m_rot) * f;
  out.c_m_full = fine.c_m_full + (fine.c_m_full - coarse.c_m_full) * f;
  return out;
}

std::string convergence_csv(const std::vector<LevelRow> &rows)
{
  std::string out = "n,h,c_p,c_m_rot,c_m_full\n";
  for (const auto &r : rows)
  {
    out += std::to_string(r.n) + "," + num(r.h) + "," + num(r.c_p) + "," + num(r.c_m_rot) + "," + num(r.c_m_full) + "\n";
  }
  if (rows.size() >= 2)
  {
    const auto lim = richardson(rows[rows.size() - 2], rows.back());
    out += "richardson,0," + num(lim.c_p) + "," + num(lim.c_m_rot) + "," + num(lim.c_m_full) + "\n";
  }
  return out;
}

HelmholtzSummary helmholtz_study(const RunConfig &config, std::size_t samples, double tol)
{
  const auto grid = config.grid();
  const auto ops = derham::build_complex(grid, config.bc, config.material(grid));
  dual::EigenOptions eo;
  eo.tol = config.solver.tol;
  eo.maxit = config.solver.maxit;
  eo.seed = config.solver.seed;
  constants::ConstantsReport known;
  known.c_p = constants::poincare_constant(ops, eo);
  known.c_m_rot_eps_id = constants::maxwell_rot_constant(ops, true, eo);

  HelmholtzSummary s;
  s.samples = samples;
  s.harmonic_dimension = helmholtz::harmonic_basis(ops).size();
  s.min_estimate_slack = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(config.solver.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t k = 0; k < samples; ++k)
  {
    sparse::Vector E(ops.num_free_edges());
    for (auto &e : E)
    {
      e = u(rng);
    }
    const auto parts = helmholtz::decompose(E, ops, tol);
    const auto res = helmholtz::residuals(E, parts, ops);
    s.max_reconstruction = std::max(s.max_reconstruction, res.reconstruction);
    s.max_orthogonality = std::max(s.max_orthogonality, res.max_orthogonality());
    const auto est = helmholtz::maxwell_estimate_check(E, ops, known);
    s.min_estimate_slack = std::min(s.min_estimate_slack, est.scale > 0.0 ? est.slack / est.scale : 0.0);
    s.pass = s.pass && est.pass;
  }
  if (samples == 0)
  {
    s.min_estimate_slack = 0.0;
  }
  s.pass = s.pass && s.max_reconstruction <= 10 * tol && s.max_orthogonality <= 10 * tol;
  return s;
}

json helmholtz_to_json(const HelmholtzSummary &s)
{
  return {{"samples", s.samples},
          {"harmonic_dimension", s.harmonic_dimension},
          {"max_reconstruction", s.max_reconstruction},
          {"max_orthogonality", s.max_orthogonality},
          {"min_estimate_slack", s.min_estimate_slack},
          {"pass", s.pass}};
}

}  // namespace maxcon::cli
