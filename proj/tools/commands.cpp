#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "maxcon/cli.hpp"

namespace maxcon::cli
{

namespace
{

void write_output(const std::optional<std::string> &path, const std::string &text, std::ostream &out)
{
  if (!path)
  {
    out << text;
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f || !(f << text))
  {
    throw ConfigError("cannot write '" + *path + "'");
  }
}

struct Common
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

RunConfig load(const Common &c)
{
  auto config = load_config(c.config);
  if (c.seed)
  {
    config.solver.seed = *c.seed;
  }
  return config;
}

int cmd_constants(const Common &c, std::ostream &out)
{
  const auto config = load(c);
  const auto grid = config.grid();
  const auto report = constants::verify_all(grid, config.bc, config.material(grid), config.verify_options());
  const auto text = dump_report(report_to_json(report, utc_timestamp()));
  write_output(c.out ? c.out : config.outputs.json, text, out);
  if (config.outputs.csv)
  {
    write_output(config.outputs.csv, checks_csv(report), out);
  }
  return report.all_passed() ? ok : check_failure;
}

int cmd_converge(const Common &c, const std::vector<std::size_t> &levels, std::ostream &out)
{
  const auto config = load(c);
  const auto rows = convergence_study(config, levels.empty() ? config.levels : levels);
  write_output(c.out ? c.out : config.outputs.csv, convergence_csv(rows), out);
  return ok;
}

int cmd_helmholtz(const Common &c, std::size_t samples, double tol, std::ostream &out)
{
  const auto config = load(c);
  const auto summary = helmholtz_study(config, samples, tol);
  write_output(c.out ? c.out : config.outputs.json, helmholtz_to_json(summary).dump(2) + "\n", out);
  return summary.pass ? ok : check_failure;
}

int cmd_selftest(const SelftestOptions &options, std::ostream &out)
{
  bool pass = true;
  for (const auto &r : run_selftest(options))
  {
    out << format_suite(r) << "\n";
    pass = pass && r.pass;
  }
  return pass ? ok : check_failure;
}

}  // namespace

int run(int argc, char **argv, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Poincare, Friedrichs and Maxwell constants of boxes on a staggered grid", "maxcon"};
  app.footer(config_help());
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App *sub)
  {
    sub->add_option("--config", common.config, "JSON config file")->required();
    sub->add_option("--seed", common.seed, "override solver.seed");
    sub->add_option("--out", common.out, "output path (overrides the config outputs)");
  };

  auto *constants_cmd = app.add_subcommand("constants", "compute all constants and run the check suite");
  add_common(constants_cmd);

  std::vector<std::size_t> levels;
  auto *converge_cmd = app.add_subcommand("converge", "refinement study, CSV n,h,c_p,c_m_rot,c_m_full");
  add_common(converge_cmd);
  converge_cmd->add_option("--levels", levels, "ascending cells per axis, e.g. 4,8,16")->delimiter(',');

  std::size_t samples = 20;
  double helmholtz_tol = 1e-8;
  auto *helmholtz_cmd = app.add_subcommand("helmholtz", "decompose random edge fields and check residuals");
  add_common(helmholtz_cmd);
  helmholtz_cmd->add_option("--samples", samples, "number of random fields")->capture_default_str();
  helmholtz_cmd->add_option("--tol", helmholtz_tol, "decomposition tolerance")->capture_default_str();

  SelftestOptions selftest;
  auto *selftest_cmd = app.add_subcommand("selftest", "randomized operator-pair and complex identity suites");
  selftest_cmd->add_option("--seed", selftest.seed, "suite seed")->capture_default_str();
  selftest_cmd->add_option("--pairs", selftest.random_pairs, "random pairs in the dual-constant suite")
      ->capture_default_str();
#ifdef MAXCON_FAULT_HOOKS
  selftest_cmd->add_flag("--inject-fault", selftest.inject_fault)->group("");
#endif

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : config_error;
  }

  try
  {
    if (*constants_cmd)
    {
      return cmd_constants(common, out);
    }
    if (*converge_cmd)
    {
      return cmd_converge(common, levels, out);
    }
    if (*helmholtz_cmd)
    {
      return cmd_helmholtz(common, samples, helmholtz_tol, out);
    }
    return cmd_selftest(selftest, out);
  }
  catch (const ValidationError &e)
  {
    err << "maxcon: configuration error: " << e.what() << "\n";
    return config_error;
  }
  catch (const std::exception &e)
  {
    err << "maxcon: solver failure: " << e.what() << "\n";
    return solver_failure;
  }
}

}  // namespace maxcon::cli
