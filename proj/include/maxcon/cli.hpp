#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "maxcon/constants.hpp"
#include "maxcon/error.hpp"
#include "maxcon/material.hpp"

namespace maxcon::cli
{

// Process exit statuses.
enum Status : int
{
  ok = 0,
  check_failure = 1,
  config_error = 2,
  solver_failure = 3
};

class ConfigError : public ValidationError
{
public:
  using ValidationError::ValidationError;
};

struct EpsSpec
{
  enum class Kind
  {
    identity,
    scalar,
    diag,
    file
  };
  Kind kind = Kind::identity;
  double scalar = 1.0;
  derham::Diag3 diag{1.0, 1.0, 1.0};
  std::string file;
};

struct SolverConfig
{
  double tol = 1e-8;
  std::size_t maxit = 10000;
  std::uint64_t seed = dual::default_seed;
  std::size_t dense_cap = dense::default_dense_cap;
};

struct OutputConfig
{
  std::optional<std::string> json;
  std::optional<std::string> csv;
};

struct RunConfig
{
  derham::Index3 n{8, 8, 8};
  std::array<double, 3> L{1.0, 1.0, 1.0};
  derham::BoundarySpec bc = derham::BoundarySpec::dirichlet();
  EpsSpec eps;
  SolverConfig solver;
  OutputConfig outputs;
  std::vector<std::size_t> levels;

  derham::Grid3 grid() const;
  derham::MaterialField material(const derham::Grid3 &grid) const;
  constants::VerifyOptions verify_options() const;
};

// Text of the config schema with defaults, shown by --help.
std::string config_help();

// Unknown keys and malformed values raise ConfigError. Relative eps file paths resolve against base_dir.
RunConfig parse_config(const nlohmann::json &j, const std::string &base_dir = "");
RunConfig load_config(const std::string &path);

// Report JSON. Keys are sorted; the timestamp is the only non-deterministic field.
nlohmann::json report_to_json(const constants::ConstantsReport &report, const std::string &timestamp);
constants::ConstantsReport report_from_json(const nlohmann::json &j, std::string *timestamp = nullptr);
std::string dump_report(const nlohmann::json &j);
std::string utc_timestamp();

std::string checks_csv(const constants::ConstantsReport &report);

struct LevelRow
{
  std::size_t n = 0;
  double h = 0.0;
  double c_p = 0.0;
  double c_m_rot = 0.0;
  double c_m_full = 0.0;
};

// Rows for ascending levels; each level uses n cells on every axis.
std::vector<LevelRow> convergence_study(const RunConfig &config, const std::vector<std::size_t> &levels);
// Second-order Richardson limit from the last two rows.
LevelRow richardson(const LevelRow &coarse, const LevelRow &fine);
std::string convergence_csv(const std::vector<LevelRow> &rows);

struct SuiteResult
{
  std::string name;
  std::size_t cases = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::string failing_case;  // first failing seed or mask
};

struct SelftestOptions
{
  std::uint64_t seed = 7;
  std::size_t random_pairs = 50;
  bool inject_fault = false;
};

std::vector<SuiteResult> run_selftest(const SelftestOptions &options);
std::string format_suite(const SuiteResult &r);

struct HelmholtzSummary
{
  std::size_t samples = 0;
  std::size_t harmonic_dimension = 0;
  double max_reconstruction = 0.0;
  double max_orthogonality = 0.0;
  double min_estimate_slack = 0.0;  // relative
  bool pass = true;
};

HelmholtzSummary helmholtz_study(const RunConfig &config, std::size_t samples, double tol);
nlohmann::json helmholtz_to_json(const HelmholtzSummary &s);

// Entry point; returns the process status.
int run(int argc, char **argv, std::ostream &out, std::ostream &err);

}  // namespace maxcon::cli
