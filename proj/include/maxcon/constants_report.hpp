#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "maxcon/grid.hpp"

namespace maxcon::constants
{

// lhs <= rhs up to 1e-9 relative. Equalities are recorded as |a - b| <= tol |b|.
struct CheckRecord
{
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool pass = false;
  std::optional<std::string> skipped;  // reason; skipped records never fail
};

CheckRecord make_check(std::string name, double lhs, double rhs);
CheckRecord make_equality_check(std::string name, double a, double b, double rel_tol);
CheckRecord make_skipped(std::string name, std::string reason);

struct SolverStats
{
  double tol = 1e-8;
  std::size_t iterations = 0;  // outer inverse-iteration steps over all solves
  std::uint64_t seed = 0;
};

struct ConstantsReport
{
  derham::Grid3 grid;
  derham::BoundarySpec bc;

  double c_p = 0.0;             // ||u|| <= c_p ||grad u||_eps on the Gamma_t side
  double c_m_div = 0.0;         // ||E||_eps <= c ||div eps E|| on gradients (Gamma_n side)
  double c_m_rot = 0.0;         // ||E||_eps <= c ||rot E||_{eps^-1}
  double c_m_rot_eps_id = 0.0;  // ||E||_eps <= c ||rot E||
  double c_m_full = 0.0;        // max{c_p, c_m_rot_eps_id}
  std::optional<double> c_m_full_direct;

  double eps_under = 1.0;
  double eps_over = 1.0;
  double eps_hat = 1.0;
  double pw_bound = 0.0;  // diameter / pi
  std::size_t harmonic_dimension = 0;

  std::vector<CheckRecord> checks;
  SolverStats solver;

  // Every non-skipped check passed.
  bool all_passed() const;
  const CheckRecord *find(const std::string &name) const;
};

}  // namespace maxcon::constants
