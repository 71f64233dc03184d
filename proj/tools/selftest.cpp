#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "maxcon/cli.hpp"

namespace maxcon::cli
{

namespace
{

using dual::DualPair;
using dual::WeightedSpace;
using sparse::DiagonalWeight;
using sparse::SparseMatrix;

DualPair random_pair(std::mt19937_64 &rng, std::size_t max_dim)
{
  const std::size_t rows = 2 + rng() % (max_dim - 1);
  const std::size_t cols = 2 + rng() % (max_dim - 1);
  const double density = 0.15 + 0.15 * double(rng() % 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  std::uniform_real_distribution<double> w(0.5, 2.0);
  std::vector<sparse::Triplet> t;
  for (std::size_t r = 0; r < rows; ++r)
  {
    for (std::size_t c = 0; c < cols; ++c)
    {
      if (u(rng) < density)
      {
        t.push_back({r, c, v(rng)});
      }
    }
  }
  // One guaranteed entry keeps the pair from being zero.
  t.push_back({rng() % rows, rng() % cols, 1.0});
  sparse::Vector wx(cols);
  sparse::Vector wy(rows);
  for (auto &x : wx)
  {
    x = w(rng);
  }
  for (auto &y : wy)
  {
    y = w(rng);
  }
  return DualPair(SparseMatrix::from_triplets(rows, cols, std::move(t)), WeightedSpace{DiagonalWeight(std::move(wx))},
                  WeightedSpace{DiagonalWeight(std::move(wy))});
}

dual::EigenOptions tight()
{
  dual::EigenOptions o;
  o.tol = 1e-12;
  o.kernel = dual::KernelHandling::range_of_adjoint;
  return o;
}

// max(|c_A - c_A*|, |c_A - c_dense|) / c_A
double dual_deviation(const DualPair &p)
{
  const double a = dual::constant_cA(p, {}, tight());
  const double b = dual::constant_cA(p.swapped(), {}, tight());
  const double d = dual::dense_constant(p);
  return std::max(std::abs(a - b), std::abs(a - d)) / a;
}

void record(SuiteResult &s, double deviation, const std::string &label)
{
  ++s.cases;
  if (!(deviation <= s.tolerance))
  {
    if (s.pass)
    {
      s.failing_case = label;
    }
    s.pass = false;
  }
  if (std::isnan(deviation))
  {
    s.max_deviation = deviation;
  }
  else if (!std::isnan(s.max_deviation))
  {
    s.max_deviation = std::max(s.max_deviation, deviation);
  }
}

double max_abs_entry(const SparseMatrix &M)
{
  return M.nnz() == 0 ? 0.0 : M.max_abs();
}

}  // namespace

std::vector<SuiteResult> run_selftest(const SelftestOptions &options)
{
  std::vector<SuiteResult> out;

  SuiteResult random_dual{"dual_constants_random", 0, 0.0, 1e-9, true, {}};
  for (std::size_t k = 0; k < options.random_pairs; ++k)
  {
    const std::uint64_t seed = options.seed + k;
    std::mt19937_64 rng(seed);
    record(random_dual, dual_deviation(random_pair(rng, 40)), "seed " + std::to_string(seed));
  }
  out.push_back(random_dual);

  SuiteResult spectra{"spectra_match", 0, 0.0, 1e-9, true, {}};
  SuiteResult symmetry{"block_symmetry", 0, 0.0, 1e-10, true, {}};
  SuiteResult square{"block_square", 0, 0.0, 1e-9, true, {}};
  for (std::size_t k = 0; k < 20; ++k)
  {
    const std::uint64_t seed = options.seed + 1000 + k;
    std::mt19937_64 rng(seed);
    auto p = std::make_shared<const DualPair>(random_pair(rng, 30));
    const auto s = dual::spectra_match_check(*p);
    record(spectra, s.counts_match ? s.max_deviation : HUGE_VAL, "seed " + std::to_string(seed));
    const auto b = dual::block_spectrum_check(dual::BlockMaxwellOperator(p));
    record(symmetry, b.symmetry_deviation, "seed " + std::to_string(seed));
    record(square, b.counts_match ? b.square_deviation : HUGE_VAL, "seed " + std::to_string(seed));
  }
  out.push_back(spectra);
  out.push_back(symmetry);
  out.push_back(square);

  const auto grid = derham::build_grid({2, 2, 2}, {1.0, 1.0, 1.0});
  const auto material = derham::MaterialField::random(grid, 0.5, 2.0, options.seed);
  derham::AssemblyOptions assembly;
  assembly.corrupt_curl_stencil = options.inject_fault;
  SuiteResult exact{"exact_sequence", 0, 0.0, 0.0, true, {}};
  SuiteResult adjoint{"adjointness", 0, 0.0, 1e-12, true, {}};
  SuiteResult derham_dual{"dual_constants_derham", 0, 0.0, 1e-9, true, {}};
  for (unsigned mask = 0; mask < 64; ++mask)
  {
    const auto ops = derham::build_complex(grid, derham::BoundarySpec::from_mask(mask), material, assembly);
    const std::string label = "mask " + std::to_string(mask);
    const double seq = std::max(max_abs_entry(sparse::multiply(ops.curl_pair->A(), ops.grad_pair->A())),
                                max_abs_entry(sparse::multiply(ops.div_pair->A(), ops.curl_pair->A())));
    record(exact, seq, label);
    record(adjoint, derham::check_adjointness(ops, 20, options.seed + mask), label);
    for (const auto *p : {ops.grad_pair.get(), ops.curl_pair.get(), ops.div_pair.get()})
    {
      if (p->A().pruned().nnz() > 0)
      {
        record(derham_dual, dual_deviation(*p), label);
      }
    }
  }
  out.push_back(exact);
  out.push_back(adjoint);
  out.push_back(derham_dual);
  return out;
}

std::string format_suite(const SuiteResult &r)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %-22s cases=%-4zu max_deviation=%.3e tolerance=%.1e", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.cases, r.max_deviation, r.tolerance);
  std::string s = buf;
  if (!r.pass)
  {
    s += " first_failure=" + r.failing_case;
  }
  return s;
}

}  // namespace maxcon::cli
