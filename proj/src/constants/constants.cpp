#include "maxcon/constants.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "maxcon/error.hpp"
#include "maxcon/helmholtz.hpp"

namespace maxcon::constants
{

CheckRecord make_check(std::string name, double lhs, double rhs)
{
  CheckRecord r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.pass = lhs <= rhs + 1e-9 * std::max(std::abs(lhs), std::abs(rhs));
  return r;
}

CheckRecord make_equality_check(std::string name, double a, double b, double rel_tol)
{
  return make_check(std::move(name), std::abs(a - b), rel_tol * std::abs(b));
}

CheckRecord make_skipped(std::string name, std::string reason)
{
  CheckRecord r;
  r.name = std::move(name);
  r.pass = true;
  r.skipped = std::move(reason);
  return r;
}

bool ConstantsReport::all_passed() const
{
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord &c) { return c.skipped || c.pass; });
}

const CheckRecord *ConstantsReport::find(const std::string &name) const
{
  for (const auto &c : checks)
  {
    if (c.name == name)
    {
      return &c;
    }
  }
  return nullptr;
}

SpectralResult poincare_spectrum(const ComplexOperators &ops, const EigenOptions &options)
{
  auto o = options;
  o.kernel = ops.grad_pair->kernel_hint() ? dual::KernelHandling::hint : dual::KernelHandling::supplied;
  return dual::min_positive_eigenvalue(*ops.grad_pair, {}, o);
}

double poincare_constant(const ComplexOperators &ops, const EigenOptions &options)
{
  return poincare_spectrum(ops, options).constant;
}

SpectralResult maxwell_div_spectrum(const ComplexOperators &ops, const EigenOptions &options)
{
  auto o = options;
  o.kernel = dual::KernelHandling::range_of_adjoint;
  return dual::min_positive_eigenvalue(ops.grad_pair->swapped(), {}, o);
}

double maxwell_div_constant(const ComplexOperators &ops, const EigenOptions &options)
{
  return maxwell_div_spectrum(ops, options).constant;
}

namespace
{

std::vector<dual::Deflation> harmonic_deflation(const ComplexOperators &ops)
{
  std::vector<dual::Deflation> out;
  auto basis = helmholtz::harmonic_basis(ops);
  if (!basis.empty())
  {
    out.push_back(dual::Deflation::remove_span(std::move(basis)));
  }
  return out;
}

}  // namespace

SpectralResult maxwell_rot_spectrum(const ComplexOperators &ops, bool unweighted_rhs, const EigenOptions &options)
{
  auto o = options;
  o.kernel = dual::KernelHandling::hint;
  const auto deflation = harmonic_deflation(ops);
  if (unweighted_rhs)
  {
    return dual::min_positive_eigenvalue(*ops.curl_pair, deflation, o);
  }
  const dual::DualPair weighted(ops.curl_pair->A(), ops.curl_pair->X(), dual::WeightedSpace{ops.face_inverse_eps},
                                ops.grad_pair);
  return dual::min_positive_eigenvalue(weighted, deflation, o);
}

double maxwell_rot_constant(const ComplexOperators &ops, bool unweighted_rhs, const EigenOptions &options)
{
  return maxwell_rot_spectrum(ops, unweighted_rhs, options).constant;
}

double maxwell_full_constant(double c_p, double c_m_rot_eps_id)
{
  return std::max(c_p, c_m_rot_eps_id);
}

double maxwell_full_constant(const ConstantsReport &report)
{
  return maxwell_full_constant(report.c_p, report.c_m_rot_eps_id);
}

double maxwell_full_constant_direct(const ComplexOperators &ops, std::size_t cap)
{
  const std::size_t n = ops.num_free_edges();
  if (n > cap)
  {
    throw DenseCapError(n, cap);
  }
  const auto rot = dense::to_dense(ops.curl_pair->A());
  const auto grad = dense::to_dense(ops.grad_pair->A());
  const auto W_e = dense::diagonal(ops.grad_pair->Y().weight);
  const auto W_f = dense::diagonal(ops.curl_pair->Y().weight);
  dense::ColVector inv_wn(grad.cols());
  for (Eigen::Index i = 0; i < inv_wn.size(); ++i)
  {
    inv_wn(i) = 1.0 / ops.grad_pair->X().weight[static_cast<std::size_t>(i)];
  }
  const dense::Matrix WeG = W_e * grad;
  const dense::Matrix K = rot.transpose() * W_f * rot + WeG * inv_wn.asDiagonal() * WeG.transpose();
  const auto eig = dense::dense_eigh(K, W_e, cap);
  const double top = eig.eigenvalues.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
  {
    if (eig.eigenvalues(i) > dual::dense_zero_threshold * top)
    {
      return 1.0 / std::sqrt(eig.eigenvalues(i));
    }
  }
  throw NoPositiveSpectrum();
}

SpectralResult maxwell_full_spectrum_iterative(const ComplexOperators &ops, const EigenOptions &options)
{
  const auto &grad = *ops.grad_pair;
  const auto &curl = *ops.curl_pair;
  const dual::DualPair stacked(sparse::vstack(curl.A(), grad.adjoint_matrix()), curl.X(),
                               dual::WeightedSpace{curl.Y().weight.concat(grad.X().weight)});
  auto o = options;
  o.kernel = dual::KernelHandling::supplied;
  return dual::min_positive_eigenvalue(stacked, harmonic_deflation(ops), o);
}

double payne_weinberger_bound(const derham::Grid3 &grid)
{
  return grid.diameter() / std::numbers::pi;
}

namespace
{

struct Reference
{
  double c_p = 0.0;
  double c_rot = 0.0;
};

}  // namespace

ConstantsReport verify_all(const derham::Grid3 &grid, const derham::BoundarySpec &bc,
                           const derham::MaterialField &material, const VerifyOptions &options)
{
  EigenOptions eo;
  eo.tol = options.tol;
  eo.maxit = options.maxit;
  eo.seed = options.seed;

  ConstantsReport report;
  report.grid = grid;
  report.bc = bc;
  report.eps_under = material.eps_under();
  report.eps_over = material.eps_over();
  report.eps_hat = material.eps_hat();
  report.pw_bound = payne_weinberger_bound(grid);
  report.solver.tol = options.tol;
  report.solver.seed = options.seed;
  std::size_t &iterations = report.solver.iterations;
  auto run = [&](const SpectralResult &r)
  {
    iterations += r.iterations;
    return r.constant;
  };

  const auto ops = derham::build_complex(grid, bc, material);
  report.harmonic_dimension = helmholtz::harmonic_basis(ops).size();
  report.c_p = run(poincare_spectrum(ops, eo));
  report.c_m_div = run(maxwell_div_spectrum(ops, eo));
  report.c_m_rot_eps_id = run(maxwell_rot_spectrum(ops, true, eo));
  report.c_m_rot = material.is_identity() ? report.c_m_rot_eps_id : run(maxwell_rot_spectrum(ops, false, eo));
  report.c_m_full = maxwell_full_constant(report);

  double full_reference = 0.0;
  if (ops.num_free_edges() <= options.dense_cap)
  {
    report.c_m_full_direct = maxwell_full_constant_direct(ops, options.dense_cap);
    full_reference = *report.c_m_full_direct;
  }
  else
  {
    full_reference = run(maxwell_full_spectrum_iterative(ops, eo));
  }

  // eps = id constants for the same boundary condition, and for the opposite one when the
  // boundary condition is full.
  const auto identity = derham::MaterialField::identity(grid);
  Reference same;
  if (material.is_identity())
  {
    same = {report.c_p, report.c_m_rot_eps_id};
  }
  else
  {
    const auto id_ops = derham::build_complex(grid, bc, identity);
    same = {run(poincare_spectrum(id_ops, eo)), run(maxwell_rot_spectrum(id_ops, true, eo))};
  }
  std::optional<double> c_p_dirichlet;
  std::optional<double> c_p_neumann;
  if (bc.full())
  {
    const auto other = derham::build_complex(grid, bc.swapped(), identity);
    const double c_other = run(poincare_spectrum(other, eo));
    c_p_dirichlet = bc.all_tangential() ? same.c_p : c_other;
    c_p_neumann = bc.all_tangential() ? c_other : same.c_p;
  }

  auto &checks = report.checks;
  const std::string needs_full = "requires Gamma_t = Gamma or Gamma_t = empty";
  checks.push_back(make_equality_check("dual_poincare_div", report.c_m_div, report.c_p, 1e-8));

  if (bc.full())
  {
    checks.push_back(make_check("friedrichs_below_poincare", *c_p_dirichlet, *c_p_neumann));
    checks.push_back(make_check("poincare_below_diameter_over_pi", *c_p_neumann, report.pw_bound));
    const std::size_t n_min = std::min({grid.n[0], grid.n[1], grid.n[2]});
    auto rot = make_check("rot_below_poincare", same.c_rot, *c_p_neumann * (1.0 + 1e-3));
    if (n_min < options.rot_check_min_n)
    {
      rot.skipped = "reported only: grid coarser than " + std::to_string(options.rot_check_min_n) + " cells per axis";
    }
    checks.push_back(rot);
  }
  else
  {
    checks.push_back(make_skipped("friedrichs_below_poincare", needs_full));
    checks.push_back(make_skipped("poincare_below_diameter_over_pi", needs_full));
    checks.push_back(make_skipped("rot_below_poincare", needs_full));
  }

  checks.push_back(make_equality_check("full_equals_max", full_reference, report.c_m_full, 1e-7));

  const double eu = report.eps_under;
  const double eo_ = report.eps_over;
  checks.push_back(make_check("poincare_eps_lower", same.c_p / eo_, report.c_p));
  checks.push_back(make_check("poincare_eps_upper", report.c_p, eu * same.c_p));
  checks.push_back(make_check("rot_eps_id_lower", same.c_rot / eu, report.c_m_rot_eps_id));
  checks.push_back(make_check("rot_eps_id_upper", report.c_m_rot_eps_id, eo_ * same.c_rot));
  checks.push_back(make_check("rot_eps_eps_lower", same.c_rot / (eu * eu), report.c_m_rot));
  checks.push_back(make_check("rot_eps_eps_upper", report.c_m_rot, eo_ * eo_ * same.c_rot));

  if (bc.full())
  {
    checks.push_back(make_check("full_eps_upper", report.c_m_full, report.eps_hat * *c_p_neumann));
    checks.push_back(make_check("full_eps_lower", same.c_p / eo_, report.c_m_full));
  }
  else
  {
    checks.push_back(make_skipped("full_eps_upper", needs_full));
    checks.push_back(make_skipped("full_eps_lower", needs_full));
  }
  return report;
}

}  // namespace maxcon::constants
