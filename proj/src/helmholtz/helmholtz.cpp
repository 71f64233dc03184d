#include "maxcon/helmholtz.hpp"

#include <algorithm>
#include <cmath>

#include "maxcon/cg.hpp"
#include "maxcon/error.hpp"

namespace maxcon::helmholtz
{

namespace
{

// x = argmin ||B x - v||_W via CG on B^T W B, allowed to stop at the rounding floor.
sparse::CgResult weighted_least_squares(const SparseMatrix &B, const DiagonalWeight &W, std::span<const double> v,
                                        double rtol)
{
  Vector Wv(v.size());
  W.apply(v, Wv);
  Vector rhs(B.cols());
  sparse::spmv_transpose(B, Wv, rhs);
  Vector tmp(B.rows());
  auto normal = [&](std::span<const double> z, std::span<double> out)
  {
    sparse::spmv(B, z, tmp);
    for (std::size_t i = 0; i < tmp.size(); ++i)
    {
      tmp[i] *= W[i];
    }
    sparse::spmv_transpose(B, tmp, out);
  };
  const double atol = rtol * B.frobenius_norm() * sparse::norm2(Wv);
  return sparse::cg_solve(normal, rhs, rtol, 100000, true, atol);
}

double inner_rtol(double tol)
{
  return std::max(1e-3 * tol, 1e-14);
}

void check_size(const Vector &E, const derham::ComplexOperators &ops)
{
  if (E.size() != ops.num_free_edges())
  {
    throw ValidationError("edge field has " + std::to_string(E.size()) + " entries, edge space has " +
                          std::to_string(ops.num_free_edges()));
  }
}

}  // namespace

double DecompositionResiduals::max_orthogonality() const
{
  return std::max({grad_harmonic, grad_curl, harmonic_curl});
}

HelmholtzParts decompose(const Vector &E, const derham::ComplexOperators &ops, double tol)
{
  check_size(E, ops);
  if (!(tol > 0.0))
  {
    throw ValidationError("decomposition tolerance must be positive");
  }
  const auto &W_e = ops.grad_pair->Y().weight;
  const auto &W_n = ops.grad_pair->X().weight;
  const auto &grad = ops.grad_pair->A();
  HelmholtzParts parts;

  auto u = weighted_least_squares(grad, W_e, E, inner_rtol(tol));
  if (ops.gamma_t_components == 0)
  {
    double mass = 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < u.x.size(); ++i)
    {
      mass += W_n[i];
      mean += W_n[i] * u.x[i];
    }
    mean /= mass;
    for (auto &v : u.x)
    {
      v -= mean;
    }
  }
  parts.grad_part = sparse::spmv(grad, u.x);
  parts.scalar_potential = std::move(u.x);

  const auto &rot_star = ops.curl_pair->adjoint_matrix();
  auto F = weighted_least_squares(rot_star, W_e, E, inner_rtol(tol));
  parts.curl_part = sparse::spmv(rot_star, F.x);
  parts.vector_potential = std::move(F.x);
  parts.iterations = u.iterations + F.iterations;

  parts.harmonic_part = E;
  sparse::axpy(-1.0, parts.grad_part, parts.harmonic_part);
  sparse::axpy(-1.0, parts.curl_part, parts.harmonic_part);
  return parts;
}

DecompositionResiduals residuals(const Vector &E, const HelmholtzParts &parts, const derham::ComplexOperators &ops)
{
  check_size(E, ops);
  const auto &W = ops.grad_pair->Y().weight;
  const double norm = W.norm(E);
  DecompositionResiduals out;
  if (norm == 0.0)
  {
    return out;
  }
  Vector r = E;
  sparse::axpy(-1.0, parts.grad_part, r);
  sparse::axpy(-1.0, parts.harmonic_part, r);
  sparse::axpy(-1.0, parts.curl_part, r);
  const double sq = norm * norm;
  out.reconstruction = W.norm(r) / norm;
  out.grad_harmonic = std::abs(W.dot(parts.grad_part, parts.harmonic_part)) / sq;
  out.grad_curl = std::abs(W.dot(parts.grad_part, parts.curl_part)) / sq;
  out.harmonic_curl = std::abs(W.dot(parts.harmonic_part, parts.curl_part)) / sq;
  return out;
}

std::vector<Vector> harmonic_basis(const derham::ComplexOperators &ops, double tol)
{
  std::vector<Vector> basis;
  const int m = ops.gamma_t_components;
  if (m <= 1)
  {
    return basis;
  }
  const auto &W_e = ops.grad_pair->Y().weight;
  const auto &grad = ops.grad_pair->A();
  for (int j = 0; j + 1 < m; ++j)
  {
    Vector phi(ops.grid.num_nodes(), 0.0);
    for (std::size_t v = 0; v < phi.size(); ++v)
    {
      if (ops.node_component[v] == j)
      {
        phi[v] = 1.0;
      }
    }
    // Lift of the boundary data, then the eps-harmonic correction on free nodes.
    Vector E = sparse::spmv(ops.grad_all_nodes, phi);
    const auto u = weighted_least_squares(grad, W_e, E, tol);
    const auto correction = sparse::spmv(grad, u.x);
    sparse::axpy(-1.0, correction, E);
    basis.push_back(std::move(E));
  }

  std::vector<Vector> out;
  for (auto &v : basis)
  {
    const double original = W_e.norm(v);
    for (int pass = 0; pass < 2; ++pass)
    {
      for (const auto &q : out)
      {
        sparse::axpy(-W_e.dot(q, v), q, v);
      }
    }
    const double n = W_e.norm(v);
    if (n <= 1e-8 * original)
    {
      continue;
    }
    for (auto &e : v)
    {
      e /= n;
    }
    out.push_back(std::move(v));
  }
  return out;
}

Vector harmonic_projection(const Vector &E, const std::vector<Vector> &basis, const DiagonalWeight &W_e)
{
  Vector out(E.size(), 0.0);
  for (const auto &q : basis)
  {
    sparse::axpy(W_e.dot(q, E), q, out);
  }
  return out;
}

std::size_t harmonic_dimension(const derham::ComplexOperators &ops, bool dense, std::size_t cap)
{
  if (!dense)
  {
    return harmonic_basis(ops).size();
  }
  const std::size_t n = ops.num_free_edges();
  if (n > cap)
  {
    throw DenseCapError(n, cap);
  }
  if (n == 0)
  {
    return 0;
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
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
  {
    if (eig.eigenvalues(i) <= dual::dense_zero_threshold * top)
    {
      ++count;
    }
  }
  return count;
}

EstimateReport maxwell_estimate_check(const Vector &E, const derham::ComplexOperators &ops,
                                      const constants::ConstantsReport &report)
{
  check_size(E, ops);
  const auto &W_e = ops.grad_pair->Y().weight;
  Vector rest = E;
  sparse::axpy(-1.0, harmonic_projection(E, harmonic_basis(ops), W_e), rest);

  Vector div_side(ops.num_free_nodes());
  ops.grad_pair->apply_adjoint(E, div_side);
  Vector rot_side(ops.num_free_faces());
  ops.curl_pair->apply(E, rot_side);

  EstimateReport out;
  const double r = W_e.norm(rest);
  const double d = ops.grad_pair->X().weight.norm(div_side);
  const double c = ops.curl_pair->Y().weight.norm(rot_side);
  out.lhs = r * r;
  out.rhs = report.c_p * report.c_p * d * d + report.c_m_rot_eps_id * report.c_m_rot_eps_id * c * c;
  out.slack = out.rhs - out.lhs;
  out.scale = std::max(out.lhs, out.rhs);
  out.pass = out.slack >= -1e-9 * out.scale;
  return out;
}

}  // namespace maxcon::helmholtz
