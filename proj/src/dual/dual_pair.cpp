#include "maxcon/dual_pair.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>

#include "maxcon/cg.hpp"
#include "maxcon/error.hpp"

namespace maxcon::dual
{

namespace
{

Vector inverse_entries(const DiagonalWeight &W)
{
  Vector inv(W.size());
  for (std::size_t i = 0; i < W.size(); ++i)
  {
    inv[i] = 1.0 / W[i];
  }
  return inv;
}

struct Projection
{
  Vector value;
  std::size_t iterations = 0;
};

Projection project_onto_range(const SparseMatrix &B, const DiagonalWeight &W, std::span<const double> v, double rtol,
                              std::size_t maxit)
{
  if (B.rows() != W.size() || v.size() != W.size())
  {
    throw ValidationError("range projector dimension mismatch");
  }
  Vector Wv(v.size());
  W.apply(v, Wv);
  Vector rhs(B.cols());
  sparse::spmv_transpose(B, Wv, rhs);
  Projection out;
  out.value.assign(v.size(), 0.0);
  if (sparse::norm2(rhs) == 0.0)
  {
    return out;
  }
  Vector tmp(B.rows());
  Vector Wtmp(B.rows());
  auto normal = [&](std::span<const double> z, std::span<double> y)
  {
    sparse::spmv(B, z, tmp);
    W.apply(tmp, Wtmp);
    sparse::spmv_transpose(B, Wtmp, y);
  };
  // A right-hand side far below |B| |W v| only carries rounding noise, part of it in the
  // kernel of B^T W B; the absolute floor keeps CG from chasing it.
  const double atol = rtol * B.frobenius_norm() * sparse::norm2(Wv);
  auto sol = sparse::cg_solve(normal, rhs, rtol, maxit, true, atol);
  sparse::spmv(B, sol.x, out.value);
  out.iterations = sol.iterations;
  return out;
}

// Modified Gram-Schmidt (two passes) in the W inner product; drops numerically dependent vectors.
std::vector<Vector> orthonormalize(std::vector<Vector> basis, const DiagonalWeight &W)
{
  std::vector<Vector> out;
  for (auto &v : basis)
  {
    if (v.size() != W.size())
    {
      throw ValidationError("deflation vector dimension mismatch");
    }
    const double original = W.norm(v);
    if (original == 0.0)
    {
      continue;
    }
    for (int pass = 0; pass < 2; ++pass)
    {
      for (const auto &q : out)
      {
        sparse::axpy(-W.dot(q, v), q, v);
      }
    }
    const double nrm = W.norm(v);
    if (nrm <= 1e-10 * original)
    {
      continue;
    }
    for (auto &e : v)
    {
      e /= nrm;
    }
    out.push_back(std::move(v));
  }
  return out;
}

void remove_span(const std::vector<Vector> &span, const DiagonalWeight &W, std::span<double> x)
{
  for (const auto &q : span)
  {
    sparse::axpy(-W.dot(q, x), q, x);
  }
}

}  // namespace

DualPair::DualPair(SparseMatrix A, WeightedSpace X, WeightedSpace Y, std::shared_ptr<const DualPair> kernel_hint)
  : A_(std::move(A)), X_(std::move(X)), Y_(std::move(Y)), kernel_hint_(std::move(kernel_hint))
{
  if (A_.cols() != X_.dim() || A_.rows() != Y_.dim())
  {
    throw ValidationError("dual pair: operator is " + std::to_string(A_.rows()) + "x" + std::to_string(A_.cols()) +
                          " but spaces have dims X=" + std::to_string(X_.dim()) + ", Y=" + std::to_string(Y_.dim()));
  }
  if (kernel_hint_ && kernel_hint_->Y().dim() != X_.dim())
  {
    throw ValidationError("dual pair: kernel hint must map into the domain space");
  }
  adjoint_ = adjoint(*this);
}

void DualPair::apply(std::span<const double> x, std::span<double> y) const
{
  sparse::spmv(A_, x, y);
}

void DualPair::apply_adjoint(std::span<const double> y, std::span<double> x) const
{
  sparse::spmv(adjoint_, y, x);
}

DualPair DualPair::swapped() const
{
  return DualPair(adjoint_, Y_, X_);
}

SparseMatrix adjoint(const DualPair &pair)
{
  const auto inv_wx = inverse_entries(pair.X().weight);
  return pair.A().transpose().scaled(inv_wx, pair.Y().weight.entries());
}

Vector range_projector_apply(const SparseMatrix &B, const DiagonalWeight &W, std::span<const double> v, double rtol,
                             std::size_t maxit)
{
  return project_onto_range(B, W, v, rtol, maxit).value;
}

double EigenOptions::effective_residual_tol() const
{
  return residual_tol > 0.0 ? residual_tol : std::max(0.1 * std::sqrt(tol), 1e-7);
}

double EigenOptions::effective_inner_rtol() const
{
  return inner_rtol > 0.0 ? inner_rtol : std::max(0.01 * tol, 1e-13);
}

SpectralResult min_positive_eigenvalue(const DualPair &pair, std::span<const Deflation> deflation,
                                       const EigenOptions &options)
{
  if (!(options.tol > 0.0))
  {
    throw ValidationError("eigensolver tolerance must be positive");
  }
  const auto &WX = pair.X().weight;
  const auto &WY = pair.Y().weight;
  const std::size_t n = pair.X().dim();
  if (n == 0 || pair.A().pruned().nnz() == 0)
  {
    throw NoPositiveSpectrum();
  }

  auto handling = options.kernel;
  if (handling == KernelHandling::automatic)
  {
    handling = pair.kernel_hint() ? KernelHandling::hint : KernelHandling::range_of_adjoint;
  }
  if (handling == KernelHandling::hint && !pair.kernel_hint())
  {
    throw ValidationError("kernel handling by hint requested but the pair carries no hint");
  }
  const DualPair *hint = handling == KernelHandling::hint ? pair.kernel_hint().get() : nullptr;

  std::vector<const SparseMatrix *> keep;
  if (handling == KernelHandling::range_of_adjoint)
  {
    keep.push_back(&pair.adjoint_matrix());
  }
  std::vector<Vector> span_vectors;
  for (const auto &d : deflation)
  {
    if (d.kind == Deflation::Kind::keep_range)
    {
      if (d.B.rows() != n)
      {
        throw ValidationError("keep-range deflation operator must map into the domain space");
      }
      keep.push_back(&d.B);
    }
    else
    {
      span_vectors.insert(span_vectors.end(), d.basis.begin(), d.basis.end());
    }
  }
  const auto span = orthonormalize(std::move(span_vectors), WX);

  const double inner_rtol = options.effective_inner_rtol();
  const double residual_tol = options.effective_residual_tol();
  SpectralResult result;

  auto project = [&](Vector &x)
  {
    if (hint)
    {
      auto p = project_onto_range(hint->A(), WX, x, inner_rtol, options.inner_maxit);
      result.inner_iterations += p.iterations;
      sparse::axpy(-1.0, p.value, x);
    }
    for (const auto *B : keep)
    {
      auto p = project_onto_range(*B, WX, x, inner_rtol, options.inner_maxit);
      result.inner_iterations += p.iterations;
      x = std::move(p.value);
    }
    for (int pass = 0; pass < 2 && !span.empty(); ++pass)
    {
      remove_span(span, WX, x);
    }
  };

  // Euclidean form of the (regularized, compressed) normal operator:
  //   S = P^T (A^T W_Y A + W_X G G*) P,  P the W_X-orthogonal projector off the explicit span.
  Vector tmp_x(n), tmp_y(pair.Y().dim()), tmp_z, tmp_g;
  if (hint)
  {
    tmp_z.resize(hint->X().dim());
    tmp_g.resize(n);
  }
  auto normal = [&](std::span<const double> in, std::span<double> out)
  {
    std::copy(in.begin(), in.end(), tmp_x.begin());
    remove_span(span, WX, tmp_x);
    pair.apply(tmp_x, tmp_y);
    for (std::size_t i = 0; i < tmp_y.size(); ++i)
    {
      tmp_y[i] *= WY[i];
    }
    sparse::spmv_transpose(pair.A(), tmp_y, out);
    if (hint)
    {
      // W_X G W_Z^-1 G^T W_X v
      WX.apply(tmp_x, tmp_g);
      sparse::spmv_transpose(hint->A(), tmp_g, tmp_z);
      hint->X().weight.apply_inverse(tmp_z, tmp_z);
      sparse::spmv(hint->A(), tmp_z, tmp_g);
      for (std::size_t i = 0; i < n; ++i)
      {
        out[i] += WX[i] * tmp_g[i];
      }
    }
    for (const auto &q : span)
    {
      const double c = sparse::dot(q, out);
      for (std::size_t i = 0; i < n; ++i)
      {
        out[i] -= c * WX[i] * q[i];
      }
    }
  };

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector x(n);
  for (auto &e : x)
  {
    e = dist(rng);
  }
  const double start_norm = WX.norm(x);
  project(x);
  double xnorm = WX.norm(x);
  if (xnorm <= 1e-12 * start_norm)
  {
    throw NoPositiveSpectrum();
  }
  for (auto &e : x)
  {
    e /= xnorm;
  }

  // Scale for deciding that a Rayleigh quotient is numerically zero.
  double wy_max = 0.0;
  double wx_min = std::numeric_limits<double>::infinity();
  for (double w : WY.entries())
  {
    wy_max = std::max(wy_max, w);
  }
  for (double w : WX.entries())
  {
    wx_min = std::min(wx_min, w);
  }
  const double scale = pair.A().frobenius_norm() * pair.A().frobenius_norm() * wy_max / wx_min;
  const double eps = std::numeric_limits<double>::epsilon();

  Vector Ax(pair.Y().dim());
  Vector AsAx(n);
  Vector rhs(n);
  double lambda_prev = 0.0;
  for (std::size_t it = 0; it <= options.maxit; ++it)
  {
    pair.apply(x, Ax);
    const double lambda = WY.dot(Ax, Ax);
    if (it == 0 && lambda <= 1e-13 * scale)
    {
      throw NoPositiveSpectrum();
    }
    pair.apply_adjoint(Ax, AsAx);
    sparse::axpy(-lambda, x, AsAx);
    const double residual = WX.norm(AsAx);

    result.eigenvalue = lambda;
    result.residual = residual;
    result.iterations = it;
    const bool settled = it > 0 && std::abs(lambda - lambda_prev) <= options.tol * lambda + 1e-14;
    // The residual of A*A x cannot drop below the rounding level of the operator itself.
    if (settled && residual <= residual_tol * lambda + 1e3 * eps * scale)
    {
      result.eigenvector = x;
      result.constant = 1.0 / std::sqrt(lambda);
      return result;
    }
    if (it == options.maxit)
    {
      break;
    }
    lambda_prev = lambda;

    WX.apply(x, rhs);
    auto sol = sparse::cg_solve(normal, rhs, inner_rtol, options.inner_maxit, true);
    result.inner_iterations += sol.iterations;
    x = std::move(sol.x);
    project(x);
    xnorm = WX.norm(x);
    if (!(xnorm > 0.0) || !std::isfinite(xnorm))
    {
      throw ConvergenceError("inverse iteration lost its iterate", residual, it);
    }
    for (auto &e : x)
    {
      e /= xnorm;
    }
  }
  throw ConvergenceError("inverse iteration did not converge", result.residual, result.iterations);
}

double constant_cA(const DualPair &pair, std::span<const Deflation> deflation, const EigenOptions &options)
{
  return min_positive_eigenvalue(pair, deflation, options).constant;
}

namespace
{

dense::Matrix weighted_dense(const DualPair &pair)
{
  dense::Matrix A = dense::to_dense(pair.A());
  for (Eigen::Index r = 0; r < A.rows(); ++r)
  {
    A.row(r) *= std::sqrt(pair.Y().weight[static_cast<std::size_t>(r)]);
  }
  for (Eigen::Index c = 0; c < A.cols(); ++c)
  {
    A.col(c) /= std::sqrt(pair.X().weight[static_cast<std::size_t>(c)]);
  }
  return A;
}

std::vector<double> nonzero_part(const dense::ColVector &values, double threshold)
{
  std::vector<double> out;
  for (Eigen::Index i = 0; i < values.size(); ++i)
  {
    if (values(i) > threshold)
    {
      out.push_back(values(i));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double max_abs_entry(const dense::ColVector &v)
{
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

}  // namespace

double dense_constant(const DualPair &pair, std::size_t cap)
{
  const auto sv = dense::singular_values(weighted_dense(pair), cap);
  if (sv.size() == 0 || !(sv(0) > 0.0))
  {
    throw NoPositiveSpectrum();
  }
  double smallest = sv(0);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
  {
    if (sv(i) > 1e-8 * sv(0))
    {
      smallest = std::min(smallest, sv(i));
    }
  }
  return 1.0 / smallest;
}

std::pair<dense::Matrix, dense::Matrix> dense_normal_forms(const DualPair &pair, bool on_domain, std::size_t cap)
{
  const auto dim = on_domain ? pair.X().dim() : pair.Y().dim();
  if (dim > cap)
  {
    throw DenseCapError(dim, cap);
  }
  const dense::Matrix A = dense::to_dense(pair.A());
  const dense::Matrix WX = dense::diagonal(pair.X().weight);
  const dense::Matrix WY = dense::diagonal(pair.Y().weight);
  if (on_domain)
  {
    return {A.transpose() * WY * A, WX};
  }
  const dense::Matrix WXinv = WX.diagonal().cwiseInverse().asDiagonal();
  return {WY * A * WXinv * A.transpose() * WY, WY};
}

SpectraReport spectra_match_check(const DualPair &pair, std::size_t cap)
{
  const auto [KX, MX] = dense_normal_forms(pair, true, cap);
  const auto [KY, MY] = dense_normal_forms(pair, false, cap);
  const auto ex = dense::dense_eigh(KX, MX, cap).eigenvalues;
  const auto ey = dense::dense_eigh(KY, MY, cap).eigenvalues;
  const double top = std::max(max_abs_entry(ex), max_abs_entry(ey));
  const double threshold = dense_zero_threshold * top;

  SpectraReport report;
  report.nonzero_AsA = nonzero_part(ex, threshold);
  report.nonzero_AAs = nonzero_part(ey, threshold);
  report.counts_match = report.nonzero_AsA.size() == report.nonzero_AAs.size();
  if (!report.counts_match)
  {
    report.max_deviation = std::numeric_limits<double>::infinity();
    return report;
  }
  for (std::size_t i = 0; i < report.nonzero_AsA.size(); ++i)
  {
    report.max_deviation = std::max(report.max_deviation, std::abs(report.nonzero_AsA[i] - report.nonzero_AAs[i]));
  }
  return report;
}

BlockMaxwellOperator::BlockMaxwellOperator(std::shared_ptr<const DualPair> pair) : pair_(std::move(pair))
{
  if (!pair_)
  {
    throw ValidationError("block operator needs a dual pair");
  }
}

void BlockMaxwellOperator::apply(std::span<const double> z, std::span<double> out) const
{
  const auto nx = pair_->X().dim();
  const auto ny = pair_->Y().dim();
  if (z.size() != nx + ny || out.size() != nx + ny)
  {
    throw ValidationError("block operator dimension mismatch");
  }
  pair_->apply_adjoint(z.subspan(nx, ny), out.subspan(0, nx));
  pair_->apply(z.subspan(0, nx), out.subspan(nx, ny));
}

DiagonalWeight BlockMaxwellOperator::weight() const
{
  return pair_->X().weight.concat(pair_->Y().weight);
}

std::pair<dense::Matrix, dense::Matrix> BlockMaxwellOperator::dense_forms(std::size_t cap) const
{
  const auto n = dim();
  if (n > cap)
  {
    throw DenseCapError(n, cap);
  }
  const auto nx = static_cast<Eigen::Index>(pair_->X().dim());
  const auto ny = static_cast<Eigen::Index>(pair_->Y().dim());
  const dense::Matrix WYA = dense::diagonal(pair_->Y().weight) * dense::to_dense(pair_->A());
  dense::Matrix K = dense::Matrix::Zero(nx + ny, nx + ny);
  K.block(0, nx, nx, ny) = WYA.transpose();
  K.block(nx, 0, ny, nx) = WYA;
  return {K, dense::diagonal(weight())};
}

BlockSpectrumReport block_spectrum_check(const BlockMaxwellOperator &M, std::size_t cap)
{
  const auto [K, W] = M.dense_forms(cap);
  const auto eig = dense::dense_eigh(K, W, cap);
  const auto &s = eig.eigenvalues;
  const auto N = s.size();

  BlockSpectrumReport report;
  report.eigenvalues.assign(s.data(), s.data() + N);
  for (Eigen::Index i = 0; i < N; ++i)
  {
    report.symmetry_deviation = std::max(report.symmetry_deviation, std::abs(s(i) + s(N - 1 - i)));
  }

  const auto &pair = M.pair();
  const auto nx = static_cast<Eigen::Index>(pair.X().dim());
  const auto ny = static_cast<Eigen::Index>(pair.Y().dim());
  const dense::Matrix A = dense::to_dense(pair.A());
  const dense::Matrix As = dense::to_dense(pair.adjoint_matrix());
  const dense::Matrix AsA = As * A;
  const dense::Matrix AAs = A * As;
  const dense::ColVector wx = dense::diagonal(pair.X().weight).diagonal();
  const dense::ColVector wy = dense::diagonal(pair.Y().weight).diagonal();
  auto wnorm = [](const dense::ColVector &w, const dense::ColVector &v) { return std::sqrt(w.dot(v.cwiseProduct(v))); };

  const double top = max_abs_entry(s);
  std::vector<double> positive_squared;
  for (Eigen::Index i = 0; i < N; ++i)
  {
    const double lambda = s(i);
    if (std::abs(lambda) <= std::sqrt(dense_zero_threshold) * top)
    {
      continue;
    }
    if (lambda > 0)
    {
      positive_squared.push_back(lambda * lambda);
    }
    const dense::ColVector x = eig.eigenvectors.col(i).head(nx);
    const dense::ColVector y = eig.eigenvectors.col(i).tail(ny);
    const double l2 = lambda * lambda;
    const double rx = wnorm(wx, AsA * x - l2 * x) / (l2 * wnorm(wx, x));
    const double ry = wnorm(wy, AAs * y - l2 * y) / (l2 * wnorm(wy, y));
    report.eigenvector_residual = std::max({report.eigenvector_residual, rx, ry});
  }
  std::sort(positive_squared.begin(), positive_squared.end());

  const auto [KX, MX] = dense_normal_forms(pair, true, cap);
  const auto ex = dense::dense_eigh(KX, MX, cap).eigenvalues;
  const auto nonzero = nonzero_part(ex, dense_zero_threshold * max_abs_entry(ex));
  report.counts_match = nonzero.size() == positive_squared.size();
  if (!report.counts_match)
  {
    report.square_deviation = std::numeric_limits<double>::infinity();
    return report;
  }
  for (std::size_t i = 0; i < nonzero.size(); ++i)
  {
    report.square_deviation = std::max(report.square_deviation, std::abs(nonzero[i] - positive_squared[i]));
  }
  return report;
}

}  // namespace maxcon::dual
