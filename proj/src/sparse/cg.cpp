#include "maxcon/cg.hpp"

#include <cmath>
#include <limits>

#include "maxcon/error.hpp"

namespace maxcon::sparse
{

LinearOperator as_operator(const SparseMatrix &A)
{
  return [&A](std::span<const double> in, std::span<double> out) { spmv(A, in, out); };
}

CgResult cg_solve(const LinearOperator &apply, std::span<const double> b, double rtol, std::size_t maxit,
                  bool allow_stagnation, double atol)
{
  if (!(rtol > 0.0))
  {
    throw ValidationError("cg_solve requires rtol > 0");
  }
  const std::size_t n = b.size();
  CgResult out;
  out.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0)
  {
    return out;
  }
  const double target = std::max(rtol * bnorm, atol);

  Vector r(b.begin(), b.end());
  Vector p = r;
  Vector Ap(n);
  double rr = dot(r, r);

  auto true_residual = [&]()
  {
    apply(out.x, Ap);
    for (std::size_t i = 0; i < n; ++i)
    {
      r[i] = b[i] - Ap[i];
    }
    rr = dot(r, r);
    return std::sqrt(rr);
  };

  std::size_t it = 0;
  double last_restart = std::numeric_limits<double>::infinity();
  while (it < maxit)
  {
    if (std::sqrt(rr) <= target)
    {
      // The recursive residual drifts from the true one; confirm before returning and
      // restart from the true residual otherwise.
      const double res = true_residual();
      if (res <= target)
      {
        out.iterations = it;
        out.residual = res / bnorm;
        return out;
      }
      if (res > 0.5 * last_restart)
      {
        out.stagnated = true;
        break;
      }
      last_restart = res;
      p = r;
    }
    apply(p, Ap);
    const double pAp = dot(p, Ap);
    if (!(pAp > 0.0))
    {
      // Search direction fell into the kernel: nothing more to gain in this Krylov space.
      out.stagnated = true;
      break;
    }
    const double alpha = rr / pAp;
    axpy(alpha, p, out.x);
    axpy(-alpha, Ap, r);
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t i = 0; i < n; ++i)
    {
      p[i] = r[i] + beta * p[i];
    }
    ++it;
  }
  const double res = true_residual();
  out.iterations = it;
  out.residual = res / bnorm;
  if (res <= target || (out.stagnated && allow_stagnation))
  {
    return out;
  }
  throw ConvergenceError("conjugate gradients did not converge", out.residual, it);
}

}  // namespace maxcon::sparse
