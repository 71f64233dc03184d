#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "maxcon/sparse.hpp"

namespace maxcon::sparse
{

// out = Op(in); the operator must be symmetric positive (semi)definite in the Euclidean
// inner product on the subspace the solve lives in.
using LinearOperator = std::function<void(std::span<const double> in, std::span<double> out)>;

LinearOperator as_operator(const SparseMatrix &A);

struct CgResult
{
  Vector x;
  std::size_t iterations = 0;
  double residual = 0.0;  // true relative residual ||Op x - b|| / ||b||
  bool stagnated = false;  // stopped at the rounding floor above rtol
};

//
// Conjugate gradients from a zero initial guess. On return the true residual, recomputed as
// Op(x) - b, satisfies ||Op(x) - b|| <= rtol ||b||. Throws ConvergenceError carrying the last
// residual when maxit iterations are exhausted. Works for singular but consistent systems
// (right-hand side in the range), which is how kernel-carrying normal operators are solved.
//
// When a restart from the true residual fails to halve it, the attainable accuracy has been
// reached. With allow_stagnation the best iterate is then returned flagged as stagnated;
// otherwise ConvergenceError is thrown.
//
// atol adds an absolute floor: the solve also stops once ||Op x - b|| <= atol.
//
CgResult cg_solve(const LinearOperator &apply, std::span<const double> b, double rtol, std::size_t maxit,
                  bool allow_stagnation = false, double atol = 0.0);

}  // namespace maxcon::sparse
