#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "maxcon/dense.hpp"
#include "maxcon/sparse.hpp"

namespace maxcon::dual
{

using sparse::DiagonalWeight;
using sparse::SparseMatrix;
using sparse::Vector;

inline constexpr std::uint64_t default_seed = 3735928559ULL;

struct WeightedSpace
{
  DiagonalWeight weight;
  std::size_t dim() const { return weight.size(); }
};

//
// A linear map A : X -> Y between two diagonally weighted inner-product spaces together with
// its adjoint A* = W_X^-1 A^T W_Y, so that <A x, y>_Y = <x, A* y>_X.
//
// kernel_hint, when present, is a pair G : Z -> X whose range lies in N(A) (the potential
// operator of a complex, e.g. the gradient for the curl). Solvers use it to project that part
// of the kernel away and to regularize the normal operator with G G*.
//
class DualPair
{
public:
  DualPair(SparseMatrix A, WeightedSpace X, WeightedSpace Y, std::shared_ptr<const DualPair> kernel_hint = nullptr);

  const SparseMatrix &A() const { return A_; }
  const SparseMatrix &adjoint_matrix() const { return adjoint_; }
  const WeightedSpace &X() const { return X_; }
  const WeightedSpace &Y() const { return Y_; }
  const std::shared_ptr<const DualPair> &kernel_hint() const { return kernel_hint_; }

  void apply(std::span<const double> x, std::span<double> y) const;          // y = A x
  void apply_adjoint(std::span<const double> y, std::span<double> x) const;  // x = A* y

  // (A*, Y, X): the forward operator becomes the adjoint. No kernel hint carries over.
  DualPair swapped() const;

private:
  SparseMatrix A_;
  SparseMatrix adjoint_;
  WeightedSpace X_;
  WeightedSpace Y_;
  std::shared_ptr<const DualPair> kernel_hint_;
};

// A* = W_X^-1 A^T W_Y as an explicit sparse matrix.
SparseMatrix adjoint(const DualPair &pair);

// W-orthogonal projection of v onto range(B), via a CG solve of B^T W B z = B^T W v.
Vector range_projector_apply(const SparseMatrix &B, const DiagonalWeight &W, std::span<const double> v, double rtol,
                             std::size_t maxit = 10000);

// An extra subspace constraint for the eigensolver.
struct Deflation
{
  enum class Kind
  {
    keep_range,  // restrict to range(B) (W_X-orthogonal projection)
    remove_span  // remove the span of explicit vectors
  };
  Kind kind;
  SparseMatrix B;
  std::vector<Vector> basis;

  static Deflation keep_range(SparseMatrix B) { return {Kind::keep_range, std::move(B), {}}; }
  static Deflation remove_span(std::vector<Vector> basis) { return {Kind::remove_span, {}, std::move(basis)}; }
};

// How N(A) is removed from the search space.
enum class KernelHandling
{
  automatic,         // kernel hint when present, otherwise range of the adjoint
  hint,              // project off range(kernel_hint)
  range_of_adjoint,  // project onto range(A*)
  supplied           // the caller's deflation list already covers the kernel
};

struct EigenOptions
{
  double tol = 1e-8;           // successive eigenvalue estimates within tol * lambda
  double residual_tol = 0.0;   // relative residual target; 0 selects 0.1 * sqrt(tol), floored at 1e-7
  double inner_rtol = 0.0;     // CG tolerance; 0 selects 0.01 * tol, floored at 1e-13
  std::size_t maxit = 10000;   // outer iterations
  std::size_t inner_maxit = 10000;
  std::uint64_t seed = default_seed;
  KernelHandling kernel = KernelHandling::automatic;

  double effective_residual_tol() const;
  double effective_inner_rtol() const;
};

struct SpectralResult
{
  double eigenvalue = 0.0;  // smallest positive eigenvalue of A*A on the deflated subspace
  Vector eigenvector;       // unit X-norm
  double residual = 0.0;    // ||A*A v - lambda v||_X / ||v||_X
  std::size_t iterations = 0;
  std::size_t inner_iterations = 0;
  double constant = 0.0;  // 1 / sqrt(eigenvalue)
};

//
// Inverse power iteration for the smallest eigenvalue of A*A restricted to the complement of
// N(A) and of any supplied deflation subspaces. The deflation projection is applied after
// every inner solve; explicit spans are also projected inside the inner CG operator so the
// iteration targets the compressed operator exactly. The eigenvalue estimate is the Rayleigh
// quotient ||A x||_Y^2 / ||x||_X^2.
//
SpectralResult min_positive_eigenvalue(const DualPair &pair, std::span<const Deflation> deflation = {},
                                       const EigenOptions &options = {});

// c_A = 1 / sqrt(min_positive_eigenvalue).
double constant_cA(const DualPair &pair, std::span<const Deflation> deflation = {}, const EigenOptions &options = {});

// Dense oracle: smallest positive singular value of W_Y^1/2 A W_X^-1/2, inverted.
double dense_constant(const DualPair &pair, std::size_t cap = dense::default_dense_cap);

// Symmetric-definite dense forms of A*A (on X) and AA* (on Y): (K, W) with K v = lambda W v.
std::pair<dense::Matrix, dense::Matrix> dense_normal_forms(const DualPair &pair, bool on_domain,
                                                           std::size_t cap = dense::default_dense_cap);

struct SpectraReport
{
  std::vector<double> nonzero_AsA;  // ascending
  std::vector<double> nonzero_AAs;  // ascending
  double max_deviation = 0.0;       // after sorting; infinity when the counts differ
  bool counts_match = true;
};

SpectraReport spectra_match_check(const DualPair &pair, std::size_t cap = dense::default_dense_cap);

//
// M(x, y) = (A* y, A x) on Z = X x Y. Self-adjoint in the product inner product; its
// nonzero spectrum is {+sigma, -sigma} over the singular values of A.
//
class BlockMaxwellOperator
{
public:
  explicit BlockMaxwellOperator(std::shared_ptr<const DualPair> pair);

  const DualPair &pair() const { return *pair_; }
  std::size_t dim() const { return pair_->X().dim() + pair_->Y().dim(); }

  void apply(std::span<const double> z, std::span<double> out) const;
  DiagonalWeight weight() const;  // product inner product on Z

  // (W_Z M, W_Z), both symmetric.
  std::pair<dense::Matrix, dense::Matrix> dense_forms(std::size_t cap = dense::default_dense_cap) const;

private:
  std::shared_ptr<const DualPair> pair_;
};

struct BlockSpectrumReport
{
  std::vector<double> eigenvalues;     // ascending spectrum of M
  double symmetry_deviation = 0.0;     // max |s[i] + s[end-i]|
  double eigenvector_residual = 0.0;   // max relative residual of the x/y components against A*A, AA*
  double square_deviation = 0.0;       // positive part of sigma(M) squared vs nonzero sigma(A*A)
  bool counts_match = true;
};

BlockSpectrumReport block_spectrum_check(const BlockMaxwellOperator &M, std::size_t cap = dense::default_dense_cap);

// Relative threshold below which a dense eigenvalue counts as zero.
inline constexpr double dense_zero_threshold = 1e-10;

}  // namespace maxcon::dual
