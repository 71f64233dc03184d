#include "maxcon/dense.hpp"

#include <algorithm>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "maxcon/error.hpp"

namespace maxcon::dense
{

EighResult dense_eigh(const Matrix &A, const std::optional<Matrix> &B, std::size_t cap)
{
  if (A.rows() != A.cols())
  {
    throw ValidationError("dense_eigh requires a square matrix");
  }
  const auto n = static_cast<std::size_t>(A.rows());
  if (n > cap)
  {
    throw DenseCapError(n, cap);
  }
  EighResult out;
  if (n == 0)
  {
    return out;
  }
  // Symmetrize explicitly; callers assemble A from products that are symmetric only up to
  // rounding.
  const Matrix As = 0.5 * (A + A.transpose());
  if (!B)
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(As);
    if (es.info() != Eigen::Success)
    {
      throw Error("dense symmetric eigensolver failed");
    }
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = es.eigenvectors();
    return out;
  }
  if (B->rows() != A.rows() || B->cols() != A.cols())
  {
    throw ValidationError("dense_eigh: B dimension mismatch");
  }
  const Matrix Bs = 0.5 * (*B + B->transpose());
  Eigen::LLT<Matrix> llt(Bs);
  if (llt.info() != Eigen::Success)
  {
    throw ValidationError("dense_eigh: B is not symmetric positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(As, Bs, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
  {
    throw Error("dense generalized eigensolver failed");
  }
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  return out;
}

ColVector singular_values(const Matrix &A, std::size_t cap)
{
  const auto n = static_cast<std::size_t>(std::max(A.rows(), A.cols()));
  if (n > cap)
  {
    throw DenseCapError(n, cap);
  }
  if (A.size() == 0)
  {
    return ColVector();
  }
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues();
}

Matrix to_dense(const sparse::SparseMatrix &A)
{
  Matrix D = Matrix::Zero(static_cast<Eigen::Index>(A.rows()), static_cast<Eigen::Index>(A.cols()));
  for (std::size_t r = 0; r < A.rows(); ++r)
  {
    for (std::size_t k = A.row_offsets()[r]; k < A.row_offsets()[r + 1]; ++k)
    {
      D(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(A.col_indices()[k])) += A.values()[k];
    }
  }
  return D;
}

Matrix diagonal(const sparse::DiagonalWeight &W)
{
  ColVector d(static_cast<Eigen::Index>(W.size()));
  for (std::size_t i = 0; i < W.size(); ++i)
  {
    d(static_cast<Eigen::Index>(i)) = W[i];
  }
  return d.asDiagonal();
}

}  // namespace maxcon::dense
