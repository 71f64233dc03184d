#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "maxcon/cg.hpp"
#include "maxcon/dense.hpp"
#include "maxcon/error.hpp"
#include "maxcon/sparse.hpp"

using namespace maxcon;
using namespace maxcon::sparse;

namespace
{

SparseMatrix random_sparse(std::size_t rows, std::size_t cols, double density, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  std::vector<Triplet> t;
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
  return SparseMatrix::from_triplets(rows, cols, std::move(t));
}

}  // namespace

TEST(Spmv, IdentityReturnsInput)
{
  const auto y = spmv(SparseMatrix::identity(3), std::vector<double>{1.0, -2.0, 5.0});
  EXPECT_EQ(y, (Vector{1.0, -2.0, 5.0}));
}

TEST(Spmv, ZeroMatrix)
{
  const auto y = spmv(SparseMatrix::zero(2, 3), std::vector<double>{1.0, 2.0, 3.0});
  EXPECT_EQ(y, (Vector{0.0, 0.0}));
}

TEST(Spmv, UpperTriangular)
{
  const auto A = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 3.0}});
  EXPECT_EQ(spmv(A, std::vector<double>{1.0, 1.0}), (Vector{3.0, 3.0}));
}

TEST(Spmv, DimensionMismatchThrows)
{
  EXPECT_THROW(spmv(SparseMatrix::identity(3), std::vector<double>{1.0, 2.0}), ValidationError);
}

TEST(SparseMatrix, DuplicatesSummedAndZerosKept)
{
  const auto A = SparseMatrix::from_triplets(2, 2, {{0, 1, 1.0}, {0, 1, -1.0}, {1, 0, 2.0}, {1, 0, 0.5}});
  EXPECT_EQ(A.nnz(), 2u);
  EXPECT_EQ(A.coeff(0, 1), 0.0);
  EXPECT_EQ(A.coeff(1, 0), 2.5);
  EXPECT_EQ(A.pruned().nnz(), 1u);
}

TEST(SparseMatrix, OutOfRangeTripletThrows)
{
  EXPECT_THROW(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), ValidationError);
}

TEST(SparseMatrix, FromCsrValidates)
{
  EXPECT_NO_THROW(SparseMatrix::from_csr(2, 2, {0, 1, 2}, {0, 1}, {1.0, 2.0}));
  EXPECT_THROW(SparseMatrix::from_csr(2, 2, {0, 2, 2}, {1, 0}, {1.0, 2.0}), ValidationError);
  EXPECT_THROW(SparseMatrix::from_csr(2, 2, {0, 1}, {0}, {1.0}), ValidationError);
}

TEST(SparseMatrix, ProductsAndTransposeMatchDense)
{
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial)
  {
    const auto A = random_sparse(7, 5, 0.4, rng);
    const auto B = random_sparse(5, 6, 0.4, rng);
    const auto C = random_sparse(7, 5, 0.4, rng);
    const auto dA = dense::to_dense(A);
    EXPECT_LE((dense::to_dense(multiply(A, B)) - dA * dense::to_dense(B)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE((dense::to_dense(A.transpose()) - dA.transpose()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE((dense::to_dense(add(A, C, 2.0, -0.5)) - (2.0 * dA - 0.5 * dense::to_dense(C))).cwiseAbs().maxCoeff(),
              1e-15);
    Vector x(7);
    for (auto &v : x)
    {
      v = std::uniform_real_distribution<double>(-1, 1)(rng);
    }
    Vector y(5);
    spmv_transpose(A, x, y);
    const auto yt = spmv(A.transpose(), x);
    for (std::size_t i = 0; i < 5; ++i)
    {
      EXPECT_NEAR(y[i], yt[i], 1e-15);
    }
  }
}

TEST(SparseMatrix, SubmatrixAndScaling)
{
  const auto A = SparseMatrix::from_triplets(3, 3, {{0, 0, 1.0}, {1, 2, 2.0}, {2, 1, 3.0}, {2, 2, 4.0}});
  const std::vector<std::size_t> rows{1, 2};
  const std::vector<std::size_t> cols{2};
  const auto S = A.submatrix(rows, cols);
  EXPECT_EQ(S.rows(), 2u);
  EXPECT_EQ(S.cols(), 1u);
  EXPECT_EQ(S.coeff(0, 0), 2.0);
  EXPECT_EQ(S.coeff(1, 0), 4.0);
  const std::vector<double> left{1.0, 2.0, 3.0};
  const auto T = A.scaled(left, {});
  EXPECT_EQ(T.coeff(2, 2), 12.0);
}

TEST(SparseMatrix, Vstack)
{
  const auto V = vstack(SparseMatrix::identity(2), SparseMatrix::from_triplets(1, 2, {{0, 1, 5.0}}));
  EXPECT_EQ(V.rows(), 3u);
  EXPECT_EQ(V.coeff(2, 1), 5.0);
}

TEST(DiagonalWeight, RejectsNonPositive)
{
  EXPECT_THROW(DiagonalWeight(Vector{1.0, 0.0}), ValidationError);
  EXPECT_THROW(DiagonalWeight(Vector{1.0, -2.0}), ValidationError);
  const DiagonalWeight W(Vector{2.0, 3.0});
  EXPECT_DOUBLE_EQ(W.dot(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 2.0}), 8.0);
}

TEST(Cg, ScaledIdentity)
{
  const auto A = SparseMatrix::diagonal(std::vector<double>{2.0, 2.0});
  const auto r = cg_solve(as_operator(A), std::vector<double>{2.0, 4.0}, 1e-12, 100);
  EXPECT_NEAR(r.x[0], 1.0, 1e-12);
  EXPECT_NEAR(r.x[1], 2.0, 1e-12);
}

TEST(Cg, Diagonal)
{
  const auto A = SparseMatrix::diagonal(std::vector<double>{1.0, 4.0, 9.0});
  const auto r = cg_solve(as_operator(A), std::vector<double>{1.0, 1.0, 1.0}, 1e-12, 100);
  EXPECT_NEAR(r.x[0], 1.0, 1e-12);
  EXPECT_NEAR(r.x[1], 0.25, 1e-12);
  EXPECT_NEAR(r.x[2], 1.0 / 9.0, 1e-12);
}

TEST(Cg, RandomSpdAgainstDenseSolve)
{
  std::mt19937_64 rng(7);
  const auto B = random_sparse(8, 8, 0.5, rng);
  const auto A = add(multiply(B.transpose(), B), SparseMatrix::identity(8));
  Vector b(8);
  for (auto &v : b)
  {
    v = std::uniform_real_distribution<double>(-1, 1)(rng);
  }
  const auto r = cg_solve(as_operator(A), b, 1e-13, 1000);
  const Eigen::VectorXd ref = dense::to_dense(A).partialPivLu().solve(Eigen::Map<const Eigen::VectorXd>(b.data(), 8));
  for (int i = 0; i < 8; ++i)
  {
    EXPECT_NEAR(r.x[static_cast<std::size_t>(i)], ref(i), 1e-11);
  }
  EXPECT_LE(r.residual, 1e-13);
}

TEST(Cg, NonConvergenceThrows)
{
  std::mt19937_64 rng(3);
  const auto B = random_sparse(30, 30, 0.5, rng);
  const auto A = add(multiply(B.transpose(), B), SparseMatrix::identity(30), 1.0, 1e-6);
  const Vector b(30, 1.0);
  EXPECT_THROW(cg_solve(as_operator(A), b, 1e-14, 2), ConvergenceError);
}

TEST(DenseEigh, Diagonal)
{
  const auto r = dense::dense_eigh(Eigen::Vector3d(3, 1, 2).asDiagonal().toDenseMatrix());
  EXPECT_NEAR(r.eigenvalues(0), 1.0, 1e-14);
  EXPECT_NEAR(r.eigenvalues(1), 2.0, 1e-14);
  EXPECT_NEAR(r.eigenvalues(2), 3.0, 1e-14);
}

TEST(DenseEigh, Swap)
{
  dense::Matrix A(2, 2);
  A << 0, 1, 1, 0;
  const auto r = dense::dense_eigh(A);
  EXPECT_NEAR(r.eigenvalues(0), -1.0, 1e-14);
  EXPECT_NEAR(r.eigenvalues(1), 1.0, 1e-14);
}

TEST(DenseEigh, Generalized)
{
  dense::Matrix A(1, 1);
  dense::Matrix B(1, 1);
  A << 2;
  B << 4;
  const auto r = dense::dense_eigh(A, B);
  EXPECT_NEAR(r.eigenvalues(0), 0.5, 1e-15);
}

TEST(DenseEigh, CapAndDefiniteness)
{
  EXPECT_THROW(dense::dense_eigh(dense::Matrix::Identity(5, 5), std::nullopt, 4), DenseCapError);
  dense::Matrix B(2, 2);
  B << 1, 0, 0, -1;
  EXPECT_THROW(dense::dense_eigh(dense::Matrix::Identity(2, 2), B), ValidationError);
}
