#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "maxcon/dual_pair.hpp"
#include "maxcon/error.hpp"

using namespace maxcon;
using namespace maxcon::dual;
using sparse::Triplet;

namespace
{

struct RandomPair
{
  std::shared_ptr<const DualPair> pair;
};

DualPair make_pair(SparseMatrix A, Vector wx = {}, Vector wy = {})
{
  if (wx.empty())
  {
    wx.assign(A.cols(), 1.0);
  }
  if (wy.empty())
  {
    wy.assign(A.rows(), 1.0);
  }
  return DualPair(std::move(A), WeightedSpace{DiagonalWeight(std::move(wx))}, WeightedSpace{DiagonalWeight(std::move(wy))});
}

DualPair random_pair(std::size_t rows, std::size_t cols, std::mt19937_64 &rng, double density = 0.35)
{
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  std::uniform_real_distribution<double> w(0.5, 2.0);
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
  Vector wx(cols);
  Vector wy(rows);
  for (auto &x : wx)
  {
    x = w(rng);
  }
  for (auto &y : wy)
  {
    y = w(rng);
  }
  return make_pair(SparseMatrix::from_triplets(rows, cols, std::move(t)), wx, wy);
}

Vector random_vector(std::size_t n, std::mt19937_64 &rng)
{
  std::uniform_real_distribution<double> v(-1.0, 1.0);
  Vector x(n);
  for (auto &e : x)
  {
    e = v(rng);
  }
  return x;
}

EigenOptions tight()
{
  EigenOptions o;
  o.tol = 1e-12;
  return o;
}

}  // namespace

TEST(Adjoint, ScalarExample)
{
  // A = [[2]], X weight 3, Y weight 9: A* = 9 * 2 / 3 = 6.
  const auto p = make_pair(SparseMatrix::from_triplets(1, 1, {{0, 0, 2.0}}), {3.0}, {9.0});
  EXPECT_DOUBLE_EQ(adjoint(p).coeff(0, 0), 6.0);
}

TEST(Adjoint, IdentityWeightsGiveTranspose)
{
  std::mt19937_64 rng(5);
  const auto p = random_pair(6, 4, rng);
  const auto q = make_pair(p.A());
  EXPECT_EQ(adjoint(q), p.A().transpose());
}

TEST(Adjoint, RandomPairsSatisfyDualityIdentity)
{
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial)
  {
    const auto p = random_pair(1 + rng() % 15, 1 + rng() % 15, rng);
    const double normA = p.A().frobenius_norm() * 4.0;
    for (int s = 0; s < 5; ++s)
    {
      const auto x = random_vector(p.X().dim(), rng);
      const auto y = random_vector(p.Y().dim(), rng);
      Vector Ax(p.Y().dim());
      Vector Asy(p.X().dim());
      p.apply(x, Ax);
      p.apply_adjoint(y, Asy);
      const double dev = std::abs(p.Y().weight.dot(Ax, y) - p.X().weight.dot(x, Asy));
      EXPECT_LE(dev, 1e-12 * sparse::norm2(x) * sparse::norm2(y) * std::max(normA, 1.0));
    }
  }
}

TEST(DualPair, DimensionMismatchThrows)
{
  EXPECT_THROW(make_pair(SparseMatrix::identity(2), {1.0, 1.0, 1.0}, {1.0, 1.0}), ValidationError);
}

TEST(RangeProjector, OntoDiagonalLine)
{
  const auto B = SparseMatrix::from_triplets(2, 1, {{0, 0, 1.0}, {1, 0, 1.0}});
  const auto Pv = range_projector_apply(B, DiagonalWeight::ones(2), std::vector<double>{1.0, 0.0}, 1e-12);
  EXPECT_NEAR(Pv[0], 0.5, 1e-12);
  EXPECT_NEAR(Pv[1], 0.5, 1e-12);
}

TEST(RangeProjector, Idempotent)
{
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial)
  {
    const auto p = random_pair(12, 5, rng);
    const auto v = random_vector(12, rng);
    const double rtol = 1e-10;
    const auto Pv = range_projector_apply(p.A(), p.Y().weight, v, rtol);
    const auto PPv = range_projector_apply(p.A(), p.Y().weight, Pv, rtol);
    Vector d(Pv);
    sparse::axpy(-1.0, PPv, d);
    EXPECT_LE(sparse::norm2(d), 10 * rtol * sparse::norm2(v));
  }
}

TEST(ConstantCA, Diag2)
{
  const auto p = make_pair(SparseMatrix::from_triplets(1, 1, {{0, 0, 2.0}}));
  EXPECT_NEAR(constant_cA(p, {}, tight()), 0.5, 1e-12);
}

TEST(ConstantCA, DiagWithKernel)
{
  const auto p = make_pair(SparseMatrix::from_triplets(2, 2, {{0, 0, 0.0}, {1, 1, 3.0}}));
  EXPECT_NEAR(constant_cA(p, {}, tight()), 1.0 / 3.0, 1e-12);
}

TEST(ConstantCA, ZeroOperatorHasNoPositiveSpectrum)
{
  const auto p = make_pair(SparseMatrix::zero(2, 2));
  EXPECT_THROW(min_positive_eigenvalue(p), NoPositiveSpectrum);
}

TEST(MinPositiveEigenvalue, MatchesDenseOracleOnRandomPair)
{
  std::mt19937_64 rng(101);
  const auto p = random_pair(10, 7, rng, 0.5);
  const auto r = min_positive_eigenvalue(p, {}, tight());
  const double c_dense = dense_constant(p);
  EXPECT_NEAR(r.constant, c_dense, 1e-9 * c_dense);
  EXPECT_NEAR(r.eigenvalue * r.constant * r.constant, 1.0, 1e-14);
  EXPECT_NEAR(p.X().weight.norm(r.eigenvector), 1.0, 1e-12);
}

TEST(MinPositiveEigenvalue, IterationCapRaisesConvergenceError)
{
  std::mt19937_64 rng(101);
  const auto p = random_pair(30, 25, rng, 0.5);
  EigenOptions o = tight();
  o.maxit = 1;
  EXPECT_THROW(min_positive_eigenvalue(p, {}, o), ConvergenceError);
}

// Dual constants: c_A = c_A* on random pairs of both shapes, with rank deficiency.
TEST(DualConstants, RandomPairsAgreeWithSwapped)
{
  std::mt19937_64 rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial)
  {
    const std::size_t rows = 2 + rng() % 39;
    const std::size_t cols = 2 + rng() % 39;
    const auto p = random_pair(rows, cols, rng, 0.15 + 0.3 * double(rng() % 3) / 2.0);
    if (p.A().pruned().nnz() == 0)
    {
      continue;
    }
    const double a = constant_cA(p, {}, tight());
    const double b = constant_cA(p.swapped(), {}, tight());
    EXPECT_NEAR(a, b, 1e-9 * a) << "trial " << trial;
    EXPECT_NEAR(a, dense_constant(p), 1e-9 * a) << "trial " << trial;
    ++checked;
  }
  EXPECT_GE(checked, 50);
}

TEST(RayleighMonotonicity, DeflatingComputedEigenvectors)
{
  std::mt19937_64 rng(77);
  const auto p = random_pair(14, 9, rng, 0.6);
  std::vector<Vector> found;
  double previous = 0.0;
  for (int l = 0; l < 4; ++l)
  {
    std::vector<Deflation> defl;
    if (!found.empty())
    {
      defl.push_back(Deflation::remove_span(found));
    }
    const auto r = min_positive_eigenvalue(p, defl, tight());
    EXPECT_GE(r.eigenvalue, previous - 1e-9);
    previous = r.eigenvalue;
    found.push_back(r.eigenvector);
  }
  // The dense spectrum gives the same ordered values.
  const auto [K, W] = dense_normal_forms(p, true);
  const auto eig = dense::dense_eigh(K, W);
  std::vector<double> positive;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i)
  {
    if (eig.eigenvalues(i) > dense_zero_threshold * eig.eigenvalues.maxCoeff())
    {
      positive.push_back(eig.eigenvalues(i));
    }
  }
  ASSERT_GE(positive.size(), 4u);
  EXPECT_NEAR(previous, positive[3], 1e-8 * positive[3]);
}

TEST(SpectraMatch, RectangularExample)
{
  const auto p = make_pair(SparseMatrix::from_triplets(3, 2, {{0, 0, 1.0}, {1, 1, 2.0}}));
  const auto r = spectra_match_check(p);
  ASSERT_EQ(r.nonzero_AsA.size(), 2u);
  ASSERT_EQ(r.nonzero_AAs.size(), 2u);
  EXPECT_NEAR(r.nonzero_AsA[0], 1.0, 1e-14);
  EXPECT_NEAR(r.nonzero_AsA[1], 4.0, 1e-14);
  EXPECT_NEAR(r.nonzero_AAs[0], 1.0, 1e-14);
  EXPECT_NEAR(r.nonzero_AAs[1], 4.0, 1e-14);
  EXPECT_TRUE(r.counts_match);
}

TEST(SpectraMatch, ZeroOperator)
{
  const auto r = spectra_match_check(make_pair(SparseMatrix::zero(3, 2)));
  EXPECT_TRUE(r.nonzero_AsA.empty());
  EXPECT_TRUE(r.nonzero_AAs.empty());
  EXPECT_EQ(r.max_deviation, 0.0);
}

TEST(SpectraMatch, RandomWeighted)
{
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial)
  {
    const auto r = spectra_match_check(random_pair(12, 8, rng));
    EXPECT_TRUE(r.counts_match);
    EXPECT_LE(r.max_deviation, 1e-9);
  }
}

TEST(SpectraMatch, CapExceeded)
{
  EXPECT_THROW(spectra_match_check(make_pair(SparseMatrix::identity(5)), 4), DenseCapError);
}

TEST(BlockMaxwell, ScalarIdentity)
{
  const BlockMaxwellOperator M(std::make_shared<const DualPair>(make_pair(SparseMatrix::identity(1))));
  const auto r = block_spectrum_check(M);
  ASSERT_EQ(r.eigenvalues.size(), 2u);
  EXPECT_NEAR(r.eigenvalues[0], -1.0, 1e-14);
  EXPECT_NEAR(r.eigenvalues[1], 1.0, 1e-14);
}

TEST(BlockMaxwell, ZeroOperator)
{
  const BlockMaxwellOperator M(std::make_shared<const DualPair>(make_pair(SparseMatrix::zero(1, 1))));
  const auto r = block_spectrum_check(M);
  ASSERT_EQ(r.eigenvalues.size(), 2u);
  EXPECT_EQ(r.eigenvalues[0], 0.0);
  EXPECT_EQ(r.eigenvalues[1], 0.0);
}

TEST(BlockMaxwell, RandomPointSymmetric)
{
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial)
  {
    const BlockMaxwellOperator M(std::make_shared<const DualPair>(random_pair(6, 5, rng, 0.6)));
    const auto r = block_spectrum_check(M);
    EXPECT_LE(r.symmetry_deviation, 1e-10);
    EXPECT_LE(r.eigenvector_residual, 1e-9);
    EXPECT_LE(r.square_deviation, 1e-9);
    EXPECT_TRUE(r.counts_match);
  }
}

TEST(BlockMaxwell, ApplyIsSelfAdjointInProductWeight)
{
  std::mt19937_64 rng(8);
  const BlockMaxwellOperator M(std::make_shared<const DualPair>(random_pair(7, 4, rng)));
  const auto W = M.weight();
  const auto z = random_vector(M.dim(), rng);
  const auto w = random_vector(M.dim(), rng);
  Vector Mz(M.dim());
  Vector Mw(M.dim());
  M.apply(z, Mz);
  M.apply(w, Mw);
  EXPECT_NEAR(W.dot(Mz, w), W.dot(z, Mw), 1e-13);
}
