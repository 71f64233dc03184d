#include <cstdio>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "maxcon/derham.hpp"
#include "maxcon/error.hpp"

using namespace maxcon;
using namespace maxcon::derham;

namespace
{

Grid3 cube(std::size_t n, double L = 1.0)
{
  return build_grid({n, n, n}, {L, L, L});
}

// Union sizes over the closed tangential faces by inclusion-exclusion. Subsets containing two
// opposite faces have an empty intersection.
struct RemovedCounts
{
  long nodes = 0;
  long edges = 0;
  long faces = 0;
};

RemovedCounts removed_by_inclusion_exclusion(const Grid3 &g, const BoundarySpec &bc)
{
  RemovedCounts out;
  for (unsigned subset = 1; subset < 64; ++subset)
  {
    bool valid = true;
    std::array<int, 3> fixed{0, 0, 0};
    int size = 0;
    for (int f = 0; f < 6; ++f)
    {
      if (!((subset >> f) & 1U))
      {
        continue;
      }
      if (!bc.tangential(f) || fixed[static_cast<std::size_t>(f / 2)])
      {
        valid = false;
        break;
      }
      fixed[static_cast<std::size_t>(f / 2)] = 1;
      ++size;
    }
    if (!valid)
    {
      continue;
    }
    const long sign = size % 2 == 1 ? 1 : -1;
    long nodes = 1;
    for (int a = 0; a < 3; ++a)
    {
      nodes *= fixed[static_cast<std::size_t>(a)] ? 1 : long(g.n[static_cast<std::size_t>(a)]) + 1;
    }
    out.nodes += sign * nodes;
    for (int d = 0; d < 3; ++d)
    {
      if (fixed[static_cast<std::size_t>(d)])
      {
        continue;
      }
      long edges = long(g.n[static_cast<std::size_t>(d)]);
      for (int a = 0; a < 3; ++a)
      {
        if (a != d)
        {
          edges *= fixed[static_cast<std::size_t>(a)] ? 1 : long(g.n[static_cast<std::size_t>(a)]) + 1;
        }
      }
      out.edges += sign * edges;
    }
    if (size == 1)
    {
      const int axis = fixed[0] ? 0 : (fixed[1] ? 1 : 2);
      long faces = 1;
      for (int a = 0; a < 3; ++a)
      {
        if (a != axis)
        {
          faces *= long(g.n[static_cast<std::size_t>(a)]);
        }
      }
      out.faces += faces;
    }
  }
  return out;
}

bool all_entries_zero(const SparseMatrix &M)
{
  for (double v : M.values())
  {
    if (v != 0.0)
    {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST(Grid, CountsForTwoCubed)
{
  const auto g = cube(2);
  EXPECT_EQ(g.num_nodes(), 27u);
  EXPECT_EQ(g.num_cells(), 8u);
  EXPECT_EQ(g.num_edges(), 54u);
  EXPECT_EQ(g.num_faces(), 36u);
  EXPECT_DOUBLE_EQ(g.diameter(), std::sqrt(3.0));
}

TEST(Grid, RejectsDegenerateInput)
{
  EXPECT_THROW(build_grid({1, 2, 2}, {1, 1, 1}), ValidationError);
  EXPECT_THROW(build_grid({2, 2, 2}, {1, 0, 1}), ValidationError);
  EXPECT_THROW(build_grid({2, 2, 2}, {1, 1, -1}), ValidationError);
}

TEST(Grid, IndexRoundTrip)
{
  const auto g = build_grid({3, 4, 2}, {1, 2, 3});
  for (std::size_t e = 0; e < g.num_edges(); ++e)
  {
    Index3 p{};
    const int d = g.edge_position(e, p);
    EXPECT_EQ(g.edge_index(d, p), e);
  }
  for (std::size_t f = 0; f < g.num_faces(); ++f)
  {
    Index3 p{};
    const int d = g.face_position(f, p);
    EXPECT_EQ(g.face_index(d, p), f);
  }
  for (std::size_t v = 0; v < g.num_nodes(); ++v)
  {
    EXPECT_EQ(g.node_index(g.node_position(v)), v);
  }
}

TEST(BoundarySpec, ParseAndSwap)
{
  const auto bc = BoundarySpec::parse({"tangential", "tangential", "normal", "normal", "normal", "normal"});
  EXPECT_EQ(bc.mask(), 3u);
  EXPECT_EQ(bc.swapped().mask(), 60u);
  EXPECT_EQ(BoundarySpec::from_mask(bc.mask()), bc);
  EXPECT_THROW(BoundarySpec::parse({"tangential"}), ValidationError);
  EXPECT_THROW(BoundarySpec::parse({"t", "t", "t", "t", "t", "t"}), ValidationError);
}

TEST(BoundarySpec, TangentialComponents)
{
  int count = 0;
  BoundarySpec::dirichlet().tangential_components(count);
  EXPECT_EQ(count, 1);
  BoundarySpec::neumann().tangential_components(count);
  EXPECT_EQ(count, 0);
  BoundarySpec::from_mask(3).tangential_components(count);
  EXPECT_EQ(count, 2);
  BoundarySpec::from_mask(1 | 4).tangential_components(count);
  EXPECT_EQ(count, 1);
}

TEST(Complex, DofBookkeepingAllBoundarySpecs)
{
  const auto g = cube(2);
  const auto mat = MaterialField::identity(g);
  for (unsigned mask = 0; mask < 64; ++mask)
  {
    const auto bc = BoundarySpec::from_mask(mask);
    const auto ops = build_complex(g, bc, mat);
    const auto removed = removed_by_inclusion_exclusion(g, bc);
    EXPECT_EQ(long(g.num_nodes()) - long(ops.num_free_nodes()), removed.nodes) << "mask " << mask;
    EXPECT_EQ(long(g.num_edges()) - long(ops.num_free_edges()), removed.edges) << "mask " << mask;
    EXPECT_EQ(long(g.num_faces()) - long(ops.num_free_faces()), removed.faces) << "mask " << mask;
    EXPECT_EQ(ops.grad_pair->A().cols(), ops.num_free_nodes());
    EXPECT_EQ(ops.grad_pair->A().rows(), ops.num_free_edges());
    EXPECT_EQ(ops.curl_pair->A().cols(), ops.num_free_edges());
    EXPECT_EQ(ops.curl_pair->A().rows(), ops.num_free_faces());
    EXPECT_EQ(ops.div_pair->A().cols(), ops.num_free_faces());
    EXPECT_EQ(ops.div_pair->A().rows(), g.num_cells());
  }
}

TEST(Complex, DofBookkeepingNonCubic)
{
  const auto g = build_grid({2, 3, 4}, {1.0, 1.5, 0.7});
  const auto mat = MaterialField::identity(g);
  for (unsigned mask = 0; mask < 64; mask += 5)
  {
    const auto bc = BoundarySpec::from_mask(mask);
    const auto ops = build_complex(g, bc, mat);
    const auto removed = removed_by_inclusion_exclusion(g, bc);
    EXPECT_EQ(long(g.num_nodes()) - long(ops.num_free_nodes()), removed.nodes);
    EXPECT_EQ(long(g.num_edges()) - long(ops.num_free_edges()), removed.edges);
    EXPECT_EQ(long(g.num_faces()) - long(ops.num_free_faces()), removed.faces);
  }
}

TEST(Complex, ExactSequenceAllBoundarySpecs)
{
  for (const auto &g : {cube(2), build_grid({3, 4, 5}, {1.0, 0.3, 2.0})})
  {
    const auto mat = MaterialField::random(g, 0.5, 2.0, 9);
    for (unsigned mask = 0; mask < 64; ++mask)
    {
      const auto ops = build_complex(g, BoundarySpec::from_mask(mask), mat);
      EXPECT_TRUE(all_entries_zero(multiply(ops.curl_pair->A(), ops.grad_pair->A()))) << "mask " << mask;
      EXPECT_TRUE(all_entries_zero(multiply(ops.div_pair->A(), ops.curl_pair->A()))) << "mask " << mask;
    }
  }
}

TEST(Complex, ExactSequenceUpToEight)
{
  for (std::size_t n = 2; n <= 8; ++n)
  {
    const auto g = build_grid({n, n, n}, {1.0, 1.0, 1.0});
    const auto mat = MaterialField::identity(g);
    for (unsigned mask : {0u, 63u, 3u, 21u, 42u})
    {
      const auto ops = build_complex(g, BoundarySpec::from_mask(mask), mat);
      EXPECT_TRUE(all_entries_zero(multiply(ops.curl_pair->A(), ops.grad_pair->A()))) << n << " " << mask;
      EXPECT_TRUE(all_entries_zero(multiply(ops.div_pair->A(), ops.curl_pair->A()))) << n << " " << mask;
    }
  }
}

TEST(Complex, CorruptedStencilBreaksExactness)
{
  const auto g = cube(2);
  AssemblyOptions opt;
  opt.corrupt_curl_stencil = true;
  for (unsigned mask : {0u, 63u})
  {
    const auto ops = build_complex(g, BoundarySpec::from_mask(mask), MaterialField::identity(g), opt);
    EXPECT_FALSE(all_entries_zero(multiply(ops.curl_pair->A(), ops.grad_pair->A())));
  }
}

TEST(Complex, GradientOfConstantVanishes)
{
  const auto g = cube(3);
  const auto ops = build_complex(g, BoundarySpec::neumann(), MaterialField::identity(g));
  const sparse::Vector ones(ops.num_free_nodes(), 1.0);
  for (double v : spmv(ops.grad_pair->A(), ones))
  {
    EXPECT_EQ(v, 0.0);
  }
  ASSERT_TRUE(ops.grad_pair->kernel_hint());
}

TEST(Complex, LumpedMassesSumToBoxVolume)
{
  const auto g = build_grid({3, 4, 5}, {1.0, 2.0, 0.5});
  const auto ops = build_complex(g, BoundarySpec::neumann(), MaterialField::identity(g));
  auto total = [](const DiagonalWeight &w)
  {
    double s = 0.0;
    for (double v : w.entries())
    {
      s += v;
    }
    return s;
  };
  EXPECT_NEAR(total(ops.grad_pair->X().weight), 1.0, 1e-14);
  EXPECT_NEAR(total(ops.grad_pair->Y().weight), 3.0, 1e-14);
  EXPECT_NEAR(total(ops.curl_pair->Y().weight), 3.0, 1e-14);
  EXPECT_NEAR(total(ops.div_pair->Y().weight), 1.0, 1e-14);
}

TEST(Complex, Adjointness)
{
  const auto g = cube(2);
  EXPECT_LE(check_adjointness(build_complex(g, BoundarySpec::dirichlet(), MaterialField::identity(g)), 100, 1), 1e-12);
  EXPECT_LE(check_adjointness(build_complex(g, BoundarySpec::dirichlet(), MaterialField::scalar(g, 4.0)), 100, 2),
            1e-12);
  EXPECT_LE(check_adjointness(build_complex(g, BoundarySpec::from_mask(1), MaterialField::identity(g)), 100, 3), 1e-12);
  const auto g2 = build_grid({4, 3, 5}, {1.0, 2.0, 3.0});
  EXPECT_LE(check_adjointness(build_complex(g2, BoundarySpec::from_mask(37), MaterialField::random(g2, 0.5, 2.0, 4)),
                              100, 5),
            1e-12);
}

TEST(Complex, VectorLaplacianIdentity)
{
  EXPECT_EQ(check_vector_laplacian_identity(cube(2)), 0.0);
  EXPECT_LE(check_vector_laplacian_identity(cube(3)), 1e-12);
  EXPECT_LE(check_vector_laplacian_identity(build_grid({5, 5, 5}, {2.0, 2.0, 2.0})), 1e-12);
  EXPECT_THROW(check_vector_laplacian_identity(build_grid({4, 2, 2}, {1, 1, 1})), ValidationError);
}

TEST(Material, ScalarBounds)
{
  const auto g = cube(2);
  const auto m = MaterialField::scalar(g, 4.0);
  EXPECT_DOUBLE_EQ(m.eps_under(), 0.5);
  EXPECT_DOUBLE_EQ(m.eps_over(), 2.0);
  EXPECT_DOUBLE_EQ(m.eps_hat(), 2.0);
  const auto s = MaterialField::scalar(g, 0.25);
  EXPECT_DOUBLE_EQ(s.eps_under(), 2.0);
  EXPECT_DOUBLE_EQ(s.eps_over(), 0.5);
  EXPECT_DOUBLE_EQ(s.eps_hat(), 2.0);
  EXPECT_THROW(MaterialField::scalar(g, 0.0), ValidationError);
  EXPECT_THROW(MaterialField(g, std::vector<Diag3>(3, {1, 1, 1})), ValidationError);
}

TEST(Material, NormEquivalenceOnRandomFields)
{
  const auto g = build_grid({4, 4, 4}, {1, 1, 1});
  const auto m = MaterialField::random(g, 0.5, 2.0, 77);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (unsigned mask : {0u, 63u, 5u})
  {
    const auto ops = build_complex(g, BoundarySpec::from_mask(mask), m);
    for (int s = 0; s < 100; ++s)
    {
      sparse::Vector E(ops.num_free_edges());
      for (auto &e : E)
      {
        e = u(rng);
      }
      const double plain = ops.edge_volume.norm(E);
      const double weighted = ops.grad_pair->Y().weight.norm(E);
      EXPECT_LE(plain / m.eps_under(), weighted * (1 + 1e-14));
      EXPECT_LE(weighted, m.eps_over() * plain * (1 + 1e-14));
    }
  }
}

TEST(Material, EdgeAverageUsesAdjacentCells)
{
  const auto g = cube(2);
  std::vector<Diag3> eps(g.num_cells(), {1.0, 1.0, 1.0});
  eps[g.cell_index({0, 0, 0})] = {5.0, 7.0, 9.0};
  const MaterialField m(g, eps);
  const auto avg = m.edge_average();
  // x-edge at (0,0,0) touches only cell (0,0,0); x-edge at (0,1,1) touches four cells.
  EXPECT_DOUBLE_EQ(avg[g.edge_index(0, {0, 0, 0})], 5.0);
  EXPECT_DOUBLE_EQ(avg[g.edge_index(0, {0, 1, 1})], 2.0);
  EXPECT_DOUBLE_EQ(avg[g.edge_index(2, {1, 1, 0})], 3.0);
  const auto inv = m.face_inverse_average();
  EXPECT_DOUBLE_EQ(inv[g.face_index(1, {0, 1, 0})], 0.5 * (1.0 / 7.0 + 1.0));
}

TEST(Material, CsvRoundTrip)
{
  const auto g = build_grid({2, 2, 3}, {1, 1, 1});
  const auto ref = MaterialField::random(g, 0.5, 2.0, 3);
  const std::string path = ::testing::TempDir() + "eps_roundtrip.csv";
  {
    std::ofstream out(path);
    out.precision(17);
    out << "i,j,k,eps1,eps2,eps3\n";
    for (std::size_t k = 0; k < 3; ++k)
    {
      for (std::size_t j = 0; j < 2; ++j)
      {
        for (std::size_t i = 0; i < 2; ++i)
        {
          const auto &e = ref.at(g.cell_index({i, j, k}));
          out << i << "," << j << "," << k << "," << e[0] << "," << e[1] << "," << e[2] << "\n";
        }
      }
    }
  }
  const auto m = MaterialField::from_csv(g, path);
  EXPECT_EQ(m.cells(), ref.cells());
  std::remove(path.c_str());
}

TEST(Material, CsvErrors)
{
  const auto g = cube(2);
  const std::string path = ::testing::TempDir() + "eps_bad.csv";
  {
    std::ofstream out(path);
    out << "0,0,0,1,1,1\n";
  }
  EXPECT_THROW(MaterialField::from_csv(g, path), ValidationError);
  {
    std::ofstream out(path);
    out << "0,0,0,1,1\n";
  }
  EXPECT_THROW(MaterialField::from_csv(g, path), ValidationError);
  {
    std::ofstream out(path);
    for (int c = 0; c < 8; ++c)
    {
      out << c % 2 << "," << (c / 2) % 2 << "," << c / 4 << ",1,1," << (c == 5 ? "-1" : "1") << "\n";
    }
  }
  EXPECT_THROW(MaterialField::from_csv(g, path), ValidationError);
  EXPECT_THROW(MaterialField::from_csv(g, path + ".missing"), ValidationError);
  std::remove(path.c_str());
}
