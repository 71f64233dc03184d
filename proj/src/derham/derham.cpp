#include "maxcon/derham.hpp"

#include <cmath>
#include <random>

#include "maxcon/error.hpp"

namespace maxcon::derham
{

namespace
{

Index3 shifted(Index3 p, int axis, long delta)
{
  p[static_cast<std::size_t>(axis)] = static_cast<std::size_t>(static_cast<long>(p[static_cast<std::size_t>(axis)]) + delta);
  return p;
}

bool on_tangential_side(const Grid3 &grid, const BoundarySpec &bc, int axis, std::size_t i)
{
  return (i == 0 && bc.tangential(box_face(axis, false))) ||
         (i == grid.n[static_cast<std::size_t>(axis)] && bc.tangential(box_face(axis, true)));
}

}  // namespace

bool node_free(const Grid3 &grid, const BoundarySpec &bc, const Index3 &p)
{
  for (int a = 0; a < 3; ++a)
  {
    if (on_tangential_side(grid, bc, a, p[static_cast<std::size_t>(a)]))
    {
      return false;
    }
  }
  return true;
}

bool edge_free(const Grid3 &grid, const BoundarySpec &bc, int dir, const Index3 &p)
{
  for (int a = 0; a < 3; ++a)
  {
    if (a != dir && on_tangential_side(grid, bc, a, p[static_cast<std::size_t>(a)]))
    {
      return false;
    }
  }
  return true;
}

bool face_free(const Grid3 &grid, const BoundarySpec &bc, int normal, const Index3 &p)
{
  return !on_tangential_side(grid, bc, normal, p[static_cast<std::size_t>(normal)]);
}

SparseMatrix full_gradient(const Grid3 &grid)
{
  const auto h = grid.h();
  std::vector<sparse::Triplet> t;
  t.reserve(2 * grid.num_edges());
  for (std::size_t e = 0; e < grid.num_edges(); ++e)
  {
    Index3 p{};
    const int d = grid.edge_position(e, p);
    const double s = 1.0 / h[static_cast<std::size_t>(d)];
    t.push_back({e, grid.node_index(shifted(p, d, 1)), s});
    t.push_back({e, grid.node_index(p), -s});
  }
  return SparseMatrix::from_triplets(grid.num_edges(), grid.num_nodes(), std::move(t));
}

SparseMatrix full_curl(const Grid3 &grid, bool corrupt)
{
  const auto h = grid.h();
  std::vector<sparse::Triplet> t;
  t.reserve(4 * grid.num_faces());
  // Target of the fault switch: the z-face at (1,1,1), always interior.
  const std::size_t corrupt_face = corrupt ? grid.face_index(2, {1, 1, 1}) : grid.num_faces();
  for (std::size_t f = 0; f < grid.num_faces(); ++f)
  {
    Index3 p{};
    const int d = grid.face_position(f, p);
    const int a = (d + 1) % 3;
    const int b = (d + 2) % 3;
    const double ia = 1.0 / h[static_cast<std::size_t>(a)];
    const double ib = 1.0 / h[static_cast<std::size_t>(b)];
    t.push_back({f, grid.edge_index(b, shifted(p, a, 1)), ia});
    t.push_back({f, grid.edge_index(b, p), -ia});
    t.push_back({f, grid.edge_index(a, shifted(p, b, 1)), -ib});
    t.push_back({f, grid.edge_index(a, p), f == corrupt_face ? -ib : ib});
  }
  return SparseMatrix::from_triplets(grid.num_faces(), grid.num_edges(), std::move(t));
}

SparseMatrix full_divergence(const Grid3 &grid)
{
  const auto h = grid.h();
  std::vector<sparse::Triplet> t;
  t.reserve(6 * grid.num_cells());
  for (std::size_t k = 0; k < grid.n[2]; ++k)
  {
    for (std::size_t j = 0; j < grid.n[1]; ++j)
    {
      for (std::size_t i = 0; i < grid.n[0]; ++i)
      {
        const Index3 p{i, j, k};
        const auto c = grid.cell_index(p);
        for (int d = 0; d < 3; ++d)
        {
          const double s = 1.0 / h[static_cast<std::size_t>(d)];
          t.push_back({c, grid.face_index(d, shifted(p, d, 1)), s});
          t.push_back({c, grid.face_index(d, p), -s});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(grid.num_cells(), grid.num_faces(), std::move(t));
}

ComplexOperators build_complex(const Grid3 &grid, const BoundarySpec &bc, const MaterialField &material,
                               const AssemblyOptions &options)
{
  if (material.grid().n != grid.n || material.grid().L != grid.L)
  {
    throw ValidationError("material field was built for a different grid");
  }
  ComplexOperators ops;
  ops.grid = grid;
  ops.bc = bc;
  ops.material = std::make_shared<const MaterialField>(material);
  const auto h = grid.h();

  int components = 0;
  const auto face_component = bc.tangential_components(components);
  ops.gamma_t_components = components;
  ops.node_component.assign(grid.num_nodes(), -1);

  sparse::Vector node_w;
  for (std::size_t id = 0; id < grid.num_nodes(); ++id)
  {
    const auto p = grid.node_position(id);
    if (node_free(grid, bc, p))
    {
      ops.dofs.nodes.push_back(id);
      node_w.push_back(grid.dual_length(0, p[0]) * grid.dual_length(1, p[1]) * grid.dual_length(2, p[2]));
      continue;
    }
    for (int a = 0; a < 3 && ops.node_component[id] < 0; ++a)
    {
      const auto i = p[static_cast<std::size_t>(a)];
      if (i == 0 && bc.tangential(box_face(a, false)))
      {
        ops.node_component[id] = face_component[static_cast<std::size_t>(box_face(a, false))];
      }
      else if (i == grid.n[static_cast<std::size_t>(a)] && bc.tangential(box_face(a, true)))
      {
        ops.node_component[id] = face_component[static_cast<std::size_t>(box_face(a, true))];
      }
    }
  }

  const auto eps_edge = material.edge_average();
  sparse::Vector edge_w;
  sparse::Vector edge_vol;
  for (std::size_t id = 0; id < grid.num_edges(); ++id)
  {
    Index3 p{};
    const int d = grid.edge_position(id, p);
    if (!edge_free(grid, bc, d, p))
    {
      continue;
    }
    double vol = h[static_cast<std::size_t>(d)];
    for (int a = 0; a < 3; ++a)
    {
      if (a != d)
      {
        vol *= grid.dual_length(a, p[static_cast<std::size_t>(a)]);
      }
    }
    ops.dofs.edges.push_back(id);
    edge_vol.push_back(vol);
    edge_w.push_back(vol * eps_edge[id]);
  }

  const auto inv_eps_face = material.face_inverse_average();
  sparse::Vector face_w;
  sparse::Vector face_w_inv_eps;
  for (std::size_t id = 0; id < grid.num_faces(); ++id)
  {
    Index3 p{};
    const int d = grid.face_position(id, p);
    if (!face_free(grid, bc, d, p))
    {
      continue;
    }
    double vol = grid.dual_length(d, p[static_cast<std::size_t>(d)]);
    for (int a = 0; a < 3; ++a)
    {
      if (a != d)
      {
        vol *= h[static_cast<std::size_t>(a)];
      }
    }
    ops.dofs.faces.push_back(id);
    face_w.push_back(vol);
    face_w_inv_eps.push_back(vol * inv_eps_face[id]);
  }

  std::vector<std::size_t> all_cells(grid.num_cells());
  std::vector<std::size_t> all_nodes(grid.num_nodes());
  for (std::size_t i = 0; i < all_cells.size(); ++i)
  {
    all_cells[i] = i;
  }
  for (std::size_t i = 0; i < all_nodes.size(); ++i)
  {
    all_nodes[i] = i;
  }
  const sparse::Vector cell_w(grid.num_cells(), h[0] * h[1] * h[2]);

  const auto G = full_gradient(grid);
  const auto C = full_curl(grid, options.corrupt_curl_stencil);
  const auto D = full_divergence(grid);

  const DiagonalWeight W_n(node_w);
  const DiagonalWeight W_e(edge_w);
  const DiagonalWeight W_f(face_w);

  std::shared_ptr<const DualPair> constants;
  if (components == 0)
  {
    double total = 0.0;
    for (double w : node_w)
    {
      total += w;
    }
    constants = std::make_shared<const DualPair>(
        SparseMatrix::from_triplets(node_w.size(), 1,
                                    [&]
                                    {
                                      std::vector<sparse::Triplet> t;
                                      for (std::size_t i = 0; i < node_w.size(); ++i)
                                      {
                                        t.push_back({i, 0, 1.0});
                                      }
                                      return t;
                                    }()),
        dual::WeightedSpace{DiagonalWeight(sparse::Vector{total})}, dual::WeightedSpace{W_n});
  }

  ops.grad_pair = std::make_shared<const DualPair>(G.submatrix(ops.dofs.edges, ops.dofs.nodes),
                                                   dual::WeightedSpace{W_n}, dual::WeightedSpace{W_e}, constants);
  ops.curl_pair = std::make_shared<const DualPair>(C.submatrix(ops.dofs.faces, ops.dofs.edges),
                                                   dual::WeightedSpace{W_e}, dual::WeightedSpace{W_f}, ops.grad_pair);
  ops.div_pair = std::make_shared<const DualPair>(D.submatrix(all_cells, ops.dofs.faces), dual::WeightedSpace{W_f},
                                                  dual::WeightedSpace{DiagonalWeight(cell_w)}, ops.curl_pair);
  ops.grad_all_nodes = G.submatrix(ops.dofs.edges, all_nodes);
  ops.face_inverse_eps = DiagonalWeight(face_w_inv_eps);
  ops.edge_volume = DiagonalWeight(edge_vol);
  return ops;
}

double check_adjointness(const ComplexOperators &ops, std::size_t samples, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = 0.0;
  for (const auto *pair : {ops.grad_pair.get(), ops.curl_pair.get(), ops.div_pair.get()})
  {
    const auto &wx = pair->X().weight;
    const auto &wy = pair->Y().weight;
    sparse::Vector sx(wx.size());
    sparse::Vector sy(wy.size());
    for (std::size_t i = 0; i < sx.size(); ++i)
    {
      sx[i] = 1.0 / std::sqrt(wx[i]);
    }
    for (std::size_t i = 0; i < sy.size(); ++i)
    {
      sy[i] = std::sqrt(wy[i]);
    }
    const double norm_A = pair->A().scaled(sy, sx).frobenius_norm();
    if (norm_A == 0.0)
    {
      continue;
    }
    sparse::Vector x(pair->X().dim());
    sparse::Vector y(pair->Y().dim());
    sparse::Vector Ax(y.size());
    sparse::Vector Asy(x.size());
    for (std::size_t s = 0; s < samples; ++s)
    {
      for (auto &v : x)
      {
        v = dist(rng);
      }
      for (auto &v : y)
      {
        v = dist(rng);
      }
      pair->apply(x, Ax);
      pair->apply_adjoint(y, Asy);
      const double dev = std::abs(wy.dot(Ax, y) - wx.dot(x, Asy));
      worst = std::max(worst, dev / (wx.norm(x) * wy.norm(y) * norm_A));
    }
  }
  return worst;
}

double check_vector_laplacian_identity(const Grid3 &grid)
{
  const auto h = grid.h();
  for (int d = 1; d < 3; ++d)
  {
    if (std::abs(h[static_cast<std::size_t>(d)] - h[0]) > 1e-12 * h[0])
    {
      throw ValidationError("vector Laplacian identity needs uniform spacing");
    }
  }
  const auto bc = BoundarySpec::dirichlet();
  const auto ops = build_complex(grid, bc, MaterialField::identity(grid));
  const auto &grad = ops.grad_pair->A();
  const auto &curl = ops.curl_pair->A();
  const auto &wn = ops.grad_pair->X().weight.entries();
  const auto &we = ops.grad_pair->Y().weight.entries();
  const auto &wf = ops.curl_pair->Y().weight.entries();

  sparse::Vector inv_wn(wn.size());
  sparse::Vector inv_we(we.size());
  for (std::size_t i = 0; i < wn.size(); ++i)
  {
    inv_wn[i] = 1.0 / wn[i];
  }
  for (std::size_t i = 0; i < we.size(); ++i)
  {
    inv_we[i] = 1.0 / we[i];
  }
  const auto rot_rot = multiply(curl.transpose().scaled({}, wf), curl);
  const auto grad_div = multiply(grad.scaled(we, inv_wn), grad.transpose().scaled({}, we));
  const auto K = add(rot_rot, grad_div).scaled(inv_we, {});

  // Free-edge position by global edge id.
  std::vector<long> local(grid.num_edges(), -1);
  for (std::size_t i = 0; i < ops.dofs.edges.size(); ++i)
  {
    local[ops.dofs.edges[i]] = static_cast<long>(i);
  }
  const double s = 1.0 / (h[0] * h[0]);
  std::vector<sparse::Triplet> t;
  for (std::size_t row = 0; row < ops.dofs.edges.size(); ++row)
  {
    Index3 p{};
    const int c = grid.edge_position(ops.dofs.edges[row], p);
    double diag = 0.0;
    // Along the component: a second difference through each free endpoint node.
    if (node_free(grid, bc, shifted(p, c, 1)))
    {
      diag += s;
      t.push_back({row, static_cast<std::size_t>(local[grid.edge_index(c, shifted(p, c, 1))]), -s});
    }
    if (node_free(grid, bc, p))
    {
      diag += s;
      t.push_back({row, static_cast<std::size_t>(local[grid.edge_index(c, shifted(p, c, -1))]), -s});
    }
    // Across: full second difference, removed neighbours count as zero.
    const auto ext = grid.edge_extent(c);
    for (int d = 0; d < 3; ++d)
    {
      if (d == c)
      {
        continue;
      }
      diag += 2.0 * s;
      for (long step : {-1L, 1L})
      {
        const long i = static_cast<long>(p[static_cast<std::size_t>(d)]) + step;
        if (i < 0 || i >= static_cast<long>(ext[static_cast<std::size_t>(d)]))
        {
          continue;
        }
        const long col = local[grid.edge_index(c, shifted(p, d, step))];
        if (col >= 0)
        {
          t.push_back({row, static_cast<std::size_t>(col), -s});
        }
      }
    }
    t.push_back({row, row, diag});
  }
  const auto L = SparseMatrix::from_triplets(K.rows(), K.cols(), std::move(t));
  return add(K, L, 1.0, -1.0).max_abs() * h[0] * h[0];
}

}  // namespace maxcon::derham
