#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "maxcon/dual_pair.hpp"
#include "maxcon/grid.hpp"
#include "maxcon/material.hpp"

namespace maxcon::derham
{

using dual::DualPair;
using sparse::DiagonalWeight;
using sparse::SparseMatrix;

struct AssemblyOptions
{
  // Flips the sign of a single curl stencil entry. Only for exercising the self test.
  bool corrupt_curl_stencil = false;
};

// Global ids of the DOFs that survive the Gamma_t removal, ascending.
struct DofMaps
{
  std::vector<std::size_t> nodes;
  std::vector<std::size_t> edges;
  std::vector<std::size_t> faces;
};

//
// The discrete complex  nodes --grad--> edges --curl--> faces --div--> cells  restricted to the
// DOFs free of Gamma_t. Lumped masses:
//   nodes  dual cell volume
//   edges  h_d times the dual face area, scaled by the edge-averaged eps_d
//   faces  dual length along the normal times the face area
//   cells  h_x h_y h_z
// curl_pair carries grad_pair as kernel hint and div_pair carries curl_pair. When Gamma_t is
// empty grad_pair carries the constant pair, spanning its kernel.
//
struct ComplexOperators
{
  Grid3 grid;
  BoundarySpec bc;
  std::shared_ptr<const MaterialField> material;
  DofMaps dofs;

  std::shared_ptr<const DualPair> grad_pair;
  std::shared_ptr<const DualPair> curl_pair;
  std::shared_ptr<const DualPair> div_pair;

  // grad from every node onto the free edges; Gamma_t node values act as boundary data.
  SparseMatrix grad_all_nodes;
  // Gamma_t component of every node, -1 for free nodes.
  std::vector<int> node_component;
  int gamma_t_components = 0;

  // Free-face masses weighted with the face-averaged inverse permittivity.
  DiagonalWeight face_inverse_eps;
  // Unweighted free-edge masses (L2 without eps).
  DiagonalWeight edge_volume;

  std::size_t num_free_nodes() const { return dofs.nodes.size(); }
  std::size_t num_free_edges() const { return dofs.edges.size(); }
  std::size_t num_free_faces() const { return dofs.faces.size(); }
};

ComplexOperators build_complex(const Grid3 &grid, const BoundarySpec &bc, const MaterialField &material,
                               const AssemblyOptions &options = {});

// Unrestricted incidence operators scaled by 1/h.
SparseMatrix full_gradient(const Grid3 &grid);
SparseMatrix full_curl(const Grid3 &grid, bool corrupt = false);
SparseMatrix full_divergence(const Grid3 &grid);

// Free-DOF predicates.
bool node_free(const Grid3 &grid, const BoundarySpec &bc, const Index3 &p);
bool edge_free(const Grid3 &grid, const BoundarySpec &bc, int dir, const Index3 &p);
bool face_free(const Grid3 &grid, const BoundarySpec &bc, int normal, const Index3 &p);

// Max over the three pairs and `samples` seeded draws of |<Ax,y>_Y - <x,A*y>_X| / (|x|_X |y|_Y |A|),
// |A| being the Frobenius norm of W_Y^1/2 A W_X^-1/2.
double check_adjointness(const ComplexOperators &ops, std::size_t samples, std::uint64_t seed);

// Gamma_t = Gamma, eps = id, uniform spacing. Compares W_e^-1 (curl^T W_f curl + W_e grad W_n^-1
// grad^T W_e) with the componentwise 7-point Laplacian on free edges, entry by entry, and
// returns the largest deviation times h^2.
double check_vector_laplacian_identity(const Grid3 &grid);

}  // namespace maxcon::derham
