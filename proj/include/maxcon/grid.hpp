#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace maxcon::derham
{

using Index3 = std::array<std::size_t, 3>;

//
// Axis-aligned box [0,Lx] x [0,Ly] x [0,Lz] split into nx x ny x nz cells.
//
// DOF numbering is x-fastest lexicographic within each entity family. Edges and faces are
// orientation-major: all x-oriented edges first (resp. faces with x normal), then y, then z.
// An edge of direction d is identified by its lower endpoint; a face of normal d by its
// lowest corner.
//
struct Grid3
{
  Index3 n{};
  std::array<double, 3> L{};

  std::array<double, 3> h() const { return {L[0] / double(n[0]), L[1] / double(n[1]), L[2] / double(n[2])}; }
  double diameter() const;

  std::size_t num_nodes() const { return (n[0] + 1) * (n[1] + 1) * (n[2] + 1); }
  std::size_t num_cells() const { return n[0] * n[1] * n[2]; }
  std::size_t num_edges() const { return edge_count(0) + edge_count(1) + edge_count(2); }
  std::size_t num_faces() const { return face_count(0) + face_count(1) + face_count(2); }

  // Index extents of the entity family.
  Index3 edge_extent(int dir) const;
  Index3 face_extent(int normal) const;
  std::size_t edge_count(int dir) const;
  std::size_t face_count(int normal) const;

  std::size_t node_index(const Index3 &p) const { return p[0] + (n[0] + 1) * (p[1] + (n[1] + 1) * p[2]); }
  std::size_t cell_index(const Index3 &p) const { return p[0] + n[0] * (p[1] + n[1] * p[2]); }
  std::size_t edge_index(int dir, const Index3 &p) const;
  std::size_t face_index(int normal, const Index3 &p) const;

  Index3 node_position(std::size_t id) const;
  // Returns the direction and writes the lower endpoint.
  int edge_position(std::size_t id, Index3 &p) const;
  int face_position(std::size_t id, Index3 &p) const;

  // Length of the dual cell of grid point index i along axis d: h at interior points, h/2 on
  // the boundary.
  double dual_length(int d, std::size_t i) const;
  bool on_boundary(int d, std::size_t i) const { return i == 0 || i == n[d]; }
};

// Throws ValidationError unless every count >= 2 and every length > 0.
Grid3 build_grid(const Index3 &n, const std::array<double, 3> &L);

enum class FaceBc
{
  tangential,  // face belongs to Gamma_t
  normal       // face belongs to Gamma_n
};

// Box faces in the fixed order x_min, x_max, y_min, y_max, z_min, z_max.
inline constexpr int box_face(int axis, bool upper) { return 2 * axis + (upper ? 1 : 0); }

struct BoundarySpec
{
  std::array<FaceBc, 6> faces{FaceBc::tangential, FaceBc::tangential, FaceBc::tangential,
                              FaceBc::tangential, FaceBc::tangential, FaceBc::tangential};

  static BoundarySpec all(FaceBc bc);
  static BoundarySpec dirichlet() { return all(FaceBc::tangential); }
  static BoundarySpec neumann() { return all(FaceBc::normal); }
  // Bit f set means face f is tangential; there are 64 specs.
  static BoundarySpec from_mask(unsigned mask);
  static BoundarySpec parse(const std::vector<std::string> &labels);

  bool tangential(int face) const { return faces[static_cast<std::size_t>(face)] == FaceBc::tangential; }
  bool all_tangential() const;
  bool all_normal() const;
  bool full() const { return all_tangential() || all_normal(); }
  unsigned mask() const;

  // Gamma_t and Gamma_n interchanged.
  BoundarySpec swapped() const;

  std::array<std::string, 6> labels() const;

  // Connected components of Gamma_t as a union of closed faces: component id per box face,
  // -1 for normal faces. Two tangential faces touch unless they are opposite.
  std::array<int, 6> tangential_components(int &count) const;

  bool operator==(const BoundarySpec &) const = default;
};

std::string to_string(FaceBc bc);

}  // namespace maxcon::derham
