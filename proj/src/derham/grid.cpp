#include "maxcon/grid.hpp"

#include <cmath>
#include <numeric>

#include "maxcon/error.hpp"

namespace maxcon::derham
{

double Grid3::diameter() const
{
  return std::sqrt(L[0] * L[0] + L[1] * L[1] + L[2] * L[2]);
}

Index3 Grid3::edge_extent(int dir) const
{
  Index3 e{n[0] + 1, n[1] + 1, n[2] + 1};
  e[static_cast<std::size_t>(dir)] -= 1;
  return e;
}

Index3 Grid3::face_extent(int normal) const
{
  Index3 e = n;
  e[static_cast<std::size_t>(normal)] += 1;
  return e;
}

std::size_t Grid3::edge_count(int dir) const
{
  const auto e = edge_extent(dir);
  return e[0] * e[1] * e[2];
}

std::size_t Grid3::face_count(int normal) const
{
  const auto e = face_extent(normal);
  return e[0] * e[1] * e[2];
}

std::size_t Grid3::edge_index(int dir, const Index3 &p) const
{
  std::size_t offset = 0;
  for (int d = 0; d < dir; ++d)
  {
    offset += edge_count(d);
  }
  const auto e = edge_extent(dir);
  return offset + p[0] + e[0] * (p[1] + e[1] * p[2]);
}

std::size_t Grid3::face_index(int normal, const Index3 &p) const
{
  std::size_t offset = 0;
  for (int d = 0; d < normal; ++d)
  {
    offset += face_count(d);
  }
  const auto e = face_extent(normal);
  return offset + p[0] + e[0] * (p[1] + e[1] * p[2]);
}

Index3 Grid3::node_position(std::size_t id) const
{
  const auto nx = n[0] + 1;
  const auto ny = n[1] + 1;
  return {id % nx, (id / nx) % ny, id / (nx * ny)};
}

namespace
{

int decode(std::size_t id, const std::array<std::size_t, 3> &counts, const std::array<Index3, 3> &extents, Index3 &p)
{
  for (int d = 0; d < 3; ++d)
  {
    if (id < counts[static_cast<std::size_t>(d)])
    {
      const auto &e = extents[static_cast<std::size_t>(d)];
      p = {id % e[0], (id / e[0]) % e[1], id / (e[0] * e[1])};
      return d;
    }
    id -= counts[static_cast<std::size_t>(d)];
  }
  throw ValidationError("entity id out of range");
}

}  // namespace

int Grid3::edge_position(std::size_t id, Index3 &p) const
{
  return decode(id, {edge_count(0), edge_count(1), edge_count(2)}, {edge_extent(0), edge_extent(1), edge_extent(2)},
                p);
}

int Grid3::face_position(std::size_t id, Index3 &p) const
{
  return decode(id, {face_count(0), face_count(1), face_count(2)}, {face_extent(0), face_extent(1), face_extent(2)},
                p);
}

double Grid3::dual_length(int d, std::size_t i) const
{
  const double hd = L[static_cast<std::size_t>(d)] / double(n[static_cast<std::size_t>(d)]);
  return on_boundary(d, i) ? 0.5 * hd : hd;
}

Grid3 build_grid(const Index3 &n, const std::array<double, 3> &L)
{
  for (int d = 0; d < 3; ++d)
  {
    if (n[static_cast<std::size_t>(d)] < 2)
    {
      throw ValidationError("grid needs at least 2 cells per axis, got " + std::to_string(n[static_cast<std::size_t>(d)]));
    }
    if (!(L[static_cast<std::size_t>(d)] > 0.0) || !std::isfinite(L[static_cast<std::size_t>(d)]))
    {
      throw ValidationError("box edge lengths must be positive and finite");
    }
  }
  return Grid3{n, L};
}

BoundarySpec BoundarySpec::all(FaceBc bc)
{
  BoundarySpec s;
  s.faces.fill(bc);
  return s;
}

BoundarySpec BoundarySpec::from_mask(unsigned mask)
{
  if (mask >= 64)
  {
    throw ValidationError("boundary mask must be below 64");
  }
  BoundarySpec s;
  for (int f = 0; f < 6; ++f)
  {
    s.faces[static_cast<std::size_t>(f)] = (mask >> f) & 1U ? FaceBc::tangential : FaceBc::normal;
  }
  return s;
}

BoundarySpec BoundarySpec::parse(const std::vector<std::string> &labels)
{
  if (labels.size() != 6)
  {
    throw ValidationError("boundary spec needs exactly 6 face labels, got " + std::to_string(labels.size()));
  }
  BoundarySpec s;
  for (std::size_t f = 0; f < 6; ++f)
  {
    if (labels[f] == "tangential")
    {
      s.faces[f] = FaceBc::tangential;
    }
    else if (labels[f] == "normal")
    {
      s.faces[f] = FaceBc::normal;
    }
    else
    {
      throw ValidationError("unknown face label '" + labels[f] + "' (expected tangential or normal)");
    }
  }
  return s;
}

bool BoundarySpec::all_tangential() const
{
  for (auto f : faces)
  {
    if (f != FaceBc::tangential)
    {
      return false;
    }
  }
  return true;
}

bool BoundarySpec::all_normal() const
{
  for (auto f : faces)
  {
    if (f != FaceBc::normal)
    {
      return false;
    }
  }
  return true;
}

unsigned BoundarySpec::mask() const
{
  unsigned m = 0;
  for (int f = 0; f < 6; ++f)
  {
    if (tangential(f))
    {
      m |= 1U << f;
    }
  }
  return m;
}

BoundarySpec BoundarySpec::swapped() const
{
  BoundarySpec s;
  for (std::size_t f = 0; f < 6; ++f)
  {
    s.faces[f] = faces[f] == FaceBc::tangential ? FaceBc::normal : FaceBc::tangential;
  }
  return s;
}

std::array<std::string, 6> BoundarySpec::labels() const
{
  std::array<std::string, 6> out;
  for (std::size_t f = 0; f < 6; ++f)
  {
    out[f] = to_string(faces[f]);
  }
  return out;
}

std::array<int, 6> BoundarySpec::tangential_components(int &count) const
{
  std::array<int, 6> parent{};
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int f)
  {
    while (parent[static_cast<std::size_t>(f)] != f)
    {
      f = parent[static_cast<std::size_t>(f)];
    }
    return f;
  };
  for (int a = 0; a < 6; ++a)
  {
    for (int b = a + 1; b < 6; ++b)
    {
      const bool opposite = a / 2 == b / 2;
      if (tangential(a) && tangential(b) && !opposite)
      {
        parent[static_cast<std::size_t>(find(b))] = find(a);
      }
    }
  }
  std::array<int, 6> root_id{-1, -1, -1, -1, -1, -1};
  std::array<int, 6> out{-1, -1, -1, -1, -1, -1};
  count = 0;
  for (int f = 0; f < 6; ++f)
  {
    if (!tangential(f))
    {
      continue;
    }
    const auto r = static_cast<std::size_t>(find(f));
    if (root_id[r] < 0)
    {
      root_id[r] = count++;
    }
    out[static_cast<std::size_t>(f)] = root_id[r];
  }
  return out;
}

std::string to_string(FaceBc bc)
{
  return bc == FaceBc::tangential ? "tangential" : "normal";
}

}  // namespace maxcon::derham
