#include "maxcon/material.hpp"

#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "maxcon/error.hpp"

namespace maxcon::derham
{

MaterialField::MaterialField(const Grid3 &grid, std::vector<Diag3> eps) : grid_(grid), eps_(std::move(eps))
{
  if (eps_.size() != grid_.num_cells())
  {
    throw ValidationError("material field has " + std::to_string(eps_.size()) + " cells, grid has " +
                          std::to_string(grid_.num_cells()));
  }
  min_ = std::numeric_limits<double>::infinity();
  max_ = 0.0;
  for (const auto &e : eps_)
  {
    for (double v : e)
    {
      if (!(v > 0.0) || !std::isfinite(v))
      {
        throw ValidationError("permittivity entries must be positive and finite");
      }
      min_ = std::min(min_, v);
      max_ = std::max(max_, v);
    }
  }
}

MaterialField MaterialField::scalar(const Grid3 &grid, double value)
{
  return diagonal(grid, {value, value, value});
}

MaterialField MaterialField::diagonal(const Grid3 &grid, const Diag3 &value)
{
  return MaterialField(grid, std::vector<Diag3>(grid.num_cells(), value));
}

MaterialField MaterialField::random(const Grid3 &grid, double lo, double hi, std::uint64_t seed)
{
  if (!(lo > 0.0) || !(hi >= lo))
  {
    throw ValidationError("random permittivity range must satisfy 0 < lo <= hi");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<Diag3> eps(grid.num_cells());
  for (auto &e : eps)
  {
    for (auto &v : e)
    {
      v = dist(rng);
    }
  }
  return MaterialField(grid, std::move(eps));
}

namespace
{

std::vector<std::string> split_csv(const std::string &line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ','))
  {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  return out;
}

bool parse_double(const std::string &s, double &out)
{
  try
  {
    std::size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  }
  catch (const std::exception &)
  {
    return false;
  }
}

}  // namespace

MaterialField MaterialField::from_csv(const Grid3 &grid, const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ValidationError("cannot open permittivity file " + path);
  }
  std::vector<Diag3> eps(grid.num_cells());
  std::vector<bool> seen(grid.num_cells(), false);
  std::string line;
  std::size_t line_no = 0;
  std::size_t rows = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos)
    {
      continue;
    }
    const auto fields = split_csv(line);
    double probe = 0.0;
    if (rows == 0 && line_no == 1 && !fields.empty() && !parse_double(fields[0], probe))
    {
      continue;
    }
    if (fields.size() != 6)
    {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": expected 6 fields");
    }
    std::array<double, 6> v{};
    for (std::size_t c = 0; c < 6; ++c)
    {
      if (!parse_double(fields[c], v[c]))
      {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": bad number '" + fields[c] + "'");
      }
    }
    Index3 p{};
    for (std::size_t d = 0; d < 3; ++d)
    {
      if (v[d] < 0 || v[d] != std::floor(v[d]) || v[d] >= double(grid.n[d]))
      {
        throw ValidationError(path + ":" + std::to_string(line_no) + ": cell index out of range");
      }
      p[d] = static_cast<std::size_t>(v[d]);
    }
    const auto id = grid.cell_index(p);
    if (seen[id])
    {
      throw ValidationError(path + ":" + std::to_string(line_no) + ": duplicate cell");
    }
    seen[id] = true;
    eps[id] = {v[3], v[4], v[5]};
    ++rows;
  }
  if (rows != grid.num_cells())
  {
    throw ValidationError(path + ": expected " + std::to_string(grid.num_cells()) + " cell rows, got " +
                          std::to_string(rows));
  }
  return MaterialField(grid, std::move(eps));
}

bool MaterialField::is_identity() const
{
  return min_ == 1.0 && max_ == 1.0;
}

sparse::Vector MaterialField::edge_average() const
{
  const auto &g = grid_;
  sparse::Vector out(g.num_edges());
  for (std::size_t id = 0; id < out.size(); ++id)
  {
    Index3 p{};
    const int d = g.edge_position(id, p);
    const int a = (d + 1) % 3;
    const int b = (d + 2) % 3;
    double sum = 0.0;
    int count = 0;
    for (int sa = -1; sa <= 0; ++sa)
    {
      for (int sb = -1; sb <= 0; ++sb)
      {
        const auto ia = static_cast<long>(p[a]) + sa;
        const auto ib = static_cast<long>(p[b]) + sb;
        if (ia < 0 || ib < 0 || ia >= long(g.n[a]) || ib >= long(g.n[b]))
        {
          continue;
        }
        Index3 c = p;
        c[a] = static_cast<std::size_t>(ia);
        c[b] = static_cast<std::size_t>(ib);
        sum += eps_[g.cell_index(c)][d];
        ++count;
      }
    }
    out[id] = sum / count;
  }
  return out;
}

sparse::Vector MaterialField::face_inverse_average() const
{
  const auto &g = grid_;
  sparse::Vector out(g.num_faces());
  for (std::size_t id = 0; id < out.size(); ++id)
  {
    Index3 p{};
    const int d = g.face_position(id, p);
    double sum = 0.0;
    int count = 0;
    for (int s = -1; s <= 0; ++s)
    {
      const auto i = static_cast<long>(p[d]) + s;
      if (i < 0 || i >= long(g.n[d]))
      {
        continue;
      }
      Index3 c = p;
      c[d] = static_cast<std::size_t>(i);
      sum += 1.0 / eps_[g.cell_index(c)][d];
      ++count;
    }
    out[id] = sum / count;
  }
  return out;
}

}  // namespace maxcon::derham
