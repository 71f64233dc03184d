#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "maxcon/grid.hpp"
#include "maxcon/sparse.hpp"

namespace maxcon::derham
{

using Diag3 = std::array<double, 3>;

//
// Per-cell diagonal permittivity. Cells are numbered as in Grid3::cell_index.
//
class MaterialField
{
public:
  MaterialField(const Grid3 &grid, std::vector<Diag3> eps);

  static MaterialField identity(const Grid3 &grid) { return scalar(grid, 1.0); }
  static MaterialField scalar(const Grid3 &grid, double value);
  static MaterialField diagonal(const Grid3 &grid, const Diag3 &value);
  // Independent uniform draws in [lo, hi] for every cell and component.
  static MaterialField random(const Grid3 &grid, double lo, double hi, std::uint64_t seed);
  // Rows "i,j,k,eps1,eps2,eps3", one per cell in x-fastest order; a leading header row is
  // skipped when its first field is not numeric.
  static MaterialField from_csv(const Grid3 &grid, const std::string &path);

  const Grid3 &grid() const { return grid_; }
  const std::vector<Diag3> &cells() const { return eps_; }
  const Diag3 &at(std::size_t cell) const { return eps_[cell]; }
  bool is_identity() const;

  double eps_under() const { return 1.0 / std::sqrt(min_); }
  double eps_over() const { return std::sqrt(max_); }
  double eps_hat() const { return std::max(eps_under(), eps_over()); }

  // Arithmetic mean of the matching component over the (up to 4) cells around each edge, for
  // every edge of the grid.
  sparse::Vector edge_average() const;
  // Arithmetic mean of the inverse normal component over the (up to 2) cells beside each face.
  sparse::Vector face_inverse_average() const;

private:
  Grid3 grid_;
  std::vector<Diag3> eps_;
  double min_ = 1.0;
  double max_ = 1.0;
};

}  // namespace maxcon::derham
