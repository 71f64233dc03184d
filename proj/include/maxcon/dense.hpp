#pragma once

#include <cstddef>
#include <optional>

#include <Eigen/Core>

#include "maxcon/sparse.hpp"

namespace maxcon::dense
{

using Matrix = Eigen::MatrixXd;
using ColVector = Eigen::VectorXd;

inline constexpr std::size_t default_dense_cap = 2000;

struct EighResult
{
  ColVector eigenvalues;  // ascending
  Matrix eigenvectors;    // columns, B-orthonormal
};

// Solves A v = lambda B v for symmetric A and SPD B (identity when absent).
// Throws DenseCapError above `cap`, ValidationError when B is not SPD.
EighResult dense_eigh(const Matrix &A, const std::optional<Matrix> &B = std::nullopt,
                      std::size_t cap = default_dense_cap);

// Singular values, descending.
ColVector singular_values(const Matrix &A, std::size_t cap = default_dense_cap);

Matrix to_dense(const sparse::SparseMatrix &A);
Matrix diagonal(const sparse::DiagonalWeight &W);

}  // namespace maxcon::dense
