#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace maxcon::sparse
{

using Vector = std::vector<double>;

struct Triplet
{
  std::size_t row;
  std::size_t col;
  double value;
};

//
// Compressed-sparse-row matrix in canonical form: column indices strictly increasing within
// each row, duplicates summed at construction. Explicit zeros produced by summation are kept
// so that cancellation in products can be inspected entry by entry; call pruned() to drop
// them. Immutable after construction.
//
class SparseMatrix
{
public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), row_offsets_(rows + 1, 0) {}

  // Builds the canonical CSR form; throws ValidationError on out-of-range indices.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets);

  // Adopts raw CSR arrays after validating every structural invariant.
  static SparseMatrix from_csr(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                               std::vector<std::size_t> col_indices, std::vector<double> values);

  static SparseMatrix identity(std::size_t n);
  static SparseMatrix zero(std::size_t rows, std::size_t cols) { return SparseMatrix(rows, cols); }
  static SparseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return values_.size(); }

  const std::vector<std::size_t> &row_offsets() const { return row_offsets_; }
  const std::vector<std::size_t> &col_indices() const { return col_indices_; }
  const std::vector<double> &values() const { return values_; }

  // Entry lookup by binary search within the row; 0 for structural zeros.
  double coeff(std::size_t row, std::size_t col) const;

  SparseMatrix transpose() const;
  SparseMatrix pruned(double threshold = 0.0) const;

  // diag(left) * this * diag(right); either span may be empty to mean identity.
  SparseMatrix scaled(std::span<const double> left, std::span<const double> right) const;

  // Restricts to the given row and column index lists (both ascending, no duplicates).
  SparseMatrix submatrix(std::span<const std::size_t> row_ids, std::span<const std::size_t> col_ids) const;

  double frobenius_norm() const;
  double max_abs() const;

  bool operator==(const SparseMatrix &other) const = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

// y = A x; throws ValidationError when len(x) != A.cols.
Vector spmv(const SparseMatrix &A, std::span<const double> x);
void spmv(const SparseMatrix &A, std::span<const double> x, std::span<double> y);

// y = A^T x without forming the transpose.
void spmv_transpose(const SparseMatrix &A, std::span<const double> x, std::span<double> y);

SparseMatrix multiply(const SparseMatrix &A, const SparseMatrix &B);
SparseMatrix add(const SparseMatrix &A, const SparseMatrix &B, double alpha = 1.0, double beta = 1.0);

// Vertical concatenation [A; B] (same column count).
SparseMatrix vstack(const SparseMatrix &A, const SparseMatrix &B);

//
// Positive diagonal weight defining the inner product <u,v>_W = sum_i w_i u_i v_i.
//
class DiagonalWeight
{
public:
  DiagonalWeight() = default;
  explicit DiagonalWeight(Vector entries);
  static DiagonalWeight ones(std::size_t n) { return DiagonalWeight(Vector(n, 1.0)); }

  std::size_t size() const { return entries_.size(); }
  const Vector &entries() const { return entries_; }
  double operator[](std::size_t i) const { return entries_[i]; }

  double dot(std::span<const double> u, std::span<const double> v) const;
  double norm(std::span<const double> u) const;

  void apply(std::span<const double> u, std::span<double> out) const;          // out = W u
  void apply_inverse(std::span<const double> u, std::span<double> out) const;  // out = W^-1 u

  DiagonalWeight concat(const DiagonalWeight &other) const;

private:
  Vector entries_;
};

double dot(std::span<const double> u, std::span<const double> v);
double norm2(std::span<const double> u);
void axpy(double alpha, std::span<const double> x, std::span<double> y);  // y += alpha x

}  // namespace maxcon::sparse
