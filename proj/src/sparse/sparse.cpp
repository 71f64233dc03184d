#include "maxcon/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "maxcon/error.hpp"

namespace maxcon::sparse
{

SparseMatrix SparseMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> triplets)
{
  for (const auto &t : triplets)
  {
    if (t.row >= rows || t.col >= cols)
    {
      throw ValidationError("triplet (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                            ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    }
  }
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet &a, const Triplet &b)
                   { return a.row != b.row ? a.row < b.row : a.col < b.col; });

  SparseMatrix M(rows, cols);
  M.col_indices_.reserve(triplets.size());
  M.values_.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();)
  {
    const auto row = triplets[k].row;
    const auto col = triplets[k].col;
    double sum = 0.0;
    while (k < triplets.size() && triplets[k].row == row && triplets[k].col == col)
    {
      sum += triplets[k].value;
      ++k;
    }
    M.col_indices_.push_back(col);
    M.values_.push_back(sum);
    ++M.row_offsets_[row + 1];
  }
  std::partial_sum(M.row_offsets_.begin(), M.row_offsets_.end(), M.row_offsets_.begin());
  return M;
}

SparseMatrix SparseMatrix::from_csr(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                                    std::vector<std::size_t> col_indices, std::vector<double> values)
{
  if (row_offsets.size() != rows + 1 || row_offsets.front() != 0 || row_offsets.back() != col_indices.size() ||
      col_indices.size() != values.size())
  {
    throw ValidationError("inconsistent CSR array lengths");
  }
  for (std::size_t r = 0; r < rows; ++r)
  {
    if (row_offsets[r] > row_offsets[r + 1])
    {
      throw ValidationError("CSR row offsets must be nondecreasing");
    }
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k)
    {
      if (col_indices[k] >= cols)
      {
        throw ValidationError("CSR column index out of range");
      }
      if (k > row_offsets[r] && col_indices[k] <= col_indices[k - 1])
      {
        throw ValidationError("CSR column indices must be strictly increasing within a row");
      }
    }
  }
  SparseMatrix M(rows, cols);
  M.row_offsets_ = std::move(row_offsets);
  M.col_indices_ = std::move(col_indices);
  M.values_ = std::move(values);
  return M;
}

SparseMatrix SparseMatrix::identity(std::size_t n)
{
  return diagonal(Vector(n, 1.0));
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d)
{
  SparseMatrix M(d.size(), d.size());
  M.col_indices_.resize(d.size());
  M.values_.assign(d.begin(), d.end());
  std::iota(M.col_indices_.begin(), M.col_indices_.end(), std::size_t{0});
  std::iota(M.row_offsets_.begin(), M.row_offsets_.end(), std::size_t{0});
  return M;
}

double SparseMatrix::coeff(std::size_t row, std::size_t col) const
{
  const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row]);
  const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col)
  {
    return 0.0;
  }
  return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

SparseMatrix SparseMatrix::transpose() const
{
  SparseMatrix T(cols_, rows_);
  for (auto c : col_indices_)
  {
    ++T.row_offsets_[c + 1];
  }
  std::partial_sum(T.row_offsets_.begin(), T.row_offsets_.end(), T.row_offsets_.begin());
  T.col_indices_.resize(nnz());
  T.values_.resize(nnz());
  std::vector<std::size_t> next(T.row_offsets_.begin(), T.row_offsets_.end() - 1);
  // Rows are visited in order, so each transposed row receives increasing columns.
  for (std::size_t r = 0; r < rows_; ++r)
  {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      const auto dst = next[col_indices_[k]]++;
      T.col_indices_[dst] = r;
      T.values_[dst] = values_[k];
    }
  }
  return T;
}

SparseMatrix SparseMatrix::pruned(double threshold) const
{
  SparseMatrix P(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
  {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      if (std::abs(values_[k]) > threshold)
      {
        P.col_indices_.push_back(col_indices_[k]);
        P.values_.push_back(values_[k]);
      }
    }
    P.row_offsets_[r + 1] = P.values_.size();
  }
  return P;
}

SparseMatrix SparseMatrix::scaled(std::span<const double> left, std::span<const double> right) const
{
  if ((!left.empty() && left.size() != rows_) || (!right.empty() && right.size() != cols_))
  {
    throw ValidationError("diagonal scaling dimension mismatch");
  }
  SparseMatrix S = *this;
  for (std::size_t r = 0; r < rows_; ++r)
  {
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      double v = values_[k];
      if (!left.empty())
      {
        v *= left[r];
      }
      if (!right.empty())
      {
        v *= right[col_indices_[k]];
      }
      S.values_[k] = v;
    }
  }
  return S;
}

SparseMatrix SparseMatrix::submatrix(std::span<const std::size_t> row_ids, std::span<const std::size_t> col_ids) const
{
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> col_map(cols_, none);
  for (std::size_t j = 0; j < col_ids.size(); ++j)
  {
    if (col_ids[j] >= cols_)
    {
      throw ValidationError("submatrix column id out of range");
    }
    col_map[col_ids[j]] = j;
  }
  SparseMatrix S(row_ids.size(), col_ids.size());
  for (std::size_t i = 0; i < row_ids.size(); ++i)
  {
    const auto r = row_ids[i];
    if (r >= rows_)
    {
      throw ValidationError("submatrix row id out of range");
    }
    for (std::size_t k = row_offsets_[r]; k < row_offsets_[r + 1]; ++k)
    {
      const auto c = col_map[col_indices_[k]];
      if (c != none)
      {
        S.col_indices_.push_back(c);
        S.values_.push_back(values_[k]);
      }
    }
    S.row_offsets_[i + 1] = S.values_.size();
  }
  return S;
}

double SparseMatrix::frobenius_norm() const
{
  return norm2(values_);
}

double SparseMatrix::max_abs() const
{
  double m = 0.0;
  for (double v : values_)
  {
    m = std::max(m, std::abs(v));
  }
  return m;
}

void spmv(const SparseMatrix &A, std::span<const double> x, std::span<double> y)
{
  if (x.size() != A.cols() || y.size() != A.rows())
  {
    throw ValidationError("spmv dimension mismatch: matrix " + std::to_string(A.rows()) + "x" +
                          std::to_string(A.cols()) + ", vector " + std::to_string(x.size()));
  }
  const auto &off = A.row_offsets();
  const auto &col = A.col_indices();
  const auto &val = A.values();
  for (std::size_t r = 0; r < A.rows(); ++r)
  {
    double sum = 0.0;
    for (std::size_t k = off[r]; k < off[r + 1]; ++k)
    {
      sum += val[k] * x[col[k]];
    }
    y[r] = sum;
  }
}

Vector spmv(const SparseMatrix &A, std::span<const double> x)
{
  Vector y(A.rows());
  spmv(A, x, y);
  return y;
}

void spmv_transpose(const SparseMatrix &A, std::span<const double> x, std::span<double> y)
{
  if (x.size() != A.rows() || y.size() != A.cols())
  {
    throw ValidationError("transposed spmv dimension mismatch");
  }
  std::fill(y.begin(), y.end(), 0.0);
  const auto &off = A.row_offsets();
  const auto &col = A.col_indices();
  const auto &val = A.values();
  for (std::size_t r = 0; r < A.rows(); ++r)
  {
    for (std::size_t k = off[r]; k < off[r + 1]; ++k)
    {
      y[col[k]] += val[k] * x[r];
    }
  }
}

SparseMatrix multiply(const SparseMatrix &A, const SparseMatrix &B)
{
  if (A.cols() != B.rows())
  {
    throw ValidationError("sparse product dimension mismatch");
  }
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> row_offsets(A.rows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  std::vector<std::size_t> slot(B.cols(), none);
  std::vector<std::size_t> touched;
  for (std::size_t r = 0; r < A.rows(); ++r)
  {
    touched.clear();
    const auto row_start = vals.size();
    for (std::size_t ka = A.row_offsets()[r]; ka < A.row_offsets()[r + 1]; ++ka)
    {
      const auto mid = A.col_indices()[ka];
      const double a = A.values()[ka];
      for (std::size_t kb = B.row_offsets()[mid]; kb < B.row_offsets()[mid + 1]; ++kb)
      {
        const auto c = B.col_indices()[kb];
        if (slot[c] == none)
        {
          slot[c] = vals.size();
          cols.push_back(c);
          vals.push_back(0.0);
          touched.push_back(c);
        }
        vals[slot[c]] += a * B.values()[kb];
      }
    }
    // Sort the row's entries by column to keep canonical form.
    std::vector<std::pair<std::size_t, double>> row;
    row.reserve(touched.size());
    for (auto c : touched)
    {
      row.emplace_back(c, vals[slot[c]]);
      slot[c] = none;
    }
    std::sort(row.begin(), row.end());
    for (std::size_t i = 0; i < row.size(); ++i)
    {
      cols[row_start + i] = row[i].first;
      vals[row_start + i] = row[i].second;
    }
    row_offsets[r + 1] = vals.size();
  }
  return SparseMatrix::from_csr(A.rows(), B.cols(), std::move(row_offsets), std::move(cols), std::move(vals));
}

SparseMatrix add(const SparseMatrix &A, const SparseMatrix &B, double alpha, double beta)
{
  if (A.rows() != B.rows() || A.cols() != B.cols())
  {
    throw ValidationError("sparse sum dimension mismatch");
  }
  std::vector<Triplet> t;
  t.reserve(A.nnz() + B.nnz());
  for (std::size_t r = 0; r < A.rows(); ++r)
  {
    for (std::size_t k = A.row_offsets()[r]; k < A.row_offsets()[r + 1]; ++k)
    {
      t.push_back({r, A.col_indices()[k], alpha * A.values()[k]});
    }
    for (std::size_t k = B.row_offsets()[r]; k < B.row_offsets()[r + 1]; ++k)
    {
      t.push_back({r, B.col_indices()[k], beta * B.values()[k]});
    }
  }
  return SparseMatrix::from_triplets(A.rows(), A.cols(), std::move(t));
}

SparseMatrix vstack(const SparseMatrix &A, const SparseMatrix &B)
{
  if (A.cols() != B.cols())
  {
    throw ValidationError("vstack column mismatch");
  }
  auto offsets = A.row_offsets();
  for (std::size_t r = 1; r <= B.rows(); ++r)
  {
    offsets.push_back(A.nnz() + B.row_offsets()[r]);
  }
  auto cols = A.col_indices();
  cols.insert(cols.end(), B.col_indices().begin(), B.col_indices().end());
  auto vals = A.values();
  vals.insert(vals.end(), B.values().begin(), B.values().end());
  return SparseMatrix::from_csr(A.rows() + B.rows(), A.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

DiagonalWeight::DiagonalWeight(Vector entries) : entries_(std::move(entries))
{
  for (double w : entries_)
  {
    if (!(w > 0.0) || !std::isfinite(w))
    {
      throw ValidationError("diagonal weight entries must be finite and strictly positive");
    }
  }
}

double DiagonalWeight::dot(std::span<const double> u, std::span<const double> v) const
{
  if (u.size() != entries_.size() || v.size() != entries_.size())
  {
    throw ValidationError("weighted dot dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    s += entries_[i] * u[i] * v[i];
  }
  return s;
}

double DiagonalWeight::norm(std::span<const double> u) const
{
  return std::sqrt(dot(u, u));
}

void DiagonalWeight::apply(std::span<const double> u, std::span<double> out) const
{
  for (std::size_t i = 0; i < entries_.size(); ++i)
  {
    out[i] = entries_[i] * u[i];
  }
}

void DiagonalWeight::apply_inverse(std::span<const double> u, std::span<double> out) const
{
  for (std::size_t i = 0; i < entries_.size(); ++i)
  {
    out[i] = u[i] / entries_[i];
  }
}

DiagonalWeight DiagonalWeight::concat(const DiagonalWeight &other) const
{
  Vector e = entries_;
  e.insert(e.end(), other.entries_.begin(), other.entries_.end());
  return DiagonalWeight(std::move(e));
}

double dot(std::span<const double> u, std::span<const double> v)
{
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
  {
    s += u[i] * v[i];
  }
  return s;
}

double norm2(std::span<const double> u)
{
  return std::sqrt(dot(u, u));
}

void axpy(double alpha, std::span<const double> x, std::span<double> y)
{
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    y[i] += alpha * x[i];
  }
}

}  // namespace maxcon::sparse
