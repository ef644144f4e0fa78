#include "slfr/linalg.hpp"

#include <algorithm>
#include <string>

namespace slfr {

namespace {

void require_same_field(const FqMatrix& a, const FqMatrix& b) {
  if (&a.field() != &b.field()) {
    throw Error(ErrorCode::MismatchedField, a.field().name() + " vs " + b.field().name());
  }
}

void require_increasing(std::span<const std::size_t> keys, std::size_t limit) {
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (keys[i] >= limit) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "index " + std::to_string(keys[i]) + " >= " + std::to_string(limit));
    }
    if (i > 0 && keys[i] <= keys[i - 1]) {
      throw Error(ErrorCode::InvalidArguments, "index keys must be strictly increasing");
    }
  }
}

// In-place forward elimination on raw reprs. Returns the pivot columns and,
// via `swaps`, the parity of row exchanges performed.
std::vector<std::size_t> eliminate(FqMatrix& m, bool reduce, std::size_t col_limit, int* swaps) {
  const FieldSpec& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < col_limit && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m.raw(pivot, col) == 0) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        const auto tmp = m.raw(row, c);
        m.set_raw(row, c, m.raw(pivot, c));
        m.set_raw(pivot, c, tmp);
      }
      if (swaps) ++*swaps;
    }
    if (reduce) {
      const std::uint32_t inv = f.inv(m.raw(row, col));
      for (std::size_t c = col; c < m.cols(); ++c) m.set_raw(row, c, f.mul(m.raw(row, c), inv));
    }
    const std::uint32_t pv_inv = f.inv(m.raw(row, col));
    const std::size_t first = reduce ? 0 : row + 1;
    for (std::size_t r = first; r < m.rows(); ++r) {
      if (r == row || m.raw(r, col) == 0) continue;
      const std::uint32_t factor = f.mul(m.raw(r, col), pv_inv);
      for (std::size_t c = col; c < m.cols(); ++c) {
        m.set_raw(r, c, f.sub(m.raw(r, c), f.mul(factor, m.raw(row, c))));
      }
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

FqMatrix::FqMatrix(const FieldSpec& field, std::size_t rows, std::size_t cols)
    : field_(&field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

FqMatrix FqMatrix::identity(const FieldSpec& field, std::size_t n) {
  FqMatrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m.set_raw(i, i, 1);
  return m;
}

FqMatrix FqMatrix::from_ints(const FieldSpec& field, const std::vector<std::vector<std::int64_t>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  FqMatrix m(field, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, field.from_int(rows[i][j]));
  }
  return m;
}

FqMatrix FqMatrix::column(const std::vector<FieldElement>& values) {
  if (values.empty()) throw Error(ErrorCode::InvalidArguments, "empty column needs a field");
  FqMatrix m(values.front().spec(), values.size(), 1);
  for (std::size_t i = 0; i < values.size(); ++i) m.set(i, 0, values[i]);
  return m;
}

void FqMatrix::check_index(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) {
    throw Error(ErrorCode::IndexOutOfRange, "(" + std::to_string(r) + "," + std::to_string(c) +
                                                ") outside " + std::to_string(rows_) + "x" +
                                                std::to_string(cols_));
  }
}

FieldElement FqMatrix::at(std::size_t r, std::size_t c) const {
  check_index(r, c);
  return FieldElement(*field_, data_[r * cols_ + c]);
}

void FqMatrix::set(std::size_t r, std::size_t c, const FieldElement& v) {
  check_index(r, c);
  if (&v.spec() != field_) throw Error(ErrorCode::MismatchedField, "matrix entry from another field");
  data_[r * cols_ + c] = v.repr();
}

FqMatrix FqMatrix::transpose() const {
  FqMatrix t(*field_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t.set_raw(c, r, raw(r, c));
  return t;
}

std::vector<std::vector<std::int64_t>> FqMatrix::to_ints() const {
  std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out[r][c] = raw(r, c);
  return out;
}

FqMatrix operator*(const FqMatrix& a, const FqMatrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "product shape mismatch");
  const FieldSpec& f = a.field();
  FqMatrix out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto aik = a.raw(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        out.set_raw(i, j, f.add(out.raw(i, j), f.mul(aik, b.raw(k, j))));
    }
  return out;
}

bool operator==(const FqMatrix& a, const FqMatrix& b) noexcept {
  return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

FqMatrix submatrix(const FqMatrix& m, std::span<const std::size_t> rows,
                   std::span<const std::size_t> cols) {
  require_increasing(rows, m.rows());
  require_increasing(cols, m.cols());
  FqMatrix out(m.field(), rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out.set_raw(i, j, m.raw(rows[i], cols[j]));
  return out;
}

FieldElement det(const FqMatrix& m) {
  if (!m.is_square()) throw Error(ErrorCode::NotSquare, "determinant of non-square matrix");
  const FieldSpec& f = m.field();
  if (m.rows() == 0) return f.one();
  FqMatrix work = m;
  int swaps = 0;
  const auto pivots = eliminate(work, false, work.cols(), &swaps);
  if (pivots.size() < work.rows()) return f.zero();
  std::uint32_t d = 1;
  for (std::size_t i = 0; i < work.rows(); ++i) d = f.mul(d, work.raw(i, i));
  if (swaps % 2 == 1) d = f.neg(d);
  return FieldElement(f, d);
}

std::size_t rank(const FqMatrix& m) {
  FqMatrix work = m;
  return eliminate(work, false, work.cols(), nullptr).size();
}

FqMatrix solve(const FqMatrix& a, const FqMatrix& b) {
  require_same_field(a, b);
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "solve needs a square system");
  if (b.rows() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side rows");
  const std::size_t n = a.rows();
  FqMatrix aug(a.field(), n, n + b.cols());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.set_raw(r, c, a.raw(r, c));
    for (std::size_t c = 0; c < b.cols(); ++c) aug.set_raw(r, n + c, b.raw(r, c));
  }
  const auto pivots = eliminate(aug, true, n, nullptr);
  if (pivots.size() < n) throw Error(ErrorCode::Singular, "matrix is singular");
  FqMatrix x(a.field(), n, b.cols());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) x.set_raw(r, c, aug.raw(r, n + c));
  return x;
}

FieldElement cramer_component(const FqMatrix& a, const FqMatrix& b, std::size_t i) {
  require_same_field(a, b);
  if (!a.is_square()) throw Error(ErrorCode::NotSquare, "Cramer's rule needs a square system");
  if (b.rows() != a.rows() || b.cols() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side must be a column of matching height");
  }
  if (i >= a.cols()) throw Error(ErrorCode::IndexOutOfRange, "component index");
  const FieldElement d = det(a);
  if (d.is_zero()) throw Error(ErrorCode::Singular, "matrix is singular");
  FqMatrix replaced = a;
  for (std::size_t r = 0; r < a.rows(); ++r) replaced.set_raw(r, i, b.raw(r, 0));
  return det(replaced) / d;
}

RowEchelon row_reduce(FqMatrix m) {
  auto pivots = eliminate(m, true, m.cols(), nullptr);
  return {std::move(m), std::move(pivots)};
}

std::optional<LinearSolution> solve_general(const FqMatrix& a, const FqMatrix& b) {
  require_same_field(a, b);
  if (b.rows() != a.rows() || b.cols() != 1) {
    throw Error(ErrorCode::DimensionMismatch, "right-hand side must be a column of matching height");
  }
  const std::size_t n = a.cols();
  FqMatrix aug(a.field(), a.rows(), n + 1);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < n; ++c) aug.set_raw(r, c, a.raw(r, c));
    aug.set_raw(r, n, b.raw(r, 0));
  }
  const auto pivots = eliminate(aug, true, n, nullptr);
  // A nonzero right-hand side below the last pivot row means 0 = c.
  for (std::size_t r = pivots.size(); r < aug.rows(); ++r) {
    if (aug.raw(r, n) != 0) return std::nullopt;
  }
  LinearSolution sol;
  sol.particular.assign(n, a.field().zero());
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    sol.particular[pivots[r]] = FieldElement(a.field(), aug.raw(r, n));
  }
  sol.rank = pivots.size();
  sol.nullity = n - pivots.size();
  return sol;
}

}  // namespace slfr
