#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "slfr/field.hpp"

namespace slfr {

/// Dense row-major matrix over a finite field. Entries are held as canonical
/// reprs of the matrix's field; accessors hand out FieldElement values.
class FqMatrix {
 public:
  FqMatrix(const FieldSpec& field, std::size_t rows, std::size_t cols);

  static FqMatrix identity(const FieldSpec& field, std::size_t n);
  /// Throws OutOfRange for entries >= q and DimensionMismatch for ragged input.
  static FqMatrix from_ints(const FieldSpec& field, const std::vector<std::vector<std::int64_t>>& rows);
  static FqMatrix column(const std::vector<FieldElement>& values);

  const FieldSpec& field() const noexcept { return *field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  FieldElement at(std::size_t r, std::size_t c) const;
  FieldElement operator()(std::size_t r, std::size_t c) const { return at(r, c); }
  void set(std::size_t r, std::size_t c, const FieldElement& v);

  std::uint32_t raw(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  void set_raw(std::size_t r, std::size_t c, std::uint32_t v) noexcept { data_[r * cols_ + c] = v; }

  FqMatrix transpose() const;
  std::vector<std::vector<std::int64_t>> to_ints() const;

  friend FqMatrix operator*(const FqMatrix& a, const FqMatrix& b);
  friend bool operator==(const FqMatrix& a, const FqMatrix& b) noexcept;

 private:
  void check_index(std::size_t r, std::size_t c) const;

  const FieldSpec* field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint32_t> data_;
};

/// Selects rows and columns (0-based, strictly increasing) in increasing
/// order. Throws IndexOutOfRange / InvalidArguments.
FqMatrix submatrix(const FqMatrix& m, std::span<const std::size_t> rows,
                   std::span<const std::size_t> cols);

/// Gaussian elimination; the 0x0 determinant is 1. Throws NotSquare.
FieldElement det(const FqMatrix& m);

std::size_t rank(const FqMatrix& m);

/// Unique solution of A x = b for square invertible A. Throws NotSquare,
/// DimensionMismatch, Singular.
FqMatrix solve(const FqMatrix& a, const FqMatrix& b);

/// det(A with column i replaced by the column vector b) / det(A).
FieldElement cramer_component(const FqMatrix& a, const FqMatrix& b, std::size_t i);

struct RowEchelon {
  FqMatrix reduced;                     // reduced row echelon form
  std::vector<std::size_t> pivot_cols;  // one per nonzero row
};

RowEchelon row_reduce(FqMatrix m);

/// Solution of a possibly non-square system A x = b (b a column vector).
struct LinearSolution {
  std::vector<FieldElement> particular;  // free variables set to zero
  std::size_t rank = 0;
  std::size_t nullity = 0;  // dimension of the solution space
};

/// std::nullopt when the system is inconsistent.
std::optional<LinearSolution> solve_general(const FqMatrix& a, const FqMatrix& b);

}  // namespace slfr
