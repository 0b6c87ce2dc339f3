#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "convalg/scalar.hpp"

namespace convalg {

/// Dense exact matrix over a RingDescriptor, row-major.
class Matrix {
public:
  Matrix(const RingDescriptor& ring, std::size_t rows, std::size_t cols);

  static Matrix identity(const RingDescriptor& ring, std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const RingDescriptor& ring() const noexcept { return ring_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Matrix operator*(const Matrix& other) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix scaled(const Scalar& s) const;
  friend bool operator==(const Matrix& a, const Matrix& b);

  Matrix transpose() const;
  /// Transpose followed by the ring involution on each entry.
  Matrix adjoint() const;
  bool is_zero() const;
  bool is_identity() const;

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);
  Matrix column(std::size_t c) const { return block(0, c, rows_, 1); }

  /// Same entries reinterpreted in `target`; throws PreconditionError if an entry is not in it.
  Matrix in_ring(const RingDescriptor& target) const;

  std::string to_string() const;

private:
  RingDescriptor ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Scalar> data_;
};

Matrix hstack(const std::vector<Matrix>& blocks, const RingDescriptor& ring, std::size_t rows);
Matrix vstack(const std::vector<Matrix>& blocks, const RingDescriptor& ring, std::size_t cols);

// The routines below work over the fraction field of the matrix ring.

std::size_t rank(const Matrix& m);
/// Inverse of a square matrix, only if it exists with entries in the matrix's own ring.
std::optional<Matrix> inverse(const Matrix& m);
/// Columns form a basis of the right null space (over the fraction field).
Matrix kernel_basis(const Matrix& m);
/// The pivot columns of m: a basis of its column space chosen among its columns.
Matrix column_basis(const Matrix& m);
/// A solution X of A X = B over the fraction field, if one exists.
std::optional<Matrix> solve(const Matrix& a, const Matrix& b);

/// U * A * V = D with U, V invertible over the ring and D diagonal with d_1 | d_2 | ...
/// Defined for Integers and LocalizedIntegers (for Z[1/p] the invariant factors are
/// normalized to have no p-part).
struct SmithForm {
  Matrix u;
  Matrix d;
  Matrix v;
  Matrix u_inverse;
  std::vector<mpz_class> invariants; // nonzero diagonal entries, length == rank
};

SmithForm smith_normal_form(const Matrix& a);

} // namespace convalg
