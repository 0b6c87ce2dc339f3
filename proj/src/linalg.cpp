#include "convalg/linalg.hpp"

#include <algorithm>
#include <sstream>

#include "convalg/errors.hpp"

namespace convalg {

Matrix::Matrix(const RingDescriptor& ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, Scalar::zero(ring)) {}

Matrix Matrix::identity(const RingDescriptor& ring, std::size_t n) {
  Matrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(ring);
  return m;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (cols_ != other.rows_)
    throw PreconditionError("matrix product dimension mismatch " + std::to_string(rows_) + "x" +
                            std::to_string(cols_) + " * " + std::to_string(other.rows_) + "x" +
                            std::to_string(other.cols_));
  if (!(ring_ == other.ring_)) throw PreconditionError("matrix product ring mismatch");
  Matrix out(ring_, rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& a = (*this)(i, k);
      if (a.is_zero()) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) {
        const Scalar& b = other(k, j);
        if (!b.is_zero()) out(i, j) += a * b;
      }
    }
  return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw PreconditionError("matrix sum dimension mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
  return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw PreconditionError("matrix difference dimension mismatch");
  Matrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
  return out;
}

Matrix Matrix::scaled(const Scalar& s) const {
  Matrix out = *this;
  for (auto& x : out.data_) x *= s;
  return out;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

Matrix Matrix::transpose() const {
  Matrix out(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::adjoint() const {
  Matrix out(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j).star();
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool Matrix::is_identity() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      const Scalar& x = (*this)(i, j);
      if (i == j ? !x.is_one() : !x.is_zero()) return false;
    }
  return true;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw PreconditionError("matrix block out of range");
  Matrix out(ring_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
  return out;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  if (r0 + m.rows_ > rows_ || c0 + m.cols_ > cols_) throw PreconditionError("matrix set_block out of range");
  for (std::size_t i = 0; i < m.rows_; ++i)
    for (std::size_t j = 0; j < m.cols_; ++j) (*this)(r0 + i, c0 + j) = m(i, j);
}

Matrix Matrix::in_ring(const RingDescriptor& target) const {
  Matrix out(target, rows_, cols_);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    auto v = data_[i].in_ring(target);
    if (!v) throw PreconditionError("matrix entry " + data_[i].to_string() + " is not in " + target.name());
    out.data_[i] = *v;
  }
  return out;
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
  }
  os << "]";
  return os.str();
}

Matrix hstack(const std::vector<Matrix>& blocks, const RingDescriptor& ring, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw PreconditionError("hstack row mismatch");
    cols += b.cols();
  }
  Matrix out(ring, rows, cols);
  std::size_t c = 0;
  for (const auto& b : blocks) {
    out.set_block(0, c, b);
    c += b.cols();
  }
  return out;
}

Matrix vstack(const std::vector<Matrix>& blocks, const RingDescriptor& ring, std::size_t cols) {
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw PreconditionError("vstack column mismatch");
    rows += b.rows();
  }
  Matrix out(ring, rows, cols);
  std::size_t r = 0;
  for (const auto& b : blocks) {
    out.set_block(r, 0, b);
    r += b.rows();
  }
  return out;
}

namespace {

struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

// Reduced row echelon form over the fraction field.
Echelon rref(const Matrix& input) {
  Matrix m = input.in_ring(input.ring().fraction_field());
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(row, j));
    Scalar inv = *m(row, col).inverse();
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      Scalar factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j)
        if (!m(row, j).is_zero()) m(i, j) -= factor * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

} // namespace

std::size_t rank(const Matrix& m) { return rref(m).pivots.size(); }

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const std::size_t n = m.rows();
  if (n == 0) return m;
  const RingDescriptor field = m.ring().fraction_field();
  Matrix aug = hstack({m.in_ring(field), Matrix::identity(field, n)}, field, n);
  Echelon e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv = e.reduced.block(0, n, n, n);
  Matrix out(m.ring(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto v = inv(i, j).in_ring(m.ring());
      if (!v) return std::nullopt;
      out(i, j) = *v;
    }
  return out;
}

Matrix kernel_basis(const Matrix& m) {
  const RingDescriptor field = m.ring().fraction_field();
  Echelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix basis(field, m.cols(), free_cols.size());
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    basis(free_cols[k], k) = Scalar::one(field);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) basis(e.pivots[r], k) = -e.reduced(r, free_cols[k]);
  }
  return basis;
}

Matrix column_basis(const Matrix& m) {
  Echelon e = rref(m);
  Matrix out(m.ring(), m.rows(), e.pivots.size());
  for (std::size_t k = 0; k < e.pivots.size(); ++k) out.set_block(0, k, m.column(e.pivots[k]));
  return out;
}

std::optional<Matrix> solve(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw PreconditionError("solve: row mismatch");
  const RingDescriptor field = a.ring().fraction_field();
  Matrix aug = hstack({a.in_ring(field), b.in_ring(field)}, field, a.rows());
  Echelon e = rref(aug);
  Matrix x(field, a.cols(), b.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] >= a.cols()) return std::nullopt; // inconsistent row
    for (std::size_t j = 0; j < b.cols(); ++j) x(e.pivots[r], j) = e.reduced(r, a.cols() + j);
  }
  return x;
}

namespace {

using ZMat = std::vector<std::vector<mpz_class>>;

ZMat zidentity(std::size_t n) {
  ZMat m(n, std::vector<mpz_class>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

struct SmithWork {
  ZMat a, u, uinv, v;
  std::size_t rows, cols;

  // row_i += k * row_j
  void add_row(std::size_t i, std::size_t j, const mpz_class& k) {
    for (std::size_t c = 0; c < cols; ++c) a[i][c] += k * a[j][c];
    for (std::size_t c = 0; c < rows; ++c) u[i][c] += k * u[j][c];
    for (std::size_t r = 0; r < rows; ++r) uinv[r][j] -= k * uinv[r][i];
  }
  void swap_rows(std::size_t i, std::size_t j) {
    std::swap(a[i], a[j]);
    std::swap(u[i], u[j]);
    for (std::size_t r = 0; r < rows; ++r) std::swap(uinv[r][i], uinv[r][j]);
  }
  void negate_row(std::size_t i) {
    for (auto& x : a[i]) x = -x;
    for (auto& x : u[i]) x = -x;
    for (std::size_t r = 0; r < rows; ++r) uinv[r][i] = -uinv[r][i];
  }
  // col_i += k * col_j
  void add_col(std::size_t i, std::size_t j, const mpz_class& k) {
    for (std::size_t r = 0; r < rows; ++r) a[r][i] += k * a[r][j];
    for (std::size_t r = 0; r < cols; ++r) v[r][i] += k * v[r][j];
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
    for (std::size_t r = 0; r < cols; ++r) std::swap(v[r][i], v[r][j]);
  }

  void run() {
    const std::size_t n = std::min(rows, cols);
    for (std::size_t t = 0; t < n; ++t) {
      while (true) {
        // smallest nonzero entry of the trailing block
        std::size_t pr = rows, pc = cols;
        for (std::size_t r = t; r < rows; ++r)
          for (std::size_t c = t; c < cols; ++c)
            if (sgn(a[r][c]) != 0 && (pr == rows || cmpabs(a[r][c], a[pr][pc]) < 0)) {
              pr = r;
              pc = c;
            }
        if (pr == rows) return;
        if (pr != t) swap_rows(pr, t);
        if (pc != t) swap_cols(pc, t);
        bool clean = true;
        for (std::size_t r = t + 1; r < rows; ++r) {
          if (sgn(a[r][t]) == 0) continue;
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), a[r][t].get_mpz_t(), a[t][t].get_mpz_t());
          add_row(r, t, -q);
          if (sgn(a[r][t]) != 0) clean = false;
        }
        for (std::size_t c = t + 1; c < cols; ++c) {
          if (sgn(a[t][c]) == 0) continue;
          mpz_class q;
          mpz_fdiv_q(q.get_mpz_t(), a[t][c].get_mpz_t(), a[t][t].get_mpz_t());
          add_col(c, t, -q);
          if (sgn(a[t][c]) != 0) clean = false;
        }
        if (!clean) continue;
        // divisibility of the trailing block by the pivot
        bool divides = true;
        for (std::size_t r = t + 1; r < rows && divides; ++r)
          for (std::size_t c = t + 1; c < cols; ++c)
            if (mpz_divisible_p(a[r][c].get_mpz_t(), a[t][t].get_mpz_t()) == 0) {
              add_row(t, r, 1);
              divides = false;
              break;
            }
        if (divides) break;
      }
      if (sgn(a[t][t]) < 0) negate_row(t);
    }
  }

  static int cmpabs(const mpz_class& x, const mpz_class& y) { return mpz_cmpabs(x.get_mpz_t(), y.get_mpz_t()); }
};

Matrix to_matrix(const ZMat& z, std::size_t rows, std::size_t cols, const RingDescriptor& ring) {
  Matrix m(ring, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = Scalar(ring, mpq_class(z[i][j]));
  return m;
}

} // namespace

SmithForm smith_normal_form(const Matrix& input) {
  const RingDescriptor& ring = input.ring();
  if (ring.kind() != RingKind::Integers && ring.kind() != RingKind::LocalizedIntegers)
    throw PreconditionError("Smith normal form needs Z or Z[1/p], got " + ring.name());
  const std::size_t rows = input.rows(), cols = input.cols();

  // Over Z[1/p] clear p-power denominators first; p^k is a unit.
  mpz_class scale = 1;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), input(i, j).re().get_den_mpz_t());

  SmithWork w{ZMat(rows, std::vector<mpz_class>(cols)), zidentity(rows), zidentity(rows), zidentity(cols), rows, cols};
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      mpq_class x = input(i, j).re() * scale;
      w.a[i][j] = x.get_num();
    }
  w.run();

  Matrix u = to_matrix(w.u, rows, rows, ring);
  Matrix uinv = to_matrix(w.uinv, rows, rows, ring);
  Matrix v = to_matrix(w.v, cols, cols, ring);
  Matrix d(ring, rows, cols);
  std::vector<mpz_class> invariants;
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    if (sgn(w.a[t][t]) == 0) break;
    mpq_class entry(w.a[t][t], scale);
    entry.canonicalize();
    if (ring.kind() == RingKind::LocalizedIntegers) {
      // rescale row t of U by a unit so that the invariant factor is p-free
      mpz_class num = entry.get_num();
      mpq_class unit(1);
      while (mpz_divisible_ui_p(num.get_mpz_t(), ring.prime()) != 0) {
        mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), ring.prime());
        unit /= ring.prime();
      }
      unit *= mpq_class(entry.get_den());
      Scalar s(ring, unit);
      Scalar sinv = *s.inverse();
      for (std::size_t c = 0; c < rows; ++c) u(t, c) *= s;
      for (std::size_t r = 0; r < rows; ++r) uinv(r, t) *= sinv;
      entry = mpq_class(num);
    }
    invariants.push_back(entry.get_num());
    d(t, t) = Scalar(ring, entry);
  }
  return {std::move(u), std::move(d), std::move(v), std::move(uinv), std::move(invariants)};
}

} // namespace convalg
