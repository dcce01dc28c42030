#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "gkzcc/numeric.hpp"

namespace gkzcc {

// Dense matrix of arbitrary-precision integers. Indices are 0-based;
// column subsets (ThetaSubset) carry 1-based labels and convert at the edge.
class IntMatrix {
 public:
  IntMatrix() : rows_(0), cols_(0) {}
  IntMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {
    if (rows == 0 || cols == 0)
      throw PreconditionError("matrix dimensions must be positive");
  }
  IntMatrix(std::initializer_list<std::initializer_list<Int>> init)
      : IntMatrix(std::vector<std::vector<Int>>(init.begin(), init.end())) {}
  explicit IntMatrix(const std::vector<std::vector<Int>>& entries) {
    rows_ = entries.size();
    if (rows_ == 0) throw PreconditionError("matrix needs at least one row");
    cols_ = entries.front().size();
    if (cols_ == 0) throw PreconditionError("matrix needs at least one column");
    data_.reserve(rows_ * cols_);
    for (const auto& row : entries) {
      if (row.size() != cols_) throw PreconditionError("ragged matrix rows");
      data_.insert(data_.end(), row.begin(), row.end());
    }
  }

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Int& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::vector<Int> row(std::size_t i) const {
    return {data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
            data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)};
  }
  std::vector<Int> col(std::size_t j) const {
    std::vector<Int> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  IntMatrix operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw PreconditionError("matrix product shape mismatch");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const Int& a = (*this)(i, k);
        if (a == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += a * o(k, j);
      }
    return r;
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<Int> data_;
};

// Rank over the rationals by fraction-free (Bareiss) elimination.
inline std::size_t rank_rational(IntMatrix m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  Int prev = 1;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(r, j));
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j)
        m(i, j) = (m(r, c) * m(i, j) - m(i, c) * m(r, j)) / prev;
      m(i, c) = 0;
    }
    prev = m(r, c);
    ++r;
  }
  return r;
}

// Exact determinant of a square matrix (Bareiss).
inline Int determinant(IntMatrix m) {
  if (m.rows() != m.cols()) throw PreconditionError("determinant needs a square matrix");
  const std::size_t n = m.rows();
  Int prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m(piv, k) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(piv, j), m(k, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) = (m(k, k) * m(i, j) - m(i, k) * m(k, j)) / prev;
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

// Rank of (M mod p) over the field with p elements.
inline std::size_t rank_mod_p(IntMatrix m, const Int& p) {
  require_prime(p);
  const std::size_t rows = m.rows(), cols = m.cols();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = mod_norm(m(i, j), p);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(piv, j), m(r, j));
    const Int inv = inv_mod(m(r, c), p);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (m(i, c) == 0) continue;
      const Int f = mod_norm(m(i, c) * inv, p);
      for (std::size_t j = c; j < cols; ++j)
        m(i, j) = mod_norm(m(i, j) - f * m(r, j), p);
    }
    ++r;
  }
  return r;
}

struct RowHermite {
  IntMatrix h;  // H = U * M, row-style echelon, positive pivots
  IntMatrix u;  // unimodular transform
  std::vector<std::size_t> pivot_cols;  // one per nonzero row of h
};

// Row-style Hermite normal form with unimodular transform.
inline RowHermite hermite_row_form(const IntMatrix& m) {
  RowHermite out{m, IntMatrix::identity(m.rows()), {}};
  IntMatrix& h = out.h;
  IntMatrix& u = out.u;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  auto row_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t j = 0; j < cols; ++j) h(dst, j) -= q * h(src, j);
    for (std::size_t j = 0; j < rows; ++j) u(dst, j) -= q * u(src, j);
  };
  auto row_swap = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols; ++j) std::swap(h(a, j), h(b, j));
    for (std::size_t j = 0; j < rows; ++j) std::swap(u(a, j), u(b, j));
  };
  auto row_negate = [&](std::size_t i) {
    for (std::size_t j = 0; j < cols; ++j) h(i, j) = -h(i, j);
    for (std::size_t j = 0; j < rows; ++j) u(i, j) = -u(i, j);
  };
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    while (true) {
      std::size_t best = rows;
      for (std::size_t i = r; i < rows; ++i)
        if (h(i, c) != 0 &&
            (best == rows || abs(h(i, c)) < abs(h(best, c))))
          best = i;
      if (best == rows) break;
      row_swap(r, best);
      bool cleared = true;
      for (std::size_t i = r + 1; i < rows; ++i) {
        if (h(i, c) == 0) continue;
        row_sub(i, r, h(i, c) / h(r, c));
        if (h(i, c) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (h(r, c) == 0) continue;
    if (h(r, c) < 0) row_negate(r);
    for (std::size_t i = 0; i < r; ++i) {
      Int q = h(i, c) / h(r, c);
      if (h(i, c) - q * h(r, c) < 0) q -= 1;  // floor reduction above pivots
      row_sub(i, r, q);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  return out;
}

// Coefficients of v in terms of the nonzero rows of a row-echelon lattice
// basis; nullopt when v is not a lattice member.
inline std::optional<std::vector<Int>> lattice_coordinates(
    const RowHermite& hnf, const std::vector<Int>& v) {
  const std::size_t cols = hnf.h.cols();
  if (v.size() != cols) throw PreconditionError("vector length mismatch");
  std::vector<Int> w = v;
  std::vector<Int> coeffs(hnf.pivot_cols.size(), Int(0));
  for (std::size_t i = 0; i < hnf.pivot_cols.size(); ++i) {
    const std::size_t c = hnf.pivot_cols[i];
    const Int& piv = hnf.h(i, c);
    if (w[c] % piv != 0) return std::nullopt;
    const Int q = w[c] / piv;
    if (q != 0)
      for (std::size_t j = 0; j < cols; ++j) w[j] -= q * hnf.h(i, j);
    coeffs[i] = q;
  }
  for (const auto& x : w)
    if (x != 0) return std::nullopt;
  return coeffs;
}

// Unimodular matrix whose first row is the given primitive vector.
inline IntMatrix complete_primitive_row(const std::vector<Int>& y) {
  const std::size_t m = y.size();
  if (m == 0) throw PreconditionError("empty vector");
  if (gcd_all(y) != 1) throw PreconditionError("vector is not primitive");
  std::vector<Int> z = y;
  IntMatrix w = IntMatrix::identity(m);  // maintains w = V^{-1} for y*V = z
  auto col_swap = [&](std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap(z[a], z[b]);
    for (std::size_t j = 0; j < m; ++j) std::swap(w(a, j), w(b, j));
  };
  auto col_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    // column op col_dst -= q*col_src; inverse on w: row_src += q*row_dst
    if (q == 0) return;
    z[dst] -= q * z[src];
    for (std::size_t j = 0; j < m; ++j) w(src, j) += q * w(dst, j);
  };
  auto col_negate = [&](std::size_t i) {
    z[i] = -z[i];
    for (std::size_t j = 0; j < m; ++j) w(i, j) = -w(i, j);
  };
  while (true) {
    std::size_t best = m, count = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (z[i] != 0) {
        ++count;
        if (best == m || abs(z[i]) < abs(z[best])) best = i;
      }
    if (count <= 1) {
      col_swap(0, best);
      if (z[0] < 0) col_negate(0);
      break;
    }
    for (std::size_t i = 0; i < m; ++i)
      if (i != best && z[i] != 0) col_sub(i, best, z[i] / z[best]);
  }
  if (z[0] != 1) throw std::logic_error("primitive completion failed");
  return w;
}

// Basis of the integer kernel lattice {w : M w = 0}, returned as the rows of
// the kernel's row-Hermite form (canonical, positive pivots).
inline std::vector<std::vector<Int>> kernel_lattice_basis(const IntMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntMatrix a = m;
  IntMatrix v = IntMatrix::identity(cols);
  auto col_swap = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (std::size_t i = 0; i < rows; ++i) std::swap(a(i, x), a(i, y));
    for (std::size_t i = 0; i < cols; ++i) std::swap(v(i, x), v(i, y));
  };
  auto col_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (std::size_t i = 0; i < rows; ++i) a(i, dst) -= q * a(i, src);
    for (std::size_t i = 0; i < cols; ++i) v(i, dst) -= q * v(i, src);
  };
  std::size_t c = 0;
  for (std::size_t r = 0; r < rows && c < cols; ++r) {
    while (true) {
      std::size_t best = cols;
      for (std::size_t j = c; j < cols; ++j)
        if (a(r, j) != 0 && (best == cols || abs(a(r, j)) < abs(a(r, best))))
          best = j;
      if (best == cols) break;
      col_swap(c, best);
      bool cleared = true;
      for (std::size_t j = c + 1; j < cols; ++j) {
        if (a(r, j) == 0) continue;
        col_sub(j, c, a(r, j) / a(r, c));
        if (a(r, j) != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (a(r, c) != 0) ++c;
  }
  if (c == cols) return {};
  std::vector<std::vector<Int>> gens;
  for (std::size_t j = c; j < cols; ++j) gens.push_back(v.col(j));
  RowHermite hnf = hermite_row_form(IntMatrix(gens));
  std::vector<std::vector<Int>> basis;
  for (std::size_t i = 0; i < hnf.pivot_cols.size(); ++i) basis.push_back(hnf.h.row(i));
  return basis;
}

// The lexicographically smallest nonzero vector (entries in [0,p)) of the
// mod-p left kernel {y : y M = 0 mod p}; nullopt when the kernel is trivial.
// This is the echelon basis vector with the latest leading position, monic.
inline std::optional<std::vector<Int>> left_kernel_mod_p_lex_min(
    const IntMatrix& m, const Int& p) {
  require_prime(p);
  IntMatrix t = m.transpose();  // solve t * y = 0 over F_p
  const std::size_t rows = t.rows(), cols = t.cols();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) t(i, j) = mod_norm(t(i, j), p);
  std::vector<std::size_t> pivot_of_col(cols, rows);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && t(piv, c) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r)
      for (std::size_t j = 0; j < cols; ++j) std::swap(t(piv, j), t(r, j));
    const Int inv = inv_mod(t(r, c), p);
    for (std::size_t j = c; j < cols; ++j) t(r, j) = mod_norm(t(r, j) * inv, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || t(i, c) == 0) continue;
      const Int f = t(i, c);
      for (std::size_t j = c; j < cols; ++j)
        t(i, j) = mod_norm(t(i, j) - f * t(r, j), p);
    }
    pivot_of_col[c] = r;
    ++r;
  }
  // Free columns give a kernel basis.
  std::vector<std::vector<Int>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (pivot_of_col[f] != rows) continue;
    std::vector<Int> y(cols, Int(0));
    y[f] = 1;
    for (std::size_t c = 0; c < cols; ++c)
      if (pivot_of_col[c] != rows) y[c] = mod_norm(-t(pivot_of_col[c], f), p);
    basis.push_back(std::move(y));
  }
  if (basis.empty()) return std::nullopt;
  // Echelonize by coordinate position; the row with the latest pivot spans
  // the max-leading-zeros line, whose monic element is the lex-smallest
  // nonzero kernel vector with entries in [0, p).
  std::size_t rr = 0;
  std::vector<Int> best;
  for (std::size_t c = 0; c < cols && rr < basis.size(); ++c) {
    std::size_t piv = rr;
    while (piv < basis.size() && basis[piv][c] == 0) ++piv;
    if (piv == basis.size()) continue;
    std::swap(basis[rr], basis[piv]);
    const Int inv = inv_mod(basis[rr][c], p);
    for (std::size_t j = c; j < cols; ++j)
      basis[rr][j] = mod_norm(basis[rr][j] * inv, p);
    for (std::size_t i = rr + 1; i < basis.size(); ++i) {
      if (basis[i][c] == 0) continue;
      const Int f2 = basis[i][c];
      for (std::size_t j = c; j < cols; ++j)
        basis[i][j] = mod_norm(basis[i][j] - f2 * basis[rr][j], p);
    }
    best = basis[rr];
    ++rr;
  }
  return best;
}

}  // namespace gkzcc
