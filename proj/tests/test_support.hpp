#pragma once

#include <random>
#include <vector>

#include "gkzcc/int_matrix.hpp"
#include "gkzcc/matrix_core.hpp"

namespace gkzcc::testing {

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                               std::size_t cols, int lo, int hi) {
  std::uniform_int_distribution<int> entry(lo, hi);
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = entry(rng);
  return m;
}

// Product of random elementary row operations: always unimodular.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n,
                                   int ops = 8) {
  std::uniform_int_distribution<std::size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> coef(-2, 2), kind(0, 2);
  IntMatrix u = IntMatrix::identity(n);
  for (int t = 0; t < ops; ++t) {
    const std::size_t i = idx(rng), j = idx(rng);
    switch (kind(rng)) {
      case 0: {
        if (i == j) break;
        const Int c = coef(rng);
        for (std::size_t k = 0; k < n; ++k) u(i, k) += c * u(j, k);
        break;
      }
      case 1:
        for (std::size_t k = 0; k < n; ++k) std::swap(u(i, k), u(j, k));
        break;
      default:
        for (std::size_t k = 0; k < n; ++k) u(i, k) = -u(i, k);
        break;
    }
  }
  return u;
}

// Independent determinant by Laplace expansion, for the oracle rank.
inline Int laplace_det(const IntMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  Int det = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    IntMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    const Int term = m(0, j) * laplace_det(minor);
    det += (j % 2 == 0) ? term : -term;
  }
  return det;
}

// Oracle rank over Q: the largest k with a nonzero k x k minor.
inline std::size_t oracle_rank_rational(const IntMatrix& m) {
  const std::size_t rmax = std::min(m.rows(), m.cols());
  for (std::size_t k = rmax; k >= 1; --k) {
    std::vector<std::size_t> ri(k), ci(k);
    // enumerate k-subsets of rows and columns
    std::vector<std::size_t> rows(m.rows()), cols(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) rows[i] = i;
    for (std::size_t i = 0; i < m.cols(); ++i) cols[i] = i;
    std::vector<bool> rsel(m.rows(), false), csel(m.cols(), false);
    std::fill(rsel.end() - static_cast<std::ptrdiff_t>(k), rsel.end(), true);
    do {
      std::vector<std::size_t> rset;
      for (std::size_t i = 0; i < m.rows(); ++i)
        if (rsel[i]) rset.push_back(i);
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.end() - static_cast<std::ptrdiff_t>(k), csel.end(), true);
      do {
        std::vector<std::size_t> cset;
        for (std::size_t i = 0; i < m.cols(); ++i)
          if (csel[i]) cset.push_back(i);
        IntMatrix minor(k, k);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) minor(a, b) = m(rset[a], cset[b]);
        if (laplace_det(minor) != 0) return k;
      } while (std::next_permutation(csel.begin(), csel.end()));
    } while (std::next_permutation(rsel.begin(), rsel.end()));
  }
  return 0;
}

// Oracle rank over F_p: largest k with a k x k minor whose determinant is
// nonzero mod p.
inline std::size_t oracle_rank_mod_p(const IntMatrix& m, const Int& p) {
  const std::size_t rmax = std::min(m.rows(), m.cols());
  for (std::size_t k = rmax; k >= 1; --k) {
    std::vector<bool> rsel(m.rows(), false), csel(m.cols(), false);
    std::fill(rsel.end() - static_cast<std::ptrdiff_t>(k), rsel.end(), true);
    do {
      std::vector<std::size_t> rset;
      for (std::size_t i = 0; i < m.rows(); ++i)
        if (rsel[i]) rset.push_back(i);
      std::fill(csel.begin(), csel.end(), false);
      std::fill(csel.end() - static_cast<std::ptrdiff_t>(k), csel.end(), true);
      do {
        std::vector<std::size_t> cset;
        for (std::size_t i = 0; i < m.cols(); ++i)
          if (csel[i]) cset.push_back(i);
        IntMatrix minor(k, k);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) minor(a, b) = m(rset[a], cset[b]);
        if (laplace_det(minor) % p != 0) return k;
      } while (std::next_permutation(csel.begin(), csel.end()));
    } while (std::next_permutation(rsel.begin(), rsel.end()));
  }
  return 0;
}

// Per-theta oracle for p-nondegeneracy, independent of the library path.
inline bool oracle_p_nondegenerate(const IntMatrix& a, const Int& p) {
  const int n = static_cast<int>(a.cols());
  for (const auto& theta : all_subsets(n, false)) {
    IntMatrix sub = column_submatrix(a, theta);
    if (oracle_rank_rational(sub) != oracle_rank_mod_p(sub, p)) return false;
  }
  return true;
}

}  // namespace gkzcc::testing
