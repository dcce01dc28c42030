#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gkzcc/int_matrix.hpp"
#include "gkzcc/numeric.hpp"

namespace gkzcc {

// Column index subset of {1,...,n}, strictly increasing, 1-based.
struct ThetaSubset {
  std::vector<int> members;

  ThetaSubset() = default;
  explicit ThetaSubset(std::vector<int> m) : members(std::move(m)) {
    std::sort(members.begin(), members.end());
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (members[i] < 1) throw PreconditionError("theta members are 1-based");
      if (i > 0 && members[i] == members[i - 1])
        throw PreconditionError("duplicate theta member");
    }
  }

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
  bool contains(int j) const {
    return std::binary_search(members.begin(), members.end(), j);
  }
  bool operator==(const ThetaSubset& o) const { return members == o.members; }
  bool operator!=(const ThetaSubset& o) const { return members != o.members; }
  // Canonical enumeration order: smallest cardinality first, then lexicographic.
  bool operator<(const ThetaSubset& o) const {
    if (members.size() != o.members.size())
      return members.size() < o.members.size();
    return members < o.members;
  }

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(members[i]);
    }
    return s + "}";
  }

  static ThetaSubset full(int n) {
    std::vector<int> m(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) m[static_cast<std::size_t>(j - 1)] = j;
    return ThetaSubset(std::move(m));
  }
};

// All subsets of {1,...,n} in canonical (cardinality, lex) order.
inline std::vector<ThetaSubset> all_subsets(int n, bool include_empty) {
  if (n < 0 || n > 24) throw PreconditionError("subset sweep limited to n <= 24");
  std::vector<ThetaSubset> out;
  for (unsigned mask = include_empty ? 0u : 1u; mask < (1u << n); ++mask) {
    std::vector<int> m;
    for (int j = 0; j < n; ++j)
      if (mask & (1u << j)) m.push_back(j + 1);
    out.emplace_back(std::move(m));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Multiplicative character of mu_{q-1}^{d+1} as an exponent vector mod q-1.
struct CharacterVector {
  Int order;                   // q - 1
  std::vector<Int> exponents;  // length d+1, each in [0, order)

  CharacterVector(Int ord, std::vector<Int> exps)
      : order(std::move(ord)), exponents(std::move(exps)) {
    if (order < 1) throw PreconditionError("character order must be positive");
    for (auto& e : exponents) e = mod_norm(e, order);
  }
  bool nontrivial0() const { return !exponents.empty() && exponents[0] != 0; }
  bool operator==(const CharacterVector& o) const {
    return order == o.order && exponents == o.exponents;
  }
};

struct ReductionStep {
  IntMatrix p;              // unimodular left factor
  std::size_t divided_row;  // row divided by the prime (0-based; always 0 here)
};

struct ReductionTranscript {
  IntMatrix initial;
  IntMatrix final_matrix;
  std::vector<ReductionStep> steps;
  Int prime = 0;

  // Replays the recorded steps from `initial`; the result must equal
  // `final_matrix` bit-exactly.
  IntMatrix replay() const {
    IntMatrix a = initial;
    for (const auto& s : steps) {
      a = s.p * a;
      for (std::size_t j = 0; j < a.cols(); ++j) {
        if (a(s.divided_row, j) % prime != 0)
          throw std::logic_error("transcript replay: row not divisible");
        a(s.divided_row, j) /= prime;
      }
    }
    return a;
  }
};

inline IntMatrix column_submatrix(const IntMatrix& m, const ThetaSubset& theta) {
  if (theta.empty()) throw PreconditionError("empty theta has no submatrix");
  IntMatrix out(m.rows(), theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const int j = theta.members[k];
    if (j < 1 || static_cast<std::size_t>(j) > m.cols())
      throw PreconditionError("theta member out of column range");
    for (std::size_t i = 0; i < m.rows(); ++i)
      out(i, k) = m(i, static_cast<std::size_t>(j - 1));
  }
  return out;
}

inline IntMatrix hat(const IntMatrix& b) {
  IntMatrix out(b.rows() + 1, b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) out(0, j) = 1;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) out(i + 1, j) = b(i, j);
  return out;
}

inline IntMatrix unhat(const IntMatrix& a) {
  if (a.rows() < 2) throw PreconditionError("unhat needs at least two rows");
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (a(0, j) != 1) throw PreconditionError("matrix is not in hat form");
  IntMatrix out(a.rows() - 1, a.cols());
  for (std::size_t i = 1; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i - 1, j) = a(i, j);
  return out;
}

inline bool is_sub_non_confluent(const IntMatrix& b) {
  return rank_rational(hat(b)) == b.rows() + 1;
}

struct NonConfluenceResult {
  bool value = false;
  std::optional<IntMatrix> witness;  // unimodular P with PA having all-ones first row
};

// A (with d+1 rows) is non-confluent iff it has full row rank and the
// all-ones vector lies in the row lattice and is primitive there. The
// witness is produced constructively from the lattice normal form.
inline NonConfluenceResult is_non_confluent(const IntMatrix& a) {
  const std::size_t m = a.rows();
  if (rank_rational(a) != m) return {};
  RowHermite hnf = hermite_row_form(a);
  std::vector<Int> ones(a.cols(), Int(1));
  auto coords = lattice_coordinates(hnf, ones);
  if (!coords) return {};
  if (gcd_all(*coords) != 1) return {};  // all-ones not primitive in the lattice
  // ones = coords * H = (coords * U) * A
  std::vector<Int> y(m, Int(0));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < coords->size(); ++k)
      y[i] += (*coords)[k] * hnf.u(k, i);
  IntMatrix p = complete_primitive_row(y);
  return {true, p};
}

struct NondegeneracyReport {
  bool value = false;
  std::vector<ThetaSubset> failing;  // canonical (cardinality, lex) order
};

// rank A[theta] = rank_kappa A[theta] for every nonempty theta.
inline NondegeneracyReport is_p_nondegenerate(const IntMatrix& a, const Int& p) {
  require_prime(p);
  NondegeneracyReport rep;
  rep.value = true;
  for (const auto& theta : all_subsets(static_cast<int>(a.cols()), false)) {
    IntMatrix sub = column_submatrix(a, theta);
    if (rank_rational(sub) != rank_mod_p(sub, p)) {
      rep.value = false;
      rep.failing.push_back(theta);
    }
  }
  return rep;
}

inline IntMatrix p_divide_row(const IntMatrix& a, std::size_t row, const Int& p) {
  require_prime(p);
  if (row >= a.rows()) throw PreconditionError("row index out of range");
  IntMatrix out = a;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (out(row, j) % p != 0)
      throw PreconditionError("row entry not divisible by p");
    out(row, j) /= p;
  }
  return out;
}

// Repeatedly clears one factor of p from det(A): lift the lex-smallest mod-p
// left-kernel vector to a primitive row, complete it to a unimodular P, and
// divide the first row of PA by p. val_p(det) drops by exactly 1 per step.
inline std::pair<IntMatrix, ReductionTranscript> square_reduce(const IntMatrix& a,
                                                               const Int& p) {
  require_prime(p);
  if (a.rows() != a.cols()) throw PreconditionError("square_reduce needs a square matrix");
  Int det = determinant(a);
  if (det == 0) throw PreconditionError("square_reduce needs a nonsingular matrix");
  ReductionTranscript tr;
  tr.initial = a;
  tr.prime = p;
  IntMatrix cur = a;
  Int val = det % p == 0 ? p_valuation(det, p) : Int(0);
  while (val > 0) {
    auto y = left_kernel_mod_p_lex_min(cur, p);
    if (!y) throw std::logic_error("square_reduce: kernel vanished with val_p > 0");
    Int g = gcd_all(*y);
    for (auto& e : *y) e /= g;
    IntMatrix pmat = complete_primitive_row(*y);
    cur = pmat * cur;
    for (std::size_t j = 0; j < cur.cols(); ++j) {
      if (cur(0, j) % p != 0)
        throw std::logic_error("square_reduce: first row not divisible");
      cur(0, j) /= p;
    }
    tr.steps.push_back({std::move(pmat), 0});
    --val;
  }
  tr.final_matrix = cur;
  return {cur, tr};
}

// chi^M with exponent vector e'_i = sum_k m_{ik} e_k mod order.
inline CharacterVector character_transform(const CharacterVector& chi,
                                           const IntMatrix& m) {
  const std::size_t d1 = chi.exponents.size();
  if (m.rows() != d1 || m.cols() != d1)
    throw PreconditionError("character transform dimension mismatch");
  std::vector<Int> out(d1, Int(0));
  for (std::size_t i = 0; i < d1; ++i) {
    for (std::size_t k = 0; k < d1; ++k) out[i] += m(i, k) * chi.exponents[k];
    out[i] = mod_norm(out[i], chi.order);
  }
  return CharacterVector(chi.order, std::move(out));
}

}  // namespace gkzcc
