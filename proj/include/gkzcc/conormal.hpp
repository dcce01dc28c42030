#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "gkzcc/divisor.hpp"
#include "gkzcc/int_matrix.hpp"
#include "gkzcc/matrix_core.hpp"
#include "gkzcc/poly.hpp"

namespace gkzcc {

inline int x_var(int j) { return j; }
inline int xi_var(int j) { return kXiBase + j; }

inline std::string chart_var_name(int id) {
  if (id >= kXiBase) return "xi" + std::to_string(id - kXiBase);
  return "x" + std::to_string(id);
}

// The formal relation xi(X_k/X_k) = -sum_{j != k} (X_j/X_k) xi(X_j/X_k).
inline Poly formal_xi_diagonal(int k, int n) {
  Poly out;
  for (int j = 0; j <= n; ++j) {
    if (j == k) continue;
    out -= Poly::variable(x_var(j)) * Poly::variable(xi_var(j));
  }
  return out;
}

enum class GeneratorFamily { Xi, L, Box, XiInf };

inline std::string generator_family_name(GeneratorFamily f) {
  switch (f) {
    case GeneratorFamily::Xi: return "Xi";
    case GeneratorFamily::L: return "L";
    case GeneratorFamily::Box: return "Box";
    case GeneratorFamily::XiInf: return "XiInf";
  }
  return "?";
}

struct GeneratorSet {
  int chart = 0;
  GeneratorFamily family = GeneratorFamily::Xi;
  std::vector<Poly> generators;

  std::vector<std::string> rendered() const {
    std::vector<std::string> out;
    out.reserve(generators.size());
    for (const auto& g : generators) out.push_back(g.render(chart_var_name));
    return out;
  }
};

inline void check_chart(const IntMatrix& a, const ThetaSubset& theta, int k) {
  const int n = static_cast<int>(a.cols());
  if (k < 0 || k > n) throw PreconditionError("chart index out of range");
  for (int j : theta.members)
    if (j > n) throw PreconditionError("theta member out of column range");
}

// Xi: the coordinate xi-variables off theta and the chart; XiInf swaps
// xi(X_0/X_k) for X_0/X_k and needs k >= 1.
inline GeneratorSet xi_generators(const IntMatrix& a, const ThetaSubset& theta,
                                  int k, bool infinity) {
  check_chart(a, theta, k);
  if (infinity && k == 0)
    throw PreconditionError("the infinity chart family needs k >= 1");
  const int n = static_cast<int>(a.cols());
  GeneratorSet out{k, infinity ? GeneratorFamily::XiInf : GeneratorFamily::Xi, {}};
  for (int j = 0; j <= n; ++j) {
    if (j == k || theta.contains(j)) continue;
    if (infinity && j == 0)
      out.generators.push_back(Poly::variable(x_var(0)));
    else
      out.generators.push_back(Poly::variable(xi_var(j)));
  }
  return out;
}

// One generator per row of A, restricted to columns in theta, with the
// formal diagonal relation substituted when k lies in theta. Zero rows are
// dropped and duplicates removed.
inline GeneratorSet l_generators(const IntMatrix& a, const ThetaSubset& theta,
                                 int k) {
  check_chart(a, theta, k);
  const int n = static_cast<int>(a.cols());
  GeneratorSet out{k, GeneratorFamily::L, {}};
  for (std::size_t row = 0; row < a.rows(); ++row) {
    Poly g;
    for (int j : theta.members) {
      const Int& coef = a(row, static_cast<std::size_t>(j - 1));
      if (coef == 0) continue;
      if (j == k)
        g += coef * formal_xi_diagonal(k, n);
      else
        g += coef * (Poly::variable(x_var(j)) * Poly::variable(xi_var(j)));
    }
    if (g.is_zero()) continue;
    if (std::find(out.generators.begin(), out.generators.end(), g) ==
        out.generators.end())
      out.generators.push_back(std::move(g));
  }
  return out;
}

// Binomials xi^{w+} - xi^{w-} over a canonical lattice basis of
// ker A[theta]; the chart's formal diagonal is substituted when k in theta.
inline GeneratorSet box_generators(const IntMatrix& a, const ThetaSubset& theta,
                                   int k) {
  check_chart(a, theta, k);
  const int n = static_cast<int>(a.cols());
  GeneratorSet out{k, GeneratorFamily::Box, {}};
  if (theta.empty()) return out;
  auto basis = kernel_lattice_basis(column_submatrix(a, theta));
  for (const auto& w : basis) {
    Poly pos = Poly::constant(1), neg = Poly::constant(1);
    for (std::size_t idx = 0; idx < w.size(); ++idx) {
      const int j = theta.members[idx];
      const int e = to_small_int(abs(w[idx]), "kernel exponent");
      if (e == 0) continue;
      Poly base = j == k ? formal_xi_diagonal(k, n) : Poly::variable(xi_var(j));
      if (w[idx] > 0)
        pos = pos * base.pow(e);
      else
        neg = neg * base.pow(e);
    }
    out.generators.push_back(pos - neg);
  }
  return out;
}

struct DimReport {
  ThetaSubset theta;
  int chart = 0;
  std::size_t r = 0;                    // rank over Q
  std::optional<std::size_t> r_p;       // rank mod p (char-p mode)
  Int dim_lower, dim_upper;
  std::optional<Int> dim_exact;
  std::vector<int> pivots_mod_p;        // n_1 < ... < n_{r_p}
  std::vector<int> pivots_rational_ext; // n_{r_p+1} < ... < n_r
};

// Dimension of S_k(A, theta): n in characteristic zero; in characteristic p
// the closed-form case split on the leftmost echelon pivot sets.
inline DimReport dim_report(const IntMatrix& a, const ThetaSubset& theta, int k,
                            const std::optional<Int>& p = std::nullopt) {
  check_chart(a, theta, k);
  if (theta.empty()) throw PreconditionError("dim_report needs nonempty theta");
  const Int n = static_cast<Int>(a.cols());
  DimReport rep;
  rep.theta = theta;
  rep.chart = k;
  rep.r = rank_rational(column_submatrix(a, theta));
  if (!p) {
    rep.dim_lower = n;
    rep.dim_upper = n;
    rep.dim_exact = n;
    return rep;
  }
  require_prime(*p);
  auto rank_q_of = [&](const std::vector<int>& cols) {
    return cols.empty() ? std::size_t{0}
                        : rank_rational(column_submatrix(a, ThetaSubset(cols)));
  };
  auto rank_p_of = [&](const std::vector<int>& cols) {
    return cols.empty() ? std::size_t{0}
                        : rank_mod_p(column_submatrix(a, ThetaSubset(cols)), *p);
  };
  std::vector<int> np;  // leftmost maximal independent set mod p
  for (int j : theta.members) {
    std::vector<int> trial = np;
    trial.push_back(j);
    if (rank_p_of(trial) == trial.size()) np = std::move(trial);
  }
  std::vector<int> ext = np;  // extended leftmost over Q
  for (int j : theta.members) {
    if (std::binary_search(np.begin(), np.end(), j)) continue;
    std::vector<int> trial = ext;
    trial.push_back(j);
    std::sort(trial.begin(), trial.end());
    if (rank_q_of(trial) == trial.size()) ext = std::move(trial);
  }
  rep.r_p = np.size();
  rep.pivots_mod_p = np;
  for (int j : ext)
    if (!std::binary_search(np.begin(), np.end(), j))
      rep.pivots_rational_ext.push_back(j);
  const Int gap = static_cast<Int>(rep.r) - static_cast<Int>(*rep.r_p);
  rep.dim_lower = n;
  rep.dim_upper = n + gap;
  const bool k_in_ext = std::binary_search(rep.pivots_rational_ext.begin(),
                                           rep.pivots_rational_ext.end(), k);
  rep.dim_exact = n + gap - (k_in_ext ? 1 : 0);
  return rep;
}

// Rational point of S_k(A, theta) in chart coordinates; slot k is absent.
struct SamplePoint {
  std::map<int, Rat> x;   // j -> value of X_j/X_k
  std::map<int, Rat> xi;  // j -> value of xi(X_j/X_k)

  Rat value_of(int id) const {
    if (id >= kXiBase) return xi.at(id - kXiBase);
    return x.at(id);
  }
};

namespace detail {

inline Rat random_nonzero_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 5), den(1, 3), sign(0, 1);
  const int s = sign(rng) ? 1 : -1;
  return Rat(s * num(rng), den(rng));
}

inline Rat random_rat(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
  return Rat(num(rng), den(rng));
}

}  // namespace detail

// Points from the torus-monomial parametrization: xi_j = prod_i t_i^{a_ij}
// on theta, xi_j = 0 off theta, x solved from the L-linear constraints.
// When the chart index lies in theta and the draw is degenerate, the
// zero-section fallback (all xi = 0) is emitted instead.
inline std::vector<SamplePoint> membership_sample(const IntMatrix& a,
                                                  const ThetaSubset& theta, int k,
                                                  std::size_t count,
                                                  std::uint64_t seed = 20240901) {
  check_chart(a, theta, k);
  const int n = static_cast<int>(a.cols());
  const std::size_t d1 = a.rows();
  std::mt19937_64 rng(seed);
  std::vector<SamplePoint> out;

  std::vector<int> solve_for;  // theta members except the chart
  for (int j : theta.members)
    if (j != k) solve_for.push_back(j);
  const bool chart_in_theta = theta.contains(k);

  auto zero_section_point = [&]() {
    SamplePoint pt;
    for (int j = 0; j <= n; ++j) {
      if (j == k) continue;
      pt.x[j] = detail::random_rat(rng);
      pt.xi[j] = 0;
    }
    return pt;
  };

  const int max_retries = 32;
  for (std::size_t c = 0; c < count; ++c) {
    bool emitted = false;
    for (int attempt = 0; attempt < max_retries && !emitted; ++attempt) {
      if (theta.empty()) {
        out.push_back(zero_section_point());
        emitted = true;
        break;
      }
      std::vector<Rat> t(d1);
      for (auto& ti : t) ti = detail::random_nonzero_rat(rng);
      std::map<int, Rat> cval;  // monomial value per theta column
      for (int j : theta.members) {
        Rat v = 1;
        for (std::size_t i = 0; i < d1; ++i)
          v *= pow_rat(t[i], a(i, static_cast<std::size_t>(j - 1)));
        cval[j] = v;
      }
      // rows: d+1 linear constraints, plus the formal-diagonal consistency
      // row when k lies in theta
      const std::size_t m = solve_for.size();
      std::vector<std::vector<Rat>> rows;
      for (std::size_t i = 0; i < d1; ++i) {
        std::vector<Rat> row(m + 1, Rat(0));
        for (std::size_t s = 0; s < m; ++s)
          row[s] = Rat(a(i, static_cast<std::size_t>(solve_for[s] - 1))) *
                   cval[solve_for[s]];
        if (chart_in_theta)
          row[m] = -Rat(a(i, static_cast<std::size_t>(k - 1))) * cval[k];
        rows.push_back(std::move(row));
      }
      if (chart_in_theta) {
        std::vector<Rat> row(m + 1, Rat(0));
        for (std::size_t s = 0; s < m; ++s) row[s] = cval[solve_for[s]];
        row[m] = -cval[k];
        rows.push_back(std::move(row));
      }
      // Gaussian elimination over Q with random free variables.
      std::vector<int> pivot_col;
      std::size_t rr = 0;
      for (std::size_t col = 0; col < m && rr < rows.size(); ++col) {
        std::size_t piv = rr;
        while (piv < rows.size() && rows[piv][col] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rr], rows[piv]);
        const Rat inv = Rat(1) / rows[rr][col];
        for (auto& v : rows[rr]) v *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (i == rr || rows[i][col] == 0) continue;
          const Rat f = rows[i][col];
          for (std::size_t jj = col; jj <= m; ++jj)
            rows[i][jj] -= f * rows[rr][jj];
        }
        pivot_col.push_back(static_cast<int>(col));
        ++rr;
      }
      bool inconsistent = false;
      for (std::size_t i = rr; i < rows.size(); ++i)
        if (rows[i][m] != 0) inconsistent = true;
      if (inconsistent) {
        // Only the k-in-theta consistency row can clash; the monomial
        // parametrization misses such charts entirely, so fall back to the
        // zero-section branch of the variety.
        if (chart_in_theta) {
          out.push_back(zero_section_point());
          emitted = true;
        }
        continue;
      }
      std::vector<Rat> sol(m, Rat(0));
      std::vector<bool> is_pivot(m, false);
      for (std::size_t i = 0; i < pivot_col.size(); ++i)
        is_pivot[static_cast<std::size_t>(pivot_col[i])] = true;
      for (std::size_t s = 0; s < m; ++s)
        if (!is_pivot[s]) sol[s] = detail::random_rat(rng);
      for (std::size_t i = 0; i < pivot_col.size(); ++i) {
        const auto pcol = static_cast<std::size_t>(pivot_col[i]);
        Rat v = rows[i][m];
        for (std::size_t s = 0; s < m; ++s)
          if (s != pcol && rows[i][s] != 0) v -= rows[i][s] * sol[s];
        sol[pcol] = v;
      }
      SamplePoint pt;
      for (int j = 0; j <= n; ++j) {
        if (j == k) continue;
        if (theta.contains(j))
          pt.xi[j] = cval[j];
        else
          pt.xi[j] = 0;
      }
      for (std::size_t s = 0; s < m; ++s) pt.x[solve_for[s]] = sol[s];
      for (int j = 0; j <= n; ++j) {
        if (j == k || pt.x.count(j)) continue;
        pt.x[j] = detail::random_rat(rng);
      }
      out.push_back(std::move(pt));
      emitted = true;
    }
    if (!emitted)
      throw std::runtime_error("membership_sample: degenerate draws exhausted retries");
  }
  // Defining property: every emitted point annihilates all three families.
  GeneratorSet xi = xi_generators(a, theta, k, false);
  GeneratorSet l = l_generators(a, theta, k);
  GeneratorSet box = box_generators(a, theta, k);
  for (const auto& pt : out)
    for (const auto* fam : {&xi, &l, &box})
      for (const auto& g : fam->generators)
        if (g.eval([&](int id) { return pt.value_of(id); }) != 0)
          throw std::logic_error("membership_sample produced an off-variety point");
  return out;
}

}  // namespace gkzcc
