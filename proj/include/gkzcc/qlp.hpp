#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "gkzcc/numeric.hpp"

namespace gkzcc {

// Homogeneous linear constraint over Int coefficients.
enum class Rel { Eq, Ge, Gt };  // c.x = 0, c.x >= 0, c.x > 0

struct LinConstraint {
  std::vector<Int> coeffs;
  Rel rel;
};

namespace detail {

inline void reduce_row(std::vector<Int>& c) {
  Int g = gcd_all(c);
  if (g > 1)
    for (auto& x : c) x /= g;
}

}  // namespace detail

// Decides whether the homogeneous system {c.x (rel) 0} has a rational
// solution, by substitution of equalities followed by Fourier-Motzkin
// elimination. Exact; intended for the small dimensions of fan and
// umbrella computations.
inline bool feasible(std::vector<LinConstraint> sys, std::size_t nvars) {
  for (auto& c : sys)
    if (c.coeffs.size() != nvars)
      throw PreconditionError("constraint arity mismatch");

  // Eliminate equalities by exact substitution.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t e = 0; e < sys.size(); ++e) {
      if (sys[e].rel != Rel::Eq) continue;
      std::size_t v = nvars;
      for (std::size_t j = 0; j < nvars; ++j)
        if (sys[e].coeffs[j] != 0) { v = j; break; }
      if (v == nvars) {  // 0 = 0
        sys.erase(sys.begin() + static_cast<std::ptrdiff_t>(e));
        changed = true;
        break;
      }
      LinConstraint eq = sys[e];
      sys.erase(sys.begin() + static_cast<std::ptrdiff_t>(e));
      const Int a = eq.coeffs[v];
      for (auto& c : sys) {
        const Int b = c.coeffs[v];
        if (b == 0) continue;
        // c <- a*c - b*eq, scaled positive so the relation is preserved
        Int s = a > 0 ? a : -a;
        Int t = a > 0 ? b : -b;
        for (std::size_t j = 0; j < nvars; ++j)
          c.coeffs[j] = s * c.coeffs[j] - t * eq.coeffs[j];
        detail::reduce_row(c.coeffs);
      }
      changed = true;
      break;
    }
  }

  // Fourier-Motzkin on the remaining inequalities.
  for (std::size_t v = 0; v < nvars; ++v) {
    std::vector<LinConstraint> pos, neg, rest;
    for (auto& c : sys) {
      if (c.coeffs[v] > 0) pos.push_back(std::move(c));
      else if (c.coeffs[v] < 0) neg.push_back(std::move(c));
      else rest.push_back(std::move(c));
    }
    sys = std::move(rest);
    for (const auto& pc : pos)
      for (const auto& nc : neg) {
        LinConstraint comb;
        comb.rel = (pc.rel == Rel::Gt || nc.rel == Rel::Gt) ? Rel::Gt : Rel::Ge;
        comb.coeffs.resize(nvars);
        const Int alpha = -nc.coeffs[v];  // > 0
        const Int beta = pc.coeffs[v];    // > 0
        for (std::size_t j = 0; j < nvars; ++j)
          comb.coeffs[j] = alpha * pc.coeffs[j] + beta * nc.coeffs[j];
        detail::reduce_row(comb.coeffs);
        sys.push_back(std::move(comb));
      }
    // Drop satisfied zero rows early; detect contradictions.
    std::vector<LinConstraint> keep;
    for (auto& c : sys) {
      bool zero = true;
      for (const auto& x : c.coeffs)
        if (x != 0) { zero = false; break; }
      if (!zero) {
        keep.push_back(std::move(c));
        continue;
      }
      if (c.rel == Rel::Gt) return false;  // 0 > 0
    }
    sys = std::move(keep);
  }
  for (const auto& c : sys)
    if (c.rel == Rel::Gt) return false;
  return true;
}

}  // namespace gkzcc
