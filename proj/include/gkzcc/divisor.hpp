#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gkzcc/fan.hpp"
#include "gkzcc/matrix_core.hpp"
#include "gkzcc/poly.hpp"

namespace gkzcc {

// Variable id layout shared by the divisor and conormal renderers.
// x_j / X_j -> j, xi_j -> 1000 + j, t-slot s (within one cone) -> 2000 + s.
inline constexpr int kXiBase = 1000;
inline constexpr int kTBase = 2000;

inline int to_small_int(const Int& x, const char* what) {
  if (x > 1000000 || x < -1000000)
    throw PreconditionError(std::string("exponent too large for ") + what);
  return static_cast<int>(x);
}

// Shifted exponent table b+ for one cone, with G_B(sigma).
struct ExponentTable {
  Cone sigma;
  std::vector<std::vector<Int>> b;       // [edge slot][column], raw pairings
  std::vector<std::vector<Int>> bplus;   // shifted so each row's min is 0
  Poly g;                                // G_B(sigma) in X and t variables
  std::string g_rendered;
};

inline std::string t_var_name(const Cone& sigma, std::size_t slot) {
  if (sigma.dim() == 1) return "t";
  return "t" + sigma.edges()[slot].str();
}

inline std::string divisor_var_name(const Cone& sigma, int id) {
  if (id >= kTBase) return t_var_name(sigma, static_cast<std::size_t>(id - kTBase));
  return "X" + std::to_string(id);
}

inline ExponentTable exponent_table(const IntMatrix& b, const Cone& sigma) {
  ExponentTable out{sigma, {}, {}, {}, {}};
  const std::size_t n = b.cols();
  for (const auto& e : sigma.edges()) {
    auto pairing = edge_pairing(b, e);
    Int mn = pairing[0];
    for (const auto& x : pairing) mn = std::min(mn, x);
    std::vector<Int> shifted(n);
    for (std::size_t i = 0; i < n; ++i) shifted[i] = pairing[i] - mn;
    out.b.push_back(std::move(pairing));
    out.bplus.push_back(std::move(shifted));
  }
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    Poly term = Poly::variable(static_cast<int>(i) + 1);
    std::string ts = "X" + std::to_string(i + 1);
    for (std::size_t slot = 0; slot < sigma.edges().size(); ++slot) {
      const int e = to_small_int(out.bplus[slot][i], "b+");
      if (e == 0) continue;
      term = term * Poly::variable(kTBase + static_cast<int>(slot), e);
      ts += "*" + t_var_name(sigma, slot);
      if (e > 1) ts += "^" + std::to_string(e);
    }
    out.g += term;
    if (i) s += " + ";
    s += ts;
  }
  out.g_rendered = s;
  return out;
}

// Data exhibiting the total divisor as coordinate hyperplanes in a new
// chart: the sorting permutation, the per-edge prefactor exponents (zero
// under b+), the substituted coordinate, and the divisor list.
struct SncWitness {
  std::vector<int> gamma;           // 1-based column order
  std::vector<Int> prefactor;       // exponent of each t-slot in the factored form
  Poly substitution;                // image of X_{gamma(1)} under the chart map
  std::vector<std::string> divisors;
};

inline SncWitness snc_witness(const IntMatrix& b, const Cone& sigma) {
  auto gamma = is_sigma_good(b, sigma);
  if (!gamma) throw PreconditionError("matrix is not sigma-good on this cone");
  ExponentTable table = exponent_table(b, sigma);
  SncWitness out;
  out.gamma = *gamma;
  const std::size_t lead = static_cast<std::size_t>(out.gamma[0] - 1);
  for (std::size_t slot = 0; slot < sigma.edges().size(); ++slot)
    out.prefactor.push_back(table.bplus[slot][lead]);
  out.substitution = Poly::variable(static_cast<int>(lead) + 1);
  for (std::size_t pos = 1; pos < out.gamma.size(); ++pos) {
    const std::size_t i = static_cast<std::size_t>(out.gamma[pos] - 1);
    Poly term = Poly::variable(static_cast<int>(i) + 1);
    for (std::size_t slot = 0; slot < sigma.edges().size(); ++slot) {
      const int e = to_small_int(table.bplus[slot][i] - table.bplus[slot][lead], "b+ gap");
      if (e != 0) term = term * Poly::variable(kTBase + static_cast<int>(slot), e);
    }
    out.substitution += term;
  }
  out.divisors.push_back("X0");
  out.divisors.push_back("X" + std::to_string(lead + 1));
  for (std::size_t slot = 0; slot < sigma.edges().size(); ++slot)
    out.divisors.push_back(t_var_name(sigma, slot));
  return out;
}

// Subset of E(Sigma) contained in some cone's edge set.
struct EpsilonSet {
  std::vector<Edge> members;  // sorted

  EpsilonSet() = default;
  explicit EpsilonSet(std::vector<Edge> m) : members(std::move(m)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }
  bool empty() const { return members.empty(); }
  bool operator==(const EpsilonSet& o) const { return members == o.members; }
  bool operator<(const EpsilonSet& o) const { return members < o.members; }
  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (i) s += ",";
      s += members[i].str();
    }
    return s + "}";
  }
};

// theta_B(eps): columns achieving the minimal pairing on every edge of eps;
// all columns for the empty set.
inline ThetaSubset theta_of(const IntMatrix& b, const EpsilonSet& eps) {
  const int n = static_cast<int>(b.cols());
  if (eps.empty()) return ThetaSubset::full(n);
  std::vector<int> current;
  bool first = true;
  for (const auto& e : eps.members) {
    auto pairing = edge_pairing(b, e);
    Int mn = pairing[0];
    for (const auto& x : pairing) mn = std::min(mn, x);
    std::vector<int> argmin;
    for (int i = 0; i < n; ++i)
      if (pairing[static_cast<std::size_t>(i)] == mn) argmin.push_back(i + 1);
    if (first) {
      current = std::move(argmin);
      first = false;
    } else {
      std::vector<int> merged;
      std::set_intersection(current.begin(), current.end(), argmin.begin(),
                            argmin.end(), std::back_inserter(merged));
      current = std::move(merged);
    }
  }
  return ThetaSubset(std::move(current));
}

// All subsets of E(Sigma), including the empty one, contained in some
// cone's edge set; deduplicated, lexicographic order.
inline std::vector<EpsilonSet> enumerate_epsilon(const GenerableSet& sigma) {
  std::set<std::vector<Edge>> seen;
  for (const auto& c : sigma.cones()) {
    const auto& es = c.edges();
    const std::size_t d = es.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::vector<Edge> subset;
      for (std::size_t i = 0; i < d; ++i)
        if (mask & (std::size_t{1} << i)) subset.push_back(es[i]);
      std::sort(subset.begin(), subset.end());
      seen.insert(std::move(subset));
    }
  }
  std::vector<EpsilonSet> out;
  for (const auto& s : seen) out.push_back(EpsilonSet(s));
  return out;
}

enum class ConormalKind { StratumPlane, StratumInfinity, Divisor, DivisorInfinity };

inline std::string conormal_kind_name(ConormalKind k) {
  switch (k) {
    case ConormalKind::StratumPlane: return "stratum-plane";
    case ConormalKind::StratumInfinity: return "stratum-infinity";
    case ConormalKind::Divisor: return "divisor";
    case ConormalKind::DivisorInfinity: return "divisor-infinity";
  }
  return "?";
}

struct ConormalLabel {
  ConormalKind kind;
  EpsilonSet eps;
  bool operator==(const ConormalLabel& o) const {
    return kind == o.kind && eps == o.eps;
  }
};

// The four conormal families of N_B(Sigma) for every eps in E(Sigma)'s
// admissible subsets. Requires a Sigma-good matrix.
inline std::vector<ConormalLabel> n_components(const IntMatrix& b,
                                               const GenerableSet& sigma) {
  if (!is_Sigma_good(b, sigma))
    throw PreconditionError(
        "matrix is not Sigma-good; resolve() the fan before listing components");
  std::vector<ConormalLabel> out;
  for (const auto& eps : enumerate_epsilon(sigma))
    for (ConormalKind k :
         {ConormalKind::StratumPlane, ConormalKind::StratumInfinity,
          ConormalKind::Divisor, ConormalKind::DivisorInfinity})
      out.push_back({k, eps});
  return out;
}

enum class SupportKind {
  ZeroSection,
  InfinityConormal,
  ResolvedSupport,
  ResolvedSupportInfinity
};

inline std::string support_kind_name(SupportKind k) {
  switch (k) {
    case SupportKind::ZeroSection: return "zero-section";
    case SupportKind::InfinityConormal: return "infinity-conormal";
    case SupportKind::ResolvedSupport: return "resolved-support";
    case SupportKind::ResolvedSupportInfinity: return "resolved-support-infinity";
  }
  return "?";
}

struct SupportLabel {
  SupportKind kind;
  std::optional<ThetaSubset> theta;  // present for the resolved kinds
  std::vector<std::pair<EpsilonSet, Cone>> provenance;
};

// Support bound for the direct image of N_B(Sigma): the two fixed labels
// plus S-bar / S-infinity at theta_B(eps n E(sigma)). For eps = {} the
// divisor D_B(Sigma) itself is covered chart-wise, so sigma ranges over
// all of Sigma there.
inline std::vector<SupportLabel> direct_image_support(const IntMatrix& b,
                                                      const GenerableSet& sigma) {
  if (!is_Sigma_good(b, sigma))
    throw PreconditionError(
        "matrix is not Sigma-good; resolve() the fan before computing supports");
  std::map<ThetaSubset, std::vector<std::pair<EpsilonSet, Cone>>> by_theta;
  for (const auto& eps : enumerate_epsilon(sigma)) {
    std::vector<Cone> charts;
    if (eps.empty()) {
      charts = sigma.cones();
    } else {
      std::set<Cone> star;
      for (const auto& e : eps.members) {
        auto cs = sigma.star(e);
        star.insert(cs.begin(), cs.end());
      }
      charts.assign(star.begin(), star.end());
    }
    for (const auto& c : charts) {
      std::vector<Edge> inter;
      for (const auto& e : eps.members)
        if (c.has_edge(e)) inter.push_back(e);
      ThetaSubset theta = theta_of(b, EpsilonSet(std::move(inter)));
      by_theta[theta].push_back({eps, c});
    }
  }
  std::vector<SupportLabel> out;
  out.push_back({SupportKind::ZeroSection, std::nullopt, {}});
  out.push_back({SupportKind::InfinityConormal, std::nullopt, {}});
  for (const auto& [theta, prov] : by_theta) {
    out.push_back({SupportKind::ResolvedSupport, theta, prov});
    out.push_back({SupportKind::ResolvedSupportInfinity, theta, prov});
  }
  return out;
}

}  // namespace gkzcc
