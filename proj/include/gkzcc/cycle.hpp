#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gkzcc/conormal.hpp"
#include "gkzcc/divisor.hpp"
#include "gkzcc/fan.hpp"
#include "gkzcc/matrix_core.hpp"
#include "gkzcc/qlp.hpp"

namespace gkzcc {

struct TrivialCharacterError : std::runtime_error {
  TrivialCharacterError()
      : std::runtime_error("chi_0 is trivial; the comparison theorem does not apply") {}
};

// Raised when a non-square matrix stays p-degenerate after the row-division
// scan: the characteristic-cycle formula may not apply (method inapplicable).
struct NondegeneracyFailure : std::runtime_error {
  std::vector<ThetaSubset> failing;
  std::vector<std::pair<ThetaSubset, Int>> dim_excess;  // theta -> dim_exact
  Int ambient_n = 0;

  NondegeneracyFailure(std::vector<ThetaSubset> f,
                       std::vector<std::pair<ThetaSubset, Int>> excess, Int n)
      : std::runtime_error(message(f, excess, n)),
        failing(std::move(f)),
        dim_excess(std::move(excess)),
        ambient_n(std::move(n)) {}

  static std::string message(const std::vector<ThetaSubset>& f,
                             const std::vector<std::pair<ThetaSubset, Int>>& excess,
                             const Int& n) {
    std::string s = "matrix is not p-nondegenerate; failing theta:";
    for (const auto& t : f) s += " " + t.str();
    for (const auto& [t, dim] : excess)
      s += "; dim S_0(A," + t.str() + ") = " + dim.str() + " > " + n.str();
    return s;
  }
};

enum class CycleKind {
  ZeroSection,
  InfinityConormal,
  UmbrellaStratum,
  ResolvedSupport,
  ResolvedSupportInfinity
};

inline std::string cycle_kind_name(CycleKind k) {
  switch (k) {
    case CycleKind::ZeroSection: return "zero-section";
    case CycleKind::InfinityConormal: return "infinity-conormal";
    case CycleKind::UmbrellaStratum: return "umbrella-stratum";
    case CycleKind::ResolvedSupport: return "resolved-support";
    case CycleKind::ResolvedSupportInfinity: return "resolved-support-infinity";
  }
  return "?";
}

enum class FieldTag { Char0, CharP };

struct CycleComponent {
  CycleKind kind;
  std::optional<ThetaSubset> theta;  // present for stratum kinds
  std::optional<Int> multiplicity;   // nullopt renders as the symbol m(theta)
  FieldTag field = FieldTag::Char0;

  std::string mult_str() const {
    if (multiplicity) return multiplicity->str();
    return "m(" + (theta ? theta->str() : std::string("{}")) + ")";
  }
  bool operator==(const CycleComponent& o) const {
    return kind == o.kind && theta == o.theta && multiplicity == o.multiplicity &&
           field == o.field;
  }
};

struct Cycle {
  Int sign_exponent = 0;  // rendered as (-1)^{d+n}
  std::vector<CycleComponent> components;

  bool operator==(const Cycle& o) const {
    return sign_exponent == o.sign_exponent && components == o.components;
  }

  void canonicalize() {
    std::sort(components.begin(), components.end(),
              [](const CycleComponent& a, const CycleComponent& b) {
                if (a.kind != b.kind) return a.kind < b.kind;
                if (a.theta.has_value() != b.theta.has_value())
                  return !a.theta.has_value();
                if (a.theta && b.theta && !(*a.theta == *b.theta))
                  return *a.theta < *b.theta;
                return false;
              });
    // merge duplicates by (kind, theta); integer multiplicities add
    std::vector<CycleComponent> merged;
    for (auto& c : components) {
      if (!merged.empty() && merged.back().kind == c.kind &&
          merged.back().theta == c.theta) {
        if (merged.back().multiplicity && c.multiplicity)
          *merged.back().multiplicity += *c.multiplicity;
        else
          merged.back().multiplicity.reset();
        continue;
      }
      merged.push_back(std::move(c));
    }
    components = std::move(merged);
  }
};

struct MultiplicityTable {
  std::map<ThetaSubset, Int> entries;
};

// The A-umbrella: subsets that are zero sets of supporting functionals of
// the column cone, decided by exact rational feasibility. Canonical
// (cardinality, lex) order.
inline std::vector<ThetaSubset> umbrella(const IntMatrix& a) {
  auto nc = is_non_confluent(a);
  if (!nc.value)
    throw PreconditionError("umbrella needs a non-confluent matrix");
  const IntMatrix std_a = *nc.witness * a;
  const int n = static_cast<int>(std_a.cols());
  const std::size_t d1 = std_a.rows();
  std::vector<ThetaSubset> out;
  for (const auto& theta : all_subsets(n, true)) {
    std::vector<LinConstraint> sys;
    for (int j = 1; j <= n; ++j) {
      std::vector<Int> col(d1);
      for (std::size_t i = 0; i < d1; ++i)
        col[i] = std_a(i, static_cast<std::size_t>(j - 1));
      sys.push_back({std::move(col), theta.contains(j) ? Rel::Eq : Rel::Gt});
    }
    if (feasible(std::move(sys), d1)) out.push_back(theta);
  }
  return out;
}

// Pure relabeling of the generic-fiber cycle to the special fiber.
inline Cycle specialize(const Cycle& c) {
  Cycle out = c;
  for (auto& comp : out.components) {
    if (comp.field != FieldTag::Char0)
      throw PreconditionError("specialize needs a char-0 cycle");
    comp.field = FieldTag::CharP;
  }
  return out;
}

struct CcReport {
  NondegeneracyReport initial_audit;
  std::optional<ReductionTranscript> square_reduction;
  std::vector<std::size_t> divided_rows;  // 1-based rows divided by p
  IntMatrix final_b;                      // unhatted matrix actually assembled
  std::optional<CharacterVector> final_chi;
  std::vector<ThetaSubset> umbrella_set;
  std::vector<std::pair<ThetaSubset, Int>> dim_audit;  // char-p dim per stratum
  bool dim_audit_ok = true;
  std::string notes;
};

struct CcResult {
  Cycle cycle;
  CcReport report;
};

namespace detail {

inline NondegeneracyFailure make_failure(const IntMatrix& b, const Int& p,
                                         const NondegeneracyReport& audit) {
  const IntMatrix a = hat(b);
  std::vector<std::pair<ThetaSubset, Int>> excess;
  for (const auto& theta : audit.failing) {
    auto rep = dim_report(a, theta, 0, p);
    excess.push_back({theta, *rep.dim_exact});
  }
  return NondegeneracyFailure(audit.failing, std::move(excess),
                              static_cast<Int>(b.cols()));
}

}  // namespace detail

// Characteristic cycle of the GKZ hypergeometric sheaf for hat(B):
// umbrella strata with multiplicities from the table (symbolic otherwise),
// assembled in char 0 and specialized by relabeling. Degenerate inputs are
// reduced first: square matrices via square_reduce with the character
// transformed along the unimodular steps, non-square ones via a single
// p-divisible row scan.
inline CcResult cc_gkz(const IntMatrix& b, const Int& p, const CharacterVector& chi,
                       const std::optional<MultiplicityTable>& mult = std::nullopt) {
  require_prime(p);
  if (!is_sub_non_confluent(b))
    throw PreconditionError("matrix is not sub-non-confluent");
  if (chi.exponents.size() != b.rows() + 1)
    throw PreconditionError("character length must be d+1");
  if (!chi.nontrivial0()) throw TrivialCharacterError();

  CcReport report;
  report.final_b = b;
  IntMatrix cur_b = b;
  CharacterVector cur_chi = chi;
  report.initial_audit = is_p_nondegenerate(hat(b), p);

  if (!report.initial_audit.value) {
    if (b.cols() == b.rows() + 1) {
      auto [reduced, transcript] = square_reduce(hat(b), p);
      for (const auto& step : transcript.steps)
        cur_chi = character_transform(cur_chi, step.p);
      report.square_reduction = transcript;
      auto nc = is_non_confluent(reduced);
      if (!nc.value)
        throw std::logic_error("square reduction lost non-confluence");
      cur_chi = character_transform(cur_chi, *nc.witness);
      cur_b = unhat(*nc.witness * reduced);
      auto audit = is_p_nondegenerate(hat(cur_b), p);
      if (!audit.value)
        throw std::logic_error("square reduction left a degenerate matrix");
    } else {
      bool divided = false;
      for (std::size_t i = 0; i < cur_b.rows(); ++i) {
        bool divisible = true;
        for (std::size_t j = 0; j < cur_b.cols(); ++j)
          if (cur_b(i, j) % p != 0) { divisible = false; break; }
        if (divisible) {
          cur_b = p_divide_row(cur_b, i, p);
          report.divided_rows.push_back(i + 1);
          divided = true;
        }
      }
      auto audit = divided ? is_p_nondegenerate(hat(cur_b), p) : report.initial_audit;
      if (!audit.value) throw detail::make_failure(cur_b, p, audit);
    }
  }

  report.final_b = cur_b;
  report.final_chi = cur_chi;
  const IntMatrix a = hat(cur_b);
  report.umbrella_set = umbrella(a);
  for (const auto& theta : report.umbrella_set) {
    if (theta.empty()) continue;
    auto rep = dim_report(a, theta, 0, p);
    report.dim_audit.push_back({theta, *rep.dim_exact});
    if (*rep.dim_exact != static_cast<Int>(cur_b.cols()))
      report.dim_audit_ok = false;
  }
  if (!report.dim_audit_ok)
    report.notes +=
        "dimension audit failed for a stratum; result downgraded to a diagnostic. ";
  report.notes += "twist G(chi0,psi) and shift [d+n] omitted: invisible to CC; ";
  report.notes += "z_i = iota chi_i(zeta_{q-1}) enters only the multiplicity symbols.";

  if (mult)
    for (const auto& [theta, m] : mult->entries) {
      if (m < 0) throw PreconditionError("multiplicities must be nonnegative");
      if (std::find(report.umbrella_set.begin(), report.umbrella_set.end(), theta) ==
          report.umbrella_set.end())
        throw PreconditionError("multiplicity key " + theta.str() +
                                " is not an umbrella member");
    }

  Cycle cycle;
  cycle.sign_exponent = static_cast<Int>(cur_b.rows() + cur_b.cols());
  for (const auto& theta : report.umbrella_set) {
    CycleComponent comp;
    comp.kind = theta.empty() ? CycleKind::ZeroSection : CycleKind::UmbrellaStratum;
    if (!theta.empty()) comp.theta = theta;
    comp.field = FieldTag::Char0;
    if (mult) {
      auto it = mult->entries.find(theta);
      if (it != mult->entries.end()) comp.multiplicity = it->second;
    }
    cycle.components.push_back(std::move(comp));
  }
  cycle.canonicalize();
  return {specialize(cycle), std::move(report)};
}

struct ResolutionCycleResult {
  Cycle cycle;  // support-level, multiplicities symbolic
  ResolutionResult resolution;
  std::vector<SupportLabel> labels;
};

// Support-level cycle through the resolution route: resolve the fan, then
// emit the direct-image support decomposition with the global sign.
inline ResolutionCycleResult cc_via_resolution(
    const IntMatrix& b, const std::optional<GenerableSet>& sigma0 = std::nullopt) {
  if (!is_sub_non_confluent(b))
    throw PreconditionError("matrix is not sub-non-confluent");
  GenerableSet start = sigma0 ? *sigma0 : default_complete_fan(b.rows());
  ResolutionCycleResult out{Cycle{}, resolve(b, start), {}};
  out.labels = direct_image_support(b, out.resolution.fan);
  out.cycle.sign_exponent = static_cast<Int>(b.rows() + b.cols());
  for (const auto& label : out.labels) {
    CycleComponent comp;
    switch (label.kind) {
      case SupportKind::ZeroSection: comp.kind = CycleKind::ZeroSection; break;
      case SupportKind::InfinityConormal:
        comp.kind = CycleKind::InfinityConormal;
        break;
      case SupportKind::ResolvedSupport:
        comp.kind = CycleKind::ResolvedSupport;
        break;
      case SupportKind::ResolvedSupportInfinity:
        comp.kind = CycleKind::ResolvedSupportInfinity;
        break;
    }
    comp.theta = label.theta;
    comp.field = FieldTag::Char0;
    out.cycle.components.push_back(std::move(comp));
  }
  out.cycle.canonicalize();
  return out;
}

}  // namespace gkzcc
