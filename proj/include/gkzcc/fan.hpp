#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gkzcc/int_matrix.hpp"
#include "gkzcc/qlp.hpp"

namespace gkzcc {

// Primitive integer vector generating a ray.
struct Edge {
  std::vector<Int> v;

  Edge() = default;
  explicit Edge(std::vector<Int> vec) : v(std::move(vec)) {
    if (v.empty()) throw PreconditionError("edge vector must be nonempty");
    if (gcd_all(v) != 1) throw PreconditionError("edge vector must be primitive");
  }
  static Edge primitive(std::vector<Int> vec) {
    Int g = gcd_all(vec);
    if (g == 0) throw PreconditionError("zero vector has no primitive generator");
    if (g > 1)
      for (auto& x : vec) x /= g;
    return Edge(std::move(vec));
  }
  std::size_t dim() const { return v.size(); }
  bool operator==(const Edge& o) const { return v == o.v; }
  bool operator!=(const Edge& o) const { return v != o.v; }
  bool operator<(const Edge& o) const { return v < o.v; }
  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += v[i].str();
    }
    return s + ")";
  }
};

// d-dimensional nonsingular cone, stored with edges sorted lexicographically.
class Cone {
 public:
  explicit Cone(std::vector<Edge> edges) : edges_(std::move(edges)) {
    if (edges_.empty()) throw PreconditionError("cone needs edges");
    const std::size_t d = edges_.front().dim();
    for (const auto& e : edges_)
      if (e.dim() != d) throw PreconditionError("mixed edge dimensions");
    if (edges_.size() != d)
      throw PreconditionError("cone must have d edges in dimension d");
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t i = 1; i < edges_.size(); ++i)
      if (edges_[i] == edges_[i - 1])
        throw PreconditionError("cone edges must be distinct");
    IntMatrix vm = edge_matrix();
    const Int det = determinant(vm);
    if (det != 1 && det != -1)
      throw PreconditionError("cone is singular: |det V| = " + iabs(det).str());
  }

  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t dim() const { return edges_.size(); }

  bool has_edge(const Edge& e) const {
    return std::binary_search(edges_.begin(), edges_.end(), e);
  }

  // V_sigma: rows are the edge vectors in the cone's canonical order.
  IntMatrix edge_matrix() const {
    const std::size_t d = dim();
    IntMatrix vm(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) vm(i, j) = edges_[i].v[j];
    return vm;
  }

  // Rows of (V^{-1})^T, aligned with edges(); integral since |det V| = 1.
  std::vector<std::vector<Int>> dual_basis() const {
    const std::size_t d = dim();
    IntMatrix vm = edge_matrix();
    if (d == 1) return {{vm(0, 0)}};  // v in {1, -1} is its own dual
    const Int det = determinant(vm);
    std::vector<std::vector<Int>> dual(d, std::vector<Int>(d));
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        IntMatrix minor(d - 1, d - 1);
        std::size_t mi = 0;
        for (std::size_t r = 0; r < d; ++r) {
          if (r == i) continue;
          std::size_t mj = 0;
          for (std::size_t c = 0; c < d; ++c) {
            if (c == j) continue;
            minor(mi, mj) = vm(r, c);
            ++mj;
          }
          ++mi;
        }
        Int cof = determinant(minor);
        if ((i + j) % 2 == 1) cof = -cof;
        dual[i][j] = cof / det;
      }
    return dual;
  }

  bool contains(const std::vector<Int>& x) const {
    for (const auto& u : dual_basis()) {
      Int s = 0;
      for (std::size_t j = 0; j < u.size(); ++j) s += u[j] * x[j];
      if (s < 0) return false;
    }
    return true;
  }

  bool operator==(const Cone& o) const { return edges_ == o.edges_; }
  bool operator!=(const Cone& o) const { return edges_ != o.edges_; }
  bool operator<(const Cone& o) const { return edges_ < o.edges_; }

 private:
  std::vector<Edge> edges_;
};

// Checks that the intersection of two nonsingular cones is a common face.
inline bool pair_forms_common_face(const Cone& a, const Cone& b) {
  if (a == b) return true;
  const std::size_t d = a.dim();
  auto duals_a = a.dual_basis();
  auto duals_b = b.dual_basis();
  auto inside = [&](const std::vector<std::vector<Int>>& duals,
                    const std::vector<Int>& x) {
    for (const auto& u : duals) {
      Int s = 0;
      for (std::size_t j = 0; j < d; ++j) s += u[j] * x[j];
      if (s < 0) return false;
    }
    return true;
  };
  std::vector<Edge> ta, tb;
  for (const auto& e : a.edges())
    if (inside(duals_b, e.v)) ta.push_back(e);
  for (const auto& e : b.edges())
    if (inside(duals_a, e.v)) tb.push_back(e);
  if (ta != tb) return false;
  // Fast certificate: w = sum of this cone's dual vectors off the shared
  // face is >= 0 on it and vanishes exactly on the face; if w <= 0 on every
  // edge of the other cone, the intersection is pinched into the face.
  auto certify = [&](const Cone& mine, const std::vector<std::vector<Int>>& duals,
                     const Cone& other) {
    std::vector<Int> w(d, Int(0));
    for (std::size_t i = 0; i < mine.edges().size(); ++i) {
      if (std::binary_search(ta.begin(), ta.end(), mine.edges()[i])) continue;
      for (std::size_t j = 0; j < d; ++j) w[j] += duals[i][j];
    }
    for (const auto& e : other.edges()) {
      Int s = 0;
      for (std::size_t j = 0; j < d; ++j) s += w[j] * e.v[j];
      if (s > 0) return false;
    }
    return true;
  };
  if (certify(a, duals_a, b) || certify(b, duals_b, a)) return true;
  std::vector<LinConstraint> base;
  for (const auto& u : duals_a) base.push_back({u, Rel::Ge});
  for (const auto& u : duals_b) base.push_back({u, Rel::Ge});
  auto check = [&](const Cone& c, const std::vector<std::vector<Int>>& duals) {
    for (std::size_t i = 0; i < c.edges().size(); ++i) {
      if (std::binary_search(ta.begin(), ta.end(), c.edges()[i])) continue;
      std::vector<LinConstraint> sys = base;
      sys.push_back({duals[i], Rel::Gt});
      if (feasible(std::move(sys), d)) return false;  // intersection leaves the face
    }
    return true;
  };
  return check(a, duals_a) && check(b, duals_b);
}

inline bool is_generable(const std::vector<Cone>& cones) {
  for (std::size_t i = 0; i < cones.size(); ++i)
    for (std::size_t j = i + 1; j < cones.size(); ++j)
      if (!pair_forms_common_face(cones[i], cones[j])) return false;
  return true;
}

// Finite set of d-dimensional nonsingular cones whose faces form a fan.
class GenerableSet {
 public:
  static GenerableSet checked(std::vector<Cone> cones) {
    GenerableSet s = unchecked(std::move(cones));
    if (!is_generable(s.cones_))
      throw PreconditionError("cone set is not generable");
    return s;
  }
  // For fan transformations whose output is generable by construction.
  static GenerableSet unchecked(std::vector<Cone> cones) {
    if (cones.empty()) throw PreconditionError("empty cone set");
    GenerableSet s;
    s.cones_ = std::move(cones);
    std::sort(s.cones_.begin(), s.cones_.end());
    s.cones_.erase(std::unique(s.cones_.begin(), s.cones_.end()), s.cones_.end());
    const std::size_t d = s.cones_.front().dim();
    for (const auto& c : s.cones_)
      if (c.dim() != d) throw PreconditionError("mixed cone dimensions");
    return s;
  }

  const std::vector<Cone>& cones() const { return cones_; }
  std::size_t dim() const { return cones_.front().dim(); }

  std::vector<Edge> edges() const {
    std::set<Edge> es;
    for (const auto& c : cones_) es.insert(c.edges().begin(), c.edges().end());
    return {es.begin(), es.end()};
  }

  // Sigma(eps): the cones having eps as an edge.
  std::vector<Cone> star(const Edge& e) const {
    std::vector<Cone> out;
    for (const auto& c : cones_)
      if (c.has_edge(e)) out.push_back(c);
    return out;
  }

  bool operator==(const GenerableSet& o) const { return cones_ == o.cones_; }

 private:
  GenerableSet() = default;
  std::vector<Cone> cones_;
};

// Every (d-1)-face shared by exactly two cones: the completeness criterion
// for a pure simplicial fan.
inline bool is_complete(const GenerableSet& sigma) {
  std::map<std::vector<Edge>, int> facet_count;
  for (const auto& c : sigma.cones())
    for (std::size_t drop = 0; drop < c.edges().size(); ++drop) {
      std::vector<Edge> facet;
      for (std::size_t i = 0; i < c.edges().size(); ++i)
        if (i != drop) facet.push_back(c.edges()[i]);
      ++facet_count[facet];
    }
  for (const auto& [facet, count] : facet_count)
    if (count != 2) return false;
  return true;
}

// The 2^d orthant fan.
inline GenerableSet default_complete_fan(std::size_t d) {
  if (d < 1 || d > 16) throw PreconditionError("orthant fan dimension out of range");
  std::vector<Cone> cones;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<Int> v(d, Int(0));
      v[i] = (mask >> i) & 1 ? Int(-1) : Int(1);
      edges.emplace_back(std::move(v));
    }
    cones.emplace_back(std::move(edges));
  }
  return GenerableSet::unchecked(std::move(cones));
}

// b_{eps i} = <v_eps, column i of B>, for i = 1..n.
inline std::vector<Int> edge_pairing(const IntMatrix& b, const Edge& e) {
  if (e.dim() != b.rows()) throw PreconditionError("edge/matrix dimension mismatch");
  std::vector<Int> out(b.cols(), Int(0));
  for (std::size_t i = 0; i < b.cols(); ++i)
    for (std::size_t j = 0; j < b.rows(); ++j) out[i] += e.v[j] * b(j, i);
  return out;
}

// Witness permutation (1-based column order) when the columns of B are
// totally preordered by the pairing on every edge of sigma.
inline std::optional<std::vector<int>> is_sigma_good(const IntMatrix& b,
                                                     const Cone& sigma) {
  const std::size_t n = b.cols();
  std::vector<std::vector<Int>> pv(n);
  for (std::size_t i = 0; i < n; ++i) pv[i].reserve(sigma.edges().size());
  for (const auto& e : sigma.edges()) {
    auto pairing = edge_pairing(b, e);
    for (std::size_t i = 0; i < n; ++i) pv[i].push_back(pairing[i]);
  }
  std::vector<int> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i) + 1;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    const auto& a = pv[static_cast<std::size_t>(x - 1)];
    const auto& c = pv[static_cast<std::size_t>(y - 1)];
    if (a != c) return a < c;
    return x < y;
  });
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const auto& a = pv[static_cast<std::size_t>(order[k] - 1)];
    const auto& c = pv[static_cast<std::size_t>(order[k + 1] - 1)];
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a[j] > c[j]) return std::nullopt;
  }
  return order;
}

inline bool is_sigma_good_bool(const IntMatrix& b, const Cone& sigma) {
  return is_sigma_good(b, sigma).has_value();
}

inline bool is_Sigma_good(const IntMatrix& b, const GenerableSet& sigma) {
  for (const auto& c : sigma.cones())
    if (!is_sigma_good_bool(b, c)) return false;
  return true;
}

inline std::vector<Cone> sigma_bad(const IntMatrix& b, const GenerableSet& sigma) {
  std::vector<Cone> out;
  for (const auto& c : sigma.cones())
    if (!is_sigma_good_bool(b, c)) out.push_back(c);
  return out;
}

struct BlowupRecord {
  Edge eps1, eps2, eps_ex;
  std::vector<Cone> replaced;
  std::vector<Cone> created;
};

// Star subdivision at v_{eps1} + v_{eps2}: every cone containing both edges
// is replaced by sigma(eps1) and sigma(eps2); all other cones are retained.
inline std::pair<GenerableSet, BlowupRecord> standard_blowup(
    const GenerableSet& sigma, const Edge& eps1, const Edge& eps2) {
  if (eps1 == eps2) throw PreconditionError("blow-up needs two distinct edges");
  std::vector<Int> sum(eps1.dim());
  for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = eps1.v[i] + eps2.v[i];
  if (gcd_all(sum) != 1)
    throw PreconditionError("exceptional edge is not primitive: edges not adjacent in a nonsingular cone");
  Edge eps_ex{sum};
  BlowupRecord rec{eps1, eps2, eps_ex, {}, {}};
  std::vector<Cone> next;
  for (const auto& c : sigma.cones()) {
    if (!(c.has_edge(eps1) && c.has_edge(eps2))) {
      next.push_back(c);
      continue;
    }
    rec.replaced.push_back(c);
    for (const Edge& drop : {eps2, eps1}) {
      std::vector<Edge> edges;
      for (const auto& e : c.edges())
        if (e != drop) edges.push_back(e);
      edges.push_back(eps_ex);
      Cone created{std::move(edges)};
      rec.created.push_back(created);
      next.push_back(std::move(created));
    }
  }
  if (rec.replaced.empty())
    throw PreconditionError("edges have no common cone: empty star intersection");
  std::sort(rec.created.begin(), rec.created.end());
  rec.created.erase(std::unique(rec.created.begin(), rec.created.end()),
                    rec.created.end());
  return {GenerableSet::unchecked(std::move(next)), std::move(rec)};
}

// Singularity measures for a two-column matrix.
struct MuNu {
  Int mu = 0;
  Int nu = 0;
  std::vector<Edge> max_edges;                 // E_B(Sigma)
  std::map<Edge, std::vector<Edge>> opposite;  // E_B(Sigma, eps) per max edge
};

inline MuNu mu_nu(const IntMatrix& b, const GenerableSet& sigma) {
  if (b.cols() != 2) throw PreconditionError("mu/nu are defined for two columns");
  MuNu out;
  std::vector<Cone> bad = sigma_bad(b, sigma);
  if (bad.empty()) return out;
  std::set<Edge> bad_edges;
  for (const auto& c : bad) bad_edges.insert(c.edges().begin(), c.edges().end());
  auto gap = [&](const Edge& e) -> Int {
    auto pairing = edge_pairing(b, e);
    return pairing[0] - pairing[1];
  };
  for (const auto& e : bad_edges) out.mu = std::max(out.mu, iabs(gap(e)));
  for (const auto& e : bad_edges)
    if (iabs(gap(e)) == out.mu) out.max_edges.push_back(e);
  for (const auto& e : out.max_edges) {
    std::set<Edge> star_edges;
    for (const auto& c : sigma.star(e))
      star_edges.insert(c.edges().begin(), c.edges().end());
    std::vector<Edge> opp;
    const Int ge = gap(e);
    for (const auto& e2 : star_edges)
      if (bad_edges.count(e2) && ge * gap(e2) < 0) opp.push_back(e2);
    out.nu += static_cast<Int>(opp.size());
    out.opposite[e] = std::move(opp);
  }
  return out;
}

// One B-good blow-up: eps1 in E_B(Sigma), eps2 in E_B(Sigma, eps1) with
// maximal gap; ties broken lexicographically (eps1 first, then eps2).
inline std::pair<GenerableSet, BlowupRecord> b_good_blowup_step(
    const IntMatrix& b, const GenerableSet& sigma) {
  MuNu m = mu_nu(b, sigma);
  if (m.max_edges.empty())
    throw PreconditionError("matrix is already good on this fan");
  auto gap_abs = [&](const Edge& e) -> Int {
    auto pairing = edge_pairing(b, e);
    return iabs(pairing[0] - pairing[1]);
  };
  const Edge& eps1 = *std::min_element(m.max_edges.begin(), m.max_edges.end());
  const auto& candidates = m.opposite.at(eps1);
  if (candidates.empty())
    throw std::logic_error("bad edge with no opposite-sign neighbor");
  Int best = -1;
  for (const auto& e : candidates) best = std::max(best, gap_abs(e));
  Edge eps2;
  bool found = false;
  for (const auto& e : candidates)
    if (gap_abs(e) == best && (!found || e < eps2)) {
      eps2 = e;
      found = true;
    }
  return standard_blowup(sigma, eps1, eps2);
}

struct ResolveStepLog {
  int col_i = 0, col_j = 0;  // 1-based column pair being resolved
  Edge eps1, eps2;
  Int mu_before, nu_before, mu_after, nu_after;
};

struct ResolutionResult {
  GenerableSet fan;
  std::vector<BlowupRecord> records;
  std::vector<ResolveStepLog> log;
};

namespace detail {

// Incremental fan state for one resolution run. Edges are interned to
// small ids so the hot loops work on flat integer arrays; cones live in an
// arena with a per-edge star index.
struct FanArena {
  std::vector<Cone> cones;
  std::vector<std::vector<int>> cone_edge_ids;  // aligned with cones
  std::vector<char> alive;
  std::map<Edge, int> edge_id;
  std::vector<Edge> edges_by_id;
  std::vector<std::vector<std::size_t>> star_by_id;

  explicit FanArena(const GenerableSet& sigma) {
    for (const auto& c : sigma.cones()) add(c);
  }
  int intern(const Edge& e) {
    auto [it, fresh] = edge_id.emplace(e, static_cast<int>(edges_by_id.size()));
    if (fresh) {
      edges_by_id.push_back(e);
      star_by_id.emplace_back();
    }
    return it->second;
  }
  std::size_t add(Cone c) {
    const std::size_t idx = cones.size();
    std::vector<int> ids;
    ids.reserve(c.edges().size());
    for (const auto& e : c.edges()) {
      const int id = intern(e);
      ids.push_back(id);
      star_by_id[static_cast<std::size_t>(id)].push_back(idx);
    }
    cones.push_back(std::move(c));
    cone_edge_ids.push_back(std::move(ids));
    alive.push_back(1);
    return idx;
  }
  const std::vector<std::size_t>& live_star(int id) {
    auto& list = star_by_id[static_cast<std::size_t>(id)];
    std::size_t live = 0;
    for (std::size_t i : list)
      if (alive[i]) ++live;
    if (live < list.size()) {
      std::vector<std::size_t> keep;
      keep.reserve(live);
      for (std::size_t i : list)
        if (alive[i]) keep.push_back(i);
      list = std::move(keep);
    }
    return list;
  }
  std::vector<Cone> live_cones() const {
    std::vector<Cone> out;
    for (std::size_t i = 0; i < cones.size(); ++i)
      if (alive[i]) out.push_back(cones[i]);
    return out;
  }
};

// Two-column subproblem with cached per-edge gaps b_{e1} - b_{e2}. For
// n = 2, a cone is good exactly when its edge gaps carry no mixed signs,
// and the exceptional edge's gap is the sum of its parents' (linearity).
// Bad-cone edges are kept ranked by (|gap| descending, edge ascending), so
// the selection rule reads off the front of the index.
struct PairState {
  FanArena& arena;
  IntMatrix sub;  // d x 2
  std::vector<Int> gap;        // by edge id
  std::vector<int> gap_sign;   // -1, 0, 1
  std::vector<int> bad_use;    // bad-cone usage count per edge id
  std::set<std::size_t> bad;
  std::vector<int> seen_stamp;
  int epoch = 0;

  struct RankCmp {
    const FanArena* arena;
    bool operator()(const std::pair<Int, int>& a,
                    const std::pair<Int, int>& b) const {
      if (a.first != b.first) return a.first > b.first;
      return arena->edges_by_id[static_cast<std::size_t>(a.second)] <
             arena->edges_by_id[static_cast<std::size_t>(b.second)];
    }
  };
  std::set<std::pair<Int, int>, RankCmp> rank;

  PairState(FanArena& a, IntMatrix s)
      : arena(a), sub(std::move(s)), rank(RankCmp{&a}) {
    for (const auto& e : arena.edges_by_id) register_edge(e);
    for (std::size_t i = 0; i < arena.cones.size(); ++i)
      if (arena.alive[i] && is_bad(arena.cone_edge_ids[i])) mark_bad(i);
  }
  void register_edge(const Edge& e) {
    auto pairing = edge_pairing(sub, e);
    Int g = pairing[0] - pairing[1];
    gap_sign.push_back(g > 0 ? 1 : (g < 0 ? -1 : 0));
    gap.push_back(std::move(g));
    bad_use.push_back(0);
    seen_stamp.push_back(0);
  }
  bool is_bad(const std::vector<int>& edge_ids) const {
    bool pos = false, neg = false;
    for (int id : edge_ids) {
      const int s = gap_sign[static_cast<std::size_t>(id)];
      if (s > 0) pos = true;
      else if (s < 0) neg = true;
    }
    return pos && neg;
  }
  void mark_bad(std::size_t idx) {
    bad.insert(idx);
    for (int id : arena.cone_edge_ids[idx])
      if (++bad_use[static_cast<std::size_t>(id)] == 1)
        rank.insert({iabs(gap[static_cast<std::size_t>(id)]), id});
  }
  void unmark_bad(std::size_t idx) {
    if (bad.erase(idx) == 0) return;
    for (int id : arena.cone_edge_ids[idx])
      if (--bad_use[static_cast<std::size_t>(id)] == 0)
        rank.erase({iabs(gap[static_cast<std::size_t>(id)]), id});
  }
};

struct PairMeasures {
  Int mu = 0;
  Int nu = 0;
  std::vector<int> max_edge_ids;  // rank order: lex-least first
};

inline std::vector<int> opposite_edge_ids(PairState& st, int e1) {
  std::vector<int> out;
  const int s1 = st.gap_sign[static_cast<std::size_t>(e1)];
  ++st.epoch;
  for (std::size_t idx : st.arena.live_star(e1))
    for (int id : st.arena.cone_edge_ids[idx]) {
      const auto uid = static_cast<std::size_t>(id);
      if (st.bad_use[uid] > 0 && s1 * st.gap_sign[uid] < 0 &&
          st.seen_stamp[uid] != st.epoch) {
        st.seen_stamp[uid] = st.epoch;
        out.push_back(id);
      }
    }
  return out;
}

inline PairMeasures pair_measures(PairState& st) {
  PairMeasures m;
  if (st.bad.empty()) return m;
  m.mu = st.rank.begin()->first;
  for (auto it = st.rank.begin(); it != st.rank.end() && it->first == m.mu; ++it)
    m.max_edge_ids.push_back(it->second);
  for (int id : m.max_edge_ids)
    m.nu += static_cast<Int>(opposite_edge_ids(st, id).size());
  return m;
}

}  // namespace detail

// Resolution scheduler: iterate over bad column pairs in lexicographic
// order, applying B-good blow-up steps to each two-column subproblem until
// it is good, then rescan. Terminates by the (mu, nu) descent. The observer
// sees every blow-up record in order.
template <typename StepObserver>
ResolutionResult resolve(const IntMatrix& b, const GenerableSet& sigma0,
                         StepObserver&& observe) {
  if (!is_complete(sigma0))
    throw PreconditionError("resolution requires a complete starting fan");
  if (!is_generable(sigma0.cones()))
    throw PreconditionError("resolution requires a generable starting fan");
  const int n = static_cast<int>(b.cols());
  auto pair_matrix = [&](int i, int j) {
    IntMatrix sub(b.rows(), 2);
    for (std::size_t r = 0; r < b.rows(); ++r) {
      sub(r, 0) = b(r, static_cast<std::size_t>(i - 1));
      sub(r, 1) = b(r, static_cast<std::size_t>(j - 1));
    }
    return sub;
  };
  Int mu_sum = 0;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) mu_sum += mu_nu(pair_matrix(i, j), sigma0).mu;
  const Int edge_count = static_cast<Int>(sigma0.edges().size());
  // Termination rests on the per-step lexicographic (mu, nu) descent, which
  // is asserted below; the cap only turns a descent bug into a diagnostic.
  const Int cap = 1000 * (mu_sum + 1) * edge_count * edge_count;
  Int steps = 0;

  detail::FanArena arena(sigma0);
  ResolutionResult res{sigma0, {}, {}};
  while (true) {
    std::optional<detail::PairState> state;
    int pi = 0, pj = 0;
    for (int i = 1; i <= n && !state; ++i)
      for (int j = i + 1; j <= n && !state; ++j) {
        detail::PairState cand(arena, pair_matrix(i, j));
        if (!cand.bad.empty()) {
          state.emplace(std::move(cand));
          pi = i;
          pj = j;
        }
      }
    if (!state) break;
    detail::PairMeasures before = detail::pair_measures(*state);
    while (!state->bad.empty()) {
      if (++steps > cap)
        throw std::logic_error(
            "resolution exceeded its step cap; descent violated (bug)");
      // selection rule: lex-least maximal-gap edge, then the opposite-sign
      // neighbor with the largest gap (lex tie-break)
      const int eps1_id = before.max_edge_ids.front();
      const Edge eps1 = arena.edges_by_id[static_cast<std::size_t>(eps1_id)];
      auto candidates = detail::opposite_edge_ids(*state, eps1_id);
      if (candidates.empty())
        throw std::logic_error("bad edge with no opposite-sign neighbor");
      Int best_gap = -1;
      for (int id : candidates)
        best_gap = std::max(best_gap, iabs(state->gap[static_cast<std::size_t>(id)]));
      int eps2_id = -1;
      for (int id : candidates)
        if (iabs(state->gap[static_cast<std::size_t>(id)]) == best_gap &&
            (eps2_id < 0 ||
             arena.edges_by_id[static_cast<std::size_t>(id)] <
                 arena.edges_by_id[static_cast<std::size_t>(eps2_id)]))
          eps2_id = id;
      const Edge eps2 = arena.edges_by_id[static_cast<std::size_t>(eps2_id)];
      // star subdivision at eps1 + eps2
      std::vector<Int> sum(eps1.dim());
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = eps1.v[i] + eps2.v[i];
      Edge eps_ex{sum};
      BlowupRecord rec{eps1, eps2, eps_ex, {}, {}};
      const std::vector<std::size_t> star1 = arena.live_star(eps1_id);
      for (std::size_t idx : star1) {
        bool has2 = false;
        for (int id : arena.cone_edge_ids[idx])
          if (id == eps2_id) has2 = true;
        if (!has2) continue;
        rec.replaced.push_back(arena.cones[idx]);
        state->unmark_bad(idx);
        arena.alive[idx] = 0;
        for (const Edge& drop : {eps2, eps1}) {
          std::vector<Edge> edges;
          for (const auto& e : arena.cones[idx].edges())
            if (e != drop) edges.push_back(e);
          edges.push_back(eps_ex);
          rec.created.emplace_back(std::move(edges));
        }
      }
      if (rec.replaced.empty())
        throw std::logic_error("selected edges share no cone");
      std::sort(rec.created.begin(), rec.created.end());
      rec.created.erase(std::unique(rec.created.begin(), rec.created.end()),
                        rec.created.end());
      for (const auto& c : rec.created) {
        const std::size_t idx = arena.add(c);
        while (state->gap.size() < arena.edges_by_id.size())
          state->register_edge(arena.edges_by_id[state->gap.size()]);
        if (state->is_bad(arena.cone_edge_ids[idx])) state->mark_bad(idx);
      }
      detail::PairMeasures after = detail::pair_measures(*state);
      if (!(after.mu < before.mu ||
            (after.mu == before.mu && after.nu < before.nu)) &&
          !state->bad.empty())
        throw std::logic_error("(mu,nu) descent violated at a blow-up step");
      res.log.push_back({pi, pj, rec.eps1, rec.eps2, before.mu, before.nu,
                         after.mu, after.nu});
      observe(rec);
      res.records.push_back(std::move(rec));
      before = std::move(after);
    }
  }
  res.fan = GenerableSet::unchecked(arena.live_cones());
  return res;
}

inline ResolutionResult resolve(const IntMatrix& b, const GenerableSet& sigma0) {
  return resolve(b, sigma0, [](const BlowupRecord&) {});
}

}  // namespace gkzcc
