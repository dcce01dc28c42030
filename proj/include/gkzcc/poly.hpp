#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gkzcc/numeric.hpp"

namespace gkzcc {

// Sparse multivariate polynomial with exact integer coefficients.
// Variables are small integer ids; callers supply names for rendering.
class Poly {
 public:
  using Monomial = std::map<int, int>;  // var id -> exponent (> 0)

  Poly() = default;
  static Poly constant(Int c) {
    Poly p;
    if (c != 0) p.terms_[{}] = std::move(c);
    return p;
  }
  static Poly variable(int id, int exp = 1) {
    Poly p;
    if (exp < 0) throw PreconditionError("negative exponent");
    if (exp == 0) return constant(1);
    p.terms_[{{id, exp}}] = 1;
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Int>& terms() const { return terms_; }

  Poly& operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(const Poly& a) {
    Poly r;
    for (const auto& [m, c] : a.terms_) r.terms_[m] = -c;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    Poly r;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        for (const auto& [v, e] : mb) m[v] += e;
        r.add_term(m, ca * cb);
      }
    return r;
  }
  friend Poly operator*(const Int& c, const Poly& a) {
    Poly r;
    if (c == 0) return r;
    for (const auto& [m, co] : a.terms_) r.terms_[m] = c * co;
    return r;
  }
  Poly pow(int e) const {
    if (e < 0) throw PreconditionError("negative exponent");
    Poly r = constant(1);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
  }

  bool operator==(const Poly& o) const { return terms_ == o.terms_; }
  bool operator!=(const Poly& o) const { return terms_ != o.terms_; }

  Rat eval(const std::function<Rat(int)>& value_of) const {
    Rat sum = 0;
    for (const auto& [m, c] : terms_) {
      Rat t(c);
      for (const auto& [v, e] : m) {
        const Rat val = value_of(v);
        for (int i = 0; i < e; ++i) t *= val;
      }
      sum += t;
    }
    return sum;
  }

  // Substitute polynomials for variables (missing ids stay themselves).
  Poly substitute(const std::map<int, Poly>& subs) const {
    Poly out;
    for (const auto& [m, c] : terms_) {
      Poly term = constant(c);
      for (const auto& [v, e] : m) {
        auto it = subs.find(v);
        Poly base = it == subs.end() ? variable(v) : it->second;
        term = term * base.pow(e);
      }
      out += term;
    }
    return out;
  }

  // Canonical text: terms ordered by ascending total degree, ties broken by
  // descending lexicographic exponent vector over ascending variable ids.
  std::string render(const std::function<std::string(int)>& name_of) const {
    if (terms_.empty()) return "0";
    std::vector<const std::pair<const Monomial, Int>*> ts;
    for (const auto& t : terms_) ts.push_back(&t);
    auto deg = [](const Monomial& m) {
      int d = 0;
      for (const auto& [v, e] : m) d += e;
      return d;
    };
    std::sort(ts.begin(), ts.end(), [&](const auto* a, const auto* b) {
      const int da = deg(a->first), db = deg(b->first);
      if (da != db) return da < db;
      // descending lex: larger exponent on the smallest differing id first
      auto ia = a->first.begin(), ib = b->first.begin();
      while (ia != a->first.end() && ib != b->first.end()) {
        if (ia->first != ib->first) return ia->first < ib->first;
        if (ia->second != ib->second) return ia->second > ib->second;
        ++ia, ++ib;
      }
      return ia != a->first.end();
    });
    std::string out;
    bool first = true;
    for (const auto* t : ts) {
      const Int& c = t->second;
      const bool neg = c < 0;
      const Int mag = neg ? Int(-c) : c;
      if (first) {
        if (neg) out += "-";
        first = false;
      } else {
        out += neg ? " - " : " + ";
      }
      std::string body;
      if (mag != 1 || t->first.empty()) body = mag.str();
      for (const auto& [v, e] : t->first) {
        if (!body.empty()) body += "*";
        body += name_of(v);
        if (e > 1) body += "^" + std::to_string(e);
      }
      out += body;
    }
    return out;
  }

 private:
  void add_term(const Monomial& m, const Int& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  std::map<Monomial, Int> terms_;
};

}  // namespace gkzcc
