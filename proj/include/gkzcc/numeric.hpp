#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/miller_rabin.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace gkzcc {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Thrown when an operation's stated precondition is violated.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

inline Int mod_norm(const Int& x, const Int& p) {
  Int r = x % p;
  if (r < 0) r += p;
  return r;
}

inline bool is_prime(const Int& p) {
  if (p < 2) return false;
  return boost::multiprecision::miller_rabin_test(p, 25);
}

inline void require_prime(const Int& p) {
  if (!is_prime(p)) throw PreconditionError("p must be prime, got " + p.str());
}

// Inverse of x modulo prime p.
inline Int inv_mod(const Int& x, const Int& p) {
  Int a = mod_norm(x, p), b = p;
  Int u = 1, v = 0;
  while (b != 0) {
    Int q = a / b;
    Int t = a - q * b; a = b; b = t;
    t = u - q * v; u = v; v = t;
  }
  if (a != 1) throw std::logic_error("inv_mod: not invertible");
  return mod_norm(u, p);
}

inline Int gcd_all(const std::vector<Int>& v) {
  Int g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, x);
  return g;
}

inline Int p_valuation(Int x, const Int& p) {
  if (x == 0) throw std::logic_error("p_valuation of zero");
  Int v = 0;
  while (x % p == 0) { x /= p; ++v; }
  return v;
}

inline Rat pow_rat(const Rat& base, const Int& e) {
  if (e == 0) return Rat(1);
  Rat b = e > 0 ? base : Rat(1) / base;
  Int k = e > 0 ? e : Int(-e);
  Rat r = 1;
  for (Int i = 0; i < k; ++i) r *= b;
  return r;
}

}  // namespace gkzcc
