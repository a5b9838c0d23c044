#pragma once

// Exact rational and unbounded natural arithmetic used throughout the
// workbench.  All contents, integrals and convergence gaps are rational
// valued, so every check in the test suites is decided exactly.

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace probwb {

using Nat = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Nat nat_pow2(unsigned e) { return Nat(1) << e; }

// 2^e for possibly negative e.
inline Rat rat_pow2(int e) {
  if (e >= 0) return Rat(nat_pow2(static_cast<unsigned>(e)));
  return Rat(1, nat_pow2(static_cast<unsigned>(-e)));
}

inline Nat rat_floor(const Rat& q) {
  Nat n = numerator(q), d = denominator(q);
  Nat r = n / d;
  if (n < 0 && r * d != n) --r;
  return r;
}

inline Nat rat_ceil(const Rat& q) { return -rat_floor(-q); }

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Bit-exact "p/q" syntax (q > 0 after normalization); plain "p" also accepted.
Rat parse_rat(const std::string& text);
std::string format_rat(const Rat& q);

struct BadRational : std::runtime_error {
  explicit BadRational(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace probwb
