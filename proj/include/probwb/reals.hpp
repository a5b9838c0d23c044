#pragma once

// Codings for rationals and reals: the pairing function j, the rational
// code convention, type-1 reals as fast-converging Cauchy streams of
// rational codes, the hat normalizer and the canonical (.)o selection.
//
// A real is a total stream n |-> code, where the code decodes to the n-th
// rational approximation.  Streams constructed from an exact rational keep
// that rational around so comparisons on them are decided exactly.

#include "probwb/rat.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

namespace probwb {

// j(n,m) = ((n+m)^2 + 3n + m)/2 when that quantity is even, 0 otherwise.
// (The quantity is always even, so j is the Cantor-style bijection.)
Nat pair_j(const Nat& n, const Nat& m);

// Inverse of pair_j; total since j is a bijection.
std::pair<Nat, Nat> unpair_j(const Nat& code);

// Decoding convention: with code = j(n,m), the value is (n/2)/(m+1) for
// even n and -((n+1)/2)/(m+1) for odd n.
Rat rat_of_code(const Nat& code);

// Canonical code of a rational under the convention above (reduced p/q with
// q > 0 maps to j(2p, q-1) resp. j(2|p|-1, q-1)).
Nat code_of_rat(const Rat& q);

struct RatCode {
  Nat code;
  Rat value;
};

// The canonical selection (.)o: for q >= 0 the code j(2*k0, 2^{n+1}-1) with
// k0 = max k [k/2^{n+1} <= q]; for q < 0 the code j(2*kb0 - 1, 2^{n+1}-1)
// with kb0 = max k [k/2^{n+1} <= |q|] (truncated minus at kb0 = 0).
Nat circ(const Rat& q, unsigned n);
Rat circ_value(const Rat& q, unsigned n);

class RealCode {
 public:
  RealCode() : RealCode(constant(Rat(0))) {}

  // Constant stream of the canonical code of q (already fast Cauchy).
  static RealCode constant(const Rat& q);
  // The (.)o stream of q; keeps q as exact backing.
  static RealCode canonical(const Rat& q);
  // Arbitrary total stream of codes; not assumed fast Cauchy.
  static RealCode from_fn(std::function<Nat(uint32_t)> gen);
  static RealCode from_fn_exact(std::function<Nat(uint32_t)> gen, Rat exact);

  Nat code_at(uint32_t n) const;
  Rat rat_at(uint32_t n) const { return rat_of_code(code_at(n)); }
  RatCode at(uint32_t n) const {
    Nat c = code_at(n);
    return RatCode{c, rat_of_code(c)};
  }

  // Exact rational represented by this stream, when known at construction.
  const std::optional<Rat>& exact() const;

  // Identity of the underlying stream object; two RealCodes are
  // "syntactically identical" iff they share it.
  uint64_t id() const;
  bool same_stream(const RealCode& other) const { return id() == other.id(); }

  struct State;

 private:
  explicit RealCode(std::shared_ptr<State> st) : state_(std::move(st)) {}
  std::shared_ptr<State> state_;
};

// hat(x): x unchanged while the prefix obeys |x(k) - x(k+1)| < 2^{-k-1};
// from the first violation on, the stream stalls at the offending prefix
// value.  Idempotent; identity on fast-Cauchy inputs.
RealCode hat(const RealCode& x);

// Exact arithmetic on hat-normalized reals; outputs are hat-normalized.
RealCode real_add(const RealCode& x, const RealCode& y);
RealCode real_mul(const RealCode& x, const RealCode& y);
RealCode real_abs(const RealCode& x);
RealCode real_neg(const RealCode& x);

enum class Cmp { LT, GT, WITHIN };

// Three-valued comparison: WITHIN iff |x - y| <= 2^{-k} (checked exactly on
// rational-backed streams), otherwise the certified strict order.  On raw
// streams the check refines down to 2^{-k-64} and then resolves to WITHIN;
// exact equality of reals is never decided.
Cmp compare_upto(const RealCode& x, const RealCode& y, unsigned k);

}  // namespace probwb
