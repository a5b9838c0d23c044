#pragma once

// Transfer of quantitative content from modes of convergence on real
// sequences to the corresponding almost-uniform modes on random variables:
// realizer triples for the real-sequence implication are lifted by
// substituting the natural-number bound sequence's majorant for the
// sequence-majorant argument.  The conclusion inequality follows from a
// pointwise complement inclusion, which is verified event by event; the
// finite/cofinite space with the identity sequence shows the bound is not
// optional.

#include "probwb/contentspace.hpp"
#include "probwb/egorov.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "json.hpp"

namespace probwb {

// A quantifier-free mode kernel P0(a,b,c, x, p): total, reading only a
// declared prefix of the sequence.  The workbench instantiates sequences
// pointwise from random variables, so the kernel receives exact rationals.
struct ModePredicate {
  std::string name;
  std::function<bool(uint64_t a, uint64_t b, uint64_t c,
                     const std::vector<Rat>& prefix,
                     const std::vector<Rat>& params)>
      holds;
  std::function<size_t(uint64_t a, uint64_t b, uint64_t c)> prefix_len;
};

// B-functionals of the lifted statement: k |-> a counterfunction.
using BFunctional = std::function<NatFn(uint64_t)>;

struct RealizerTriple {
  // V(p, xstar, B, u); A and C additionally take w.
  std::function<uint64_t(const std::vector<Rat>&, const NatFn&, const NatFn&,
                         uint64_t)>
      V;
  std::function<uint64_t(const std::vector<Rat>&, const NatFn&, const NatFn&,
                         uint64_t, uint64_t)>
      A, C;
};

struct BoundSeq {
  std::function<RealCode(uint64_t)> at;
  bool monotone = true;
};

struct LiftedQuery {
  std::string component;  // "V" | "A" | "C" | "taubar"
  std::vector<uint64_t> args_digest;
  uint64_t result;
};

struct LiftedRealizers {
  std::function<uint64_t(const std::vector<Rat>&, const BFunctional&, uint64_t,
                         uint64_t)>
      Vp;
  std::function<uint64_t(const std::vector<Rat>&, const BFunctional&, uint64_t,
                         uint64_t, uint64_t)>
      Ap, Cp;
  NatFn tau_bar;
  std::shared_ptr<std::vector<LiftedQuery>> log;
};

struct PremiseFailed : SpaceError {
  using SpaceError::SpaceError;
};
struct ConclusionFailed : SpaceError {
  using SpaceError::SpaceError;
};

// Literal transcription of the lift: A' alpha = A(p, taubar, B k, u, w),
// likewise C'; V'(p,B,k,u) = V(p, taubar, B k, u); taubar(n) =
// ceil(decode(tau(n)(0))) + 1.  The bound-sequence invariants are checked
// against X atom-wise up to check_to.
LiftedRealizers lift_realizers(const RealizerTriple& r, const BoundSeq& tau,
                               const ContentSpace& space,
                               const RandomVariableSeq& X,
                               uint64_t check_to = 16);

struct TransferSweep {
  std::vector<std::vector<Rat>> params = {{}};
  std::vector<BFunctional> Bs;
  std::vector<uint64_t> ks, us, ws;
};

struct TransferReport {
  uint64_t cases = 0;
  uint64_t premise_holds = 0;   // lifted premise inequality satisfied
  uint64_t conclusion_holds = 0;
  bool all_pass = true;
  nlohmann::json to_json() const;
};

// Checks, for every tuple in the sweep: the realizer premise on each
// pointwise sequence lambda n.X(n)(z) (the brute-force oracle; PremiseFailed
// names the offending atom), the complement inclusion Q^c within P^c, and
// the conclusion inequality whenever the premise inequality holds
// (ConclusionFailed would be an implementation bug).
TransferReport verify_transfer(const ContentSpace& space,
                               const RandomVariableSeq& X,
                               const ModePredicate& P0, const ModePredicate& Q0,
                               const RealizerTriple& realizers,
                               const LiftedRealizers& lifted,
                               const TransferSweep& sweep);

// The finite/cofinite space over N, the identity sequence X(n)(z) = z, the
// trivially true P0 and the "n dominates the first value" Q0.  P holds
// almost uniformly; every Q(n,m)^c has content 1, so the lifted conclusion
// fails even though each pointwise sequence satisfies P -> Q.
struct CounterexampleBundle {
  ContentSpace space;
  RandomVariableSeq X;
  ModePredicate P0, Q0;
};
CounterexampleBundle counterexample_space();

struct CounterexampleReport {
  uint64_t swept = 0;
  bool p_side_full = true;        // every P event is the whole space
  bool q_side_always_null = true; // every Q(n,m)^c has content 1
  bool pointwise_premise_ok = true;
  nlohmann::json to_json() const;
};
// Sweeps n, m <= limit, building the finite events {z : z <= n} directly.
CounterexampleReport counterexample_report(uint64_t limit = 32);

}  // namespace probwb
