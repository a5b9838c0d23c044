#pragma once

// Quantitative convergence of random-variable sequences: the basic
// closeness events, the two almost-uniform convergence modes (via finite
// unions and via metastable pointwise intersections), the constructions
// converting certificates between them, the combinatorial witness for
// sequences of events, and the dominated-convergence index.  All contents
// are computed exactly, so every certificate is verified rather than
// trusted.

#include "probwb/contentspace.hpp"
#include "probwb/eval.hpp"

#include <functional>
#include <optional>
#include <vector>

#include "json.hpp"

namespace probwb {

struct RandomVariableSeq {
  std::function<MeasurableFn(uint64_t)> at;
  std::optional<Nat> uniform_bound;  // |X(n)(x)| <= bound for all n, x

  // view usable by the term evaluator (tau is the constant bound sequence)
  ModelRV model_view() const;
};

using NatFn = std::function<uint64_t(uint64_t)>;
// A functional on number sequences, queried at finitely many points per
// run; queries are logged for replayable certificates.
using NatFunctional = std::function<uint64_t(const NatFn&)>;

struct FunctionalQuery {
  std::vector<std::pair<uint64_t, uint64_t>> points;  // (arg, F(arg)) pairs
  uint64_t result;
};

// Wraps M so that each call records which points of its argument were
// inspected and what was returned.
NatFunctional logged_functional(NatFunctional m,
                                std::shared_ptr<std::vector<FunctionalQuery>> log);

// The event {x : |X(i)(x) - X(j)(x)| <= 2^{-a}}.
Event p_set(const ContentSpace& space, const RandomVariableSeq& X, uint64_t a,
            uint64_t i, uint64_t j);

// Least b <= search_bound with P(U_{i,j=b..c} p_set(a,i,j)^c) <= 2^{-k} for
// every c <= search_bound (the union grows with c, so c = search_bound
// decides); nullopt when no b works.
std::optional<uint64_t> au_finite_unions_bound(const ContentSpace& space,
                                               const RandomVariableSeq& X,
                                               unsigned k, uint64_t a,
                                               uint64_t search_bound);

// Least b with P(I_{m=0..b} U_{i,j=m..F(m)} p_set(a,i,j)^c) <= 2^{-k}.
std::optional<uint64_t> aump_bound(const ContentSpace& space,
                                   const RandomVariableSeq& X, unsigned k,
                                   uint64_t a, const NatFn& F,
                                   uint64_t search_bound);

// Forward direction: a finite-unions certificate b0 already satisfies the
// metastable-pointwise inequality for any F; returns b0 after verifying the
// inequality exactly for the given F.
std::optional<uint64_t> egorov_forward(const ContentSpace& space,
                                       const RandomVariableSeq& X, unsigned k,
                                       uint64_t a, const NatFn& F,
                                       uint64_t search_bound);

// From the proof of the combinatorial theorem: for each m the index F(m)
// is the stabilization scan at threshold (2^{-u} - 2^{-v})/2^{m+1}, and the
// returned n is M applied to that F.  Contract (verified by the tests): if
// P(I_{m<=M(G)} U_{j=m..G(m)} A(j)) <= 2^{-v} for all G, then
// P(A(n)) < 2^{-u}.
uint64_t combinatorial_witness(const ContentSpace& space, const EventSeq& A,
                               const NatFunctional& M, unsigned u, unsigned v,
                               uint64_t search_bound);

struct CertificateInvalid : SpaceError {
  using SpaceError::SpaceError;
};

// Reverse direction: searches for a finite-unions bound at (k, a), with the
// metastable certificate M (valid at k+1) spot-checked first and the
// G / max-prefix / M' construction materialized when the search would
// exhaust.  On finite spaces with stabilizing closeness events the search
// succeeds.
std::optional<uint64_t> egorov_reverse(const ContentSpace& space,
                                       const RandomVariableSeq& X, unsigned k,
                                       uint64_t a, const NatFunctional& M_certificate,
                                       uint64_t search_bound);

// For X with values in [0,1]: an index n such that |int X(i) - int X(j)| <=
// 2^{-k} for all i,j in [n, search_bound], obtained from the finite-unions
// bound at (k+2, k+1) and verified exactly.
std::optional<uint64_t> dct_index(const ContentSpace& space,
                                  const RandomVariableSeq& X, unsigned k,
                                  uint64_t search_bound);

// Serializable convergence certificate.
struct ConvergenceCertificate {
  std::string mode;  // "au-finite-unions" | "au-metastable-pointwise"
  unsigned k = 0;
  uint64_t a = 0;
  uint64_t bound = 0;
  uint64_t verified_up_to = 0;
  std::vector<FunctionalQuery> queries;

  nlohmann::json to_json() const;
  static ConvergenceCertificate from_json(const nlohmann::json& j);
};

}  // namespace probwb
