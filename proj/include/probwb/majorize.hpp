#pragma once

// Majorizability machinery: the type projection into the Omega/S-free
// fragment, majorant synthesis for closed terms over the signature, and
// model-level checking of the hereditary majorization relation.  Base
// clauses: n majorizes m at type 0 iff n >= m; n majorizes x at Omega iff
// n >= P(Omega); n majorizes A at S iff n >= P(A).  At arrow types the
// relation is checked over argument pairs via the curried criterion
// (mixed pairs for the relation itself, projected pairs for the
// self-monotonicity side).

#include "probwb/eval.hpp"
#include "probwb/syntax.hpp"

#include <optional>
#include <string>
#include <vector>

namespace probwb {

// 0,Omega,S all project to 0; arrows map structurally.
TypePtr project_type(const TypePtr& t);

struct MajorantCandidate {
  TermPtr subject;
  TermPtr majorant;  // type project_type(subject type)
};

// Closed-term majorant synthesis: constants from the fixed table, numerals
// themselves, applications by composition; lambdas are bracket-abstracted
// into combinators first.
TermPtr synth_majorant(const TermPtr& t);

struct CheckOpts {
  uint64_t pair_budget = 4096;  // argument pairs examined per argument slot
  uint64_t combo_budget = 200000;  // argument tuples examined per clause
  uint64_t seed = 1;
  bool allow_sampling = true;  // DomainTooLarge instead, when false
  uint32_t stream_depth = 0;   // extra indices past the horizon for type-1
  bool parallel = false;       // fan the tuple sweep out with OpenMP
};

struct CheckReport {
  bool exhaustive = true;  // false once any argument slot was sampled
  uint64_t tuples_checked = 0;
  std::string note;
};

// Def-7.5-style check that candidate majorizes subject over the given
// space at the given type-0 horizon.  Exhaustive whenever every argument
// domain enumerates under the budget, seeded sampling otherwise.
bool check_majorizes(const TermPtr& candidate, const TermPtr& subject,
                     const ContentSpace& space, uint32_t horizon,
                     const CheckOpts& opts = {}, CheckReport* report = nullptr,
                     const ModelRV* rv = nullptr);

// The relation on model values (candidate side lives at project_type(ty)).
bool model_majorizes(const Model& m, const MV& candidate, const MV& value,
                     const TypePtr& ty, const CheckOpts& opts = {},
                     CheckReport* report = nullptr);

// <=_rho on model values (delegates to Model::le_type).
bool le_type(const Model& m, const MV& a, const MV& b, const TypePtr& ty);

// Pairs (g, y) with g at the projected type majorizing y, used to drive the
// arrow-clause sweeps; exhaustive at small enumerable types, canonical
// constructions plus seeded samples elsewhere.
struct MajPair {
  MV upper;  // at project_type(ty)
  MV lower;  // at ty
};
std::vector<MajPair> majorization_pairs(const Model& m, const TypePtr& ty,
                                        const CheckOpts& opts, bool* exhaustive);

struct TypeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace probwb
