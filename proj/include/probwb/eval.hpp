#pragma once

// Evaluation of terms and formulas in a finite content-space model.  Type 0
// denotes the naturals, Omega the atoms, S the algebra; arrow types denote
// functions, with type-1 objects realized as streams of rational codes
// carrying an exact rational backing wherever the model produces one
// (contents, integrals, sup norms, canonical codes of numerals).
//
// Quantifiers are evaluated over bounded enumerations: 0..horizon at type
// 0, the atoms at Omega, the algebra at S, and tables at arrow types whose
// total count stays under the configured cap.

#include "probwb/contentspace.hpp"
#include "probwb/syntax.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>

namespace probwb {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelValue;
using MV = std::shared_ptr<const ModelValue>;

struct ModelValue {
  enum class K { Nat, Atom, Evt, Fn };
  K kind;
  Nat nat;
  uint64_t atom = 0;
  Event evt;
  std::function<MV(const MV&)> fn;
  std::optional<Rat> real_exact;          // rational backing of a type-1 value
  std::optional<uint64_t> self_index;     // position within an Enumeration
};

MV mv_nat(Nat n);
MV mv_atom(uint64_t a);
MV mv_evt(Event e);
MV mv_fn(std::function<MV(const MV&)> f, std::optional<Rat> exact = std::nullopt);
// Canonical circ-code stream of q, as a type-1 model value.
MV mv_real(const Rat& q);
MV mv_realcode(const RealCode& x);

// Semantics of the random-variable constants X, Pset and tauseq.
struct ModelRV {
  std::function<MeasurableFn(uint64_t)> at;
  std::optional<Nat> uniform_bound;
  std::function<Rat(uint64_t)> tau;  // nondecreasing rational bound sequence
};

using Env = std::map<std::string, MV>;

// A lazily generated list of all model values of one type.
class Enumeration {
 public:
  Enumeration() = default;
  Enumeration(uint64_t size, std::function<MV(uint64_t)> gen)
      : size_(size), gen_(std::move(gen)) {}
  uint64_t size() const { return size_; }
  MV at(uint64_t i) const;

 private:
  uint64_t size_ = 0;
  std::function<MV(uint64_t)> gen_;
};

struct Model {
  const ContentSpace* space = nullptr;
  uint32_t horizon = 6;
  uint64_t enum_cap = 1'000'000;
  uint64_t rec_cap = 1'000'000;  // recursor iteration guard
  const ModelRV* rv = nullptr;

  MV eval(const TermPtr& t, const Env& env = {}) const;
  bool eval_formula(const FormulaPtr& f, const Env& env = {}) const;
  // Exact rational behind a type-1 term (EvalError when there is none).
  Rat eval_real(const TermPtr& t, const Env& env = {}) const;

  // Domain size of a type, saturating at enum_cap + 1.
  uint64_t domain_size(const TypePtr& ty) const;
  // All values of the type; nullopt when the domain exceeds the cap.
  std::optional<Enumeration> enumerate(const TypePtr& ty) const;
  // Index of a value within enumerate(ty); type-0 values are clamped to the
  // horizon (tables are eventually constant past it).
  uint64_t index_of(const TypePtr& ty, const MV& v) const;

  // The type-recursive order <=_rho (trivial at Omega, content comparison
  // at S, pointwise over enumerated arguments at arrows).
  bool le_type(const MV& a, const MV& b, const TypePtr& ty) const;

  Rat content_of(const MV& v) const;  // S-typed values
};

}  // namespace probwb
