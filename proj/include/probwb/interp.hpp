#pragma once

// The translation passes: Kuroda's negative translation, the Dialectica
// interpretation into an exists/forall form with a quantifier-free matrix,
// the classical prenex normal form, and Skolemization of Delta-shaped
// axioms (forall-exists-bounded-forall) into purely universal cores with
// bounded Skolem constants.

#include "probwb/eval.hpp"
#include "probwb/parse.hpp"
#include "probwb/syntax.hpp"

#include <optional>
#include <string>
#include <vector>

namespace probwb {

struct TypedVar {
  std::string name;
  TypePtr type;
};

struct DialecticaForm {
  std::vector<TypedVar> witnesses;   // the exists tuple
  std::vector<TypedVar> challenges;  // the forall tuple
  FormulaPtr matrix;                 // quantifier-free
};

// not not A* with the Kuroda clauses (prime unchanged, connectives
// homomorphic, exists unchanged, a double negation after every forall).
FormulaPtr negative_translate(const FormulaPtr& f);

// The clause-by-clause Dialectica form.  Fresh tuple variables are drawn
// from a deterministic counter (U* for implication witnesses, Y* for
// implication challenges, z* for the or-flag, X* for forall lifts).
DialecticaForm dialectica(const FormulaPtr& f);

// dialectica(negative_translate(f)) with double negations collapsed on the
// decidable quantifier-free parts, before and after.
DialecticaForm nd_interpret(const FormulaPtr& f);

// Classically equivalent prenex normal form; quantifier order follows
// left-to-right appearance (premises flip).
FormulaPtr prenex(const FormulaPtr& f);

struct SkolemizedAxiom {
  struct SkolemConst {
    std::string name;
    TypePtr type;
    TermPtr bound;  // lambda over the leading universals
  };
  std::vector<SkolemConst> skolem_constants;
  FormulaPtr universal_core;
};

struct NotDeltaShape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Requires the shape forall a.. exists b <= r(a) .. forall c.. A_qf with
// admissible types throughout; returns bounded Skolem constants and the
// universal core with the b's instantiated.
SkolemizedAxiom skolem_delta(const FormulaPtr& f);

bool dialectica_alpha_equal(const DialecticaForm& a, const DialecticaForm& b);
std::string print_dialectica(const DialecticaForm& d);
// Inverse of print_dialectica; free variables of the matrix beyond the
// tuples come from ctx.
DialecticaForm parse_dialectica(const std::string& text, const VarCtx& ctx = {});

// Exhaustive witness search: true iff some witness tuple makes the matrix
// true for every challenge tuple, all drawn from the model's bounded
// enumerations.  nullopt when a tuple type exceeds the enumeration cap.
std::optional<bool> verify_dialectica(const DialecticaForm& d, const Model& m,
                                      const Env& env = {});

// Whether every tuple type is enumerable (and the full search fits the
// model's cap), i.e. verify_dialectica would return a value.
bool dialectica_searchable(const DialecticaForm& d, const Model& m);

}  // namespace probwb
