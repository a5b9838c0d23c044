#pragma once

// Abstract syntax for the finite-type language over the base types 0, Omega
// and S: types, terms over the fixed constant signature, formulas built
// from decidable atoms, classification of types, substitution and
// lambda-abstraction.  All values are immutable and freely shared.

#include "probwb/rat.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace probwb {

// ---------------------------------------------------------------- types --

struct FiniteType;
using TypePtr = std::shared_ptr<const FiniteType>;

struct FiniteType {
  enum class K { Nat, Omega, S, Arrow };
  K kind;
  TypePtr result;  // Arrow: rho in rho(tau)
  TypePtr arg;     // Arrow: tau in rho(tau)
};

TypePtr ty_nat();
TypePtr ty_omega();
TypePtr ty_s();
TypePtr ty_arrow(TypePtr result, TypePtr arg);
// Pure type n: 0 is the base, n+1 = 0(n).
TypePtr ty_pure(unsigned n);
// Curried function type: args applied left to right, i.e. the type
// result(args_k)...(args_1).
TypePtr ty_fun(const std::vector<TypePtr>& args, TypePtr result);

bool type_equal(const TypePtr& a, const TypePtr& b);
std::optional<unsigned> pure_degree(const TypePtr& t);  // t = pure n
std::string print_type(const TypePtr& t);

// Argument types of a curried arrow, outermost first (the order the
// function consumes them), plus the final result type.
std::vector<TypePtr> arg_types(const TypePtr& t);
TypePtr result_type(const TypePtr& t);

struct TypeClass {
  std::optional<unsigned> degree;  // defined only for types without Omega, S
  bool small = false;
  bool admissible = false;
};
TypeClass classify_type(const TypePtr& t);

// ---------------------------------------------------------------- terms --

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class K { Var, Const, App, Lam, NumLit };
  K kind;
  TypePtr type;  // every node carries its type

  std::string name;      // Var, Const
  TermPtr fun, arg;      // App
  std::string binder;    // Lam
  TypePtr binder_type;   // Lam
  TermPtr body;          // Lam
  Nat num;               // NumLit
};

struct SyntaxError : std::runtime_error {
  size_t pos;
  SyntaxError(const std::string& what, size_t pos_ = 0)
      : std::runtime_error(what), pos(pos_) {}
};
struct TypeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TermPtr mk_var(std::string name, TypePtr type);
TermPtr mk_app(TermPtr fun, TermPtr arg);  // rejects ill-typed applications
TermPtr mk_app(TermPtr fun, const std::vector<TermPtr>& args);
TermPtr mk_lam(std::string binder, TypePtr binder_type, TermPtr body);
TermPtr mk_num(Nat n);

// The fixed signature (canonical ASCII names; the parser also accepts the
// Unicode spellings).
const std::map<std::string, TypePtr>& signature();
TermPtr mk_const(const std::string& name);  // UnknownConstant on miss
// Typed instance families: combinators and recursors.
TermPtr mk_kcomb(TypePtr rho, TypePtr tau);                // K x y = x
TermPtr mk_scomb(TypePtr rho, TypePtr tau, TypePtr xi);    // S x y z = x z (y z)
TermPtr mk_id(TypePtr rho);                                // Id x = x
TermPtr mk_rec(TypePtr rho);                               // R_rho
bool is_instance_const(const std::string& name);

struct UnknownConstant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool term_equal(const TermPtr& a, const TermPtr& b);       // structural
bool term_alpha_equal(const TermPtr& a, const TermPtr& b);
std::vector<std::pair<std::string, TypePtr>> free_vars(const TermPtr& t);
TermPtr subst_term(const TermPtr& t, const std::string& var, const TermPtr& s);
std::string print_term(const TermPtr& t);

// Re-validate the App invariant over the whole tree.
void typecheck(const TermPtr& t);

// lambda-abstraction: the native binder node (beta is honored by the
// evaluator; the guarantee tested is eval(App(lambda_abstract(x,t), s)) =
// eval(t[s/x])).
TermPtr lambda_abstract(const TermPtr& var, const TermPtr& body);

// Bracket abstraction into Kcomb/Scomb/Id instances; eliminates every Lam
// node.  Used where combinator-only terms are needed.
TermPtr bracket_abstract(const std::string& var, TypePtr var_type, TermPtr body);
TermPtr eliminate_lambdas(const TermPtr& t);

// ------------------------------------------------------------- formulas --

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Atom relations.  Eq0/Le0 compare type-0 terms; EqR/LeR/LtR compare
// rational-backed reals (decided exactly by the finite-model evaluator);
// LeTy is the type-recursive order <=_rho used in bounded quantifiers.
enum class PrimeOp { Eq0, Le0, EqR, LeR, LtR, LeTy };

struct Formula {
  enum class K { Prime, And, Or, Implies, Not, Forall, Exists };
  K kind;

  PrimeOp op = PrimeOp::Eq0;  // Prime
  TermPtr lhs, rhs;           // Prime
  TypePtr cmp_type;           // Prime with op == LeTy

  FormulaPtr a, b;  // And/Or/Implies (b unused for Not)

  std::string var;   // Forall/Exists
  TypePtr var_type;  // Forall/Exists
  FormulaPtr body;   // Forall/Exists

  std::string sugar;  // printing tag only; ignored by equality
};

FormulaPtr f_prime(PrimeOp op, TermPtr lhs, TermPtr rhs,
                   TypePtr cmp_type = nullptr);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_forall(std::string var, TypePtr type, FormulaPtr body);
FormulaPtr f_exists(std::string var, TypePtr type, FormulaPtr body);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);  // expands to two implications
FormulaPtr f_top();                            // 0 =0 0
FormulaPtr f_bot();                            // 0 =0 1

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
bool formula_alpha_equal(const FormulaPtr& a, const FormulaPtr& b);
bool quantifier_free(const FormulaPtr& f);
std::vector<std::pair<std::string, TypePtr>> free_vars(const FormulaPtr& f);
FormulaPtr subst_formula(const FormulaPtr& f, const std::string& var,
                         const TermPtr& s);
std::string print_formula(const FormulaPtr& f);

// Push double negations out of a quantifier-free formula (not not G -> G,
// (G -> bot) -> bot collapses); primes are decidable so this is sound.
FormulaPtr simplify_qf(const FormulaPtr& f);

struct FreshNames {
  explicit FreshNames(std::string prefix = "f") : prefix_(std::move(prefix)) {}
  std::string next() { return prefix_ + std::to_string(counter_++); }

 private:
  std::string prefix_;
  unsigned counter_ = 0;
};

}  // namespace probwb
