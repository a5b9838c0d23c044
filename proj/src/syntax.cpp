#include "probwb/syntax.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace probwb {

// ---------------------------------------------------------------- types --

TypePtr ty_nat() {
  static TypePtr t = std::make_shared<FiniteType>(FiniteType{FiniteType::K::Nat, nullptr, nullptr});
  return t;
}
TypePtr ty_omega() {
  static TypePtr t = std::make_shared<FiniteType>(FiniteType{FiniteType::K::Omega, nullptr, nullptr});
  return t;
}
TypePtr ty_s() {
  static TypePtr t = std::make_shared<FiniteType>(FiniteType{FiniteType::K::S, nullptr, nullptr});
  return t;
}
TypePtr ty_arrow(TypePtr result, TypePtr arg) {
  return std::make_shared<FiniteType>(
      FiniteType{FiniteType::K::Arrow, std::move(result), std::move(arg)});
}
TypePtr ty_pure(unsigned n) {
  TypePtr t = ty_nat();
  for (unsigned i = 0; i < n; ++i) t = ty_arrow(ty_nat(), t);
  return t;
}
TypePtr ty_fun(const std::vector<TypePtr>& args, TypePtr result) {
  TypePtr t = std::move(result);
  for (auto it = args.rbegin(); it != args.rend(); ++it) t = ty_arrow(t, *it);
  return t;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind != FiniteType::K::Arrow) return true;
  return type_equal(a->result, b->result) && type_equal(a->arg, b->arg);
}

std::optional<unsigned> pure_degree(const TypePtr& t) {
  if (t->kind == FiniteType::K::Nat) return 0;
  if (t->kind != FiniteType::K::Arrow) return std::nullopt;
  auto res = pure_degree(t->result);
  auto arg = pure_degree(t->arg);
  if (!res || !arg) return std::nullopt;
  // pure types are exactly n+1 = 0(n)
  if (*res == 0 && t->result->kind == FiniteType::K::Nat) return *arg + 1;
  return std::nullopt;
}

std::string print_type(const TypePtr& t) {
  if (auto n = pure_degree(t)) return std::to_string(*n);
  switch (t->kind) {
    case FiniteType::K::Nat: return "0";
    case FiniteType::K::Omega: return "Omega";
    case FiniteType::K::S: return "S";
    case FiniteType::K::Arrow:
      return print_type(t->result) + "(" + print_type(t->arg) + ")";
  }
  return "?";
}

std::vector<TypePtr> arg_types(const TypePtr& t) {
  std::vector<TypePtr> args;
  TypePtr cur = t;
  while (cur->kind == FiniteType::K::Arrow) {
    args.push_back(cur->arg);
    cur = cur->result;
  }
  return args;
}

TypePtr result_type(const TypePtr& t) {
  TypePtr cur = t;
  while (cur->kind == FiniteType::K::Arrow) cur = cur->result;
  return cur;
}

namespace {
bool is_base(const TypePtr& t) { return t->kind != FiniteType::K::Arrow; }

std::optional<unsigned> type_degree(const TypePtr& t) {
  switch (t->kind) {
    case FiniteType::K::Nat: return 0;
    case FiniteType::K::Omega:
    case FiniteType::K::S: return std::nullopt;
    case FiniteType::K::Arrow: {
      auto r = type_degree(t->result);
      auto a = type_degree(t->arg);
      if (!r || !a) return std::nullopt;
      return std::max(*r, *a + 1);
    }
  }
  return std::nullopt;
}
}  // namespace

TypeClass classify_type(const TypePtr& t) {
  TypeClass c;
  c.degree = type_degree(t);
  auto args = arg_types(t);
  TypePtr head = result_type(t);
  if (is_base(head)) {
    c.small = std::all_of(args.begin(), args.end(), [](const TypePtr& a) {
      return a->kind == FiniteType::K::Nat;
    });
    c.admissible = std::all_of(args.begin(), args.end(), [](const TypePtr& a) {
      return classify_type(a).small;
    });
  }
  return c;
}

// ---------------------------------------------------------------- terms --

TermPtr mk_var(std::string name, TypePtr type) {
  auto t = std::make_shared<Term>();
  t->kind = Term::K::Var;
  t->name = std::move(name);
  t->type = std::move(type);
  return t;
}

TermPtr mk_app(TermPtr fun, TermPtr arg) {
  if (fun->type->kind != FiniteType::K::Arrow)
    throw TypeError("application of a non-function: " + print_term(fun));
  if (!type_equal(fun->type->arg, arg->type))
    throw TypeError("type mismatch applying " + print_term(fun) + " to " +
                    print_term(arg) + ": expected " +
                    print_type(fun->type->arg) + ", got " +
                    print_type(arg->type));
  auto t = std::make_shared<Term>();
  t->kind = Term::K::App;
  t->type = fun->type->result;
  t->fun = std::move(fun);
  t->arg = std::move(arg);
  return t;
}

TermPtr mk_app(TermPtr fun, const std::vector<TermPtr>& args) {
  TermPtr t = std::move(fun);
  for (const auto& a : args) t = mk_app(t, a);
  return t;
}

TermPtr mk_lam(std::string binder, TypePtr binder_type, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = Term::K::Lam;
  t->type = ty_arrow(body->type, binder_type);
  t->binder = std::move(binder);
  t->binder_type = std::move(binder_type);
  t->body = std::move(body);
  return t;
}

TermPtr mk_num(Nat n) {
  auto t = std::make_shared<Term>();
  t->kind = Term::K::NumLit;
  t->type = ty_nat();
  t->num = std::move(n);
  return t;
}

const std::map<std::string, TypePtr>& signature() {
  static const std::map<std::string, TypePtr> sig = [] {
    TypePtr n0 = ty_nat(), om = ty_omega(), s = ty_s(), r1 = ty_pure(1);
    TypePtr f_om = ty_arrow(r1, om);       // 1(Omega)
    TypePtr seq_s = ty_arrow(s, n0);       // S(0)
    std::map<std::string, TypePtr> m;
    m["eq"] = ty_fun({om, om}, n0);
    m["In"] = ty_fun({om, s}, n0);
    m["cup"] = ty_fun({s, s}, s);
    m["compl"] = ty_fun({s}, s);
    m["empty"] = s;
    m["comega"] = om;
    m["P"] = ty_fun({s}, r1);
    m["bigU"] = ty_fun({seq_s}, s);
    m["interval"] = ty_fun({r1, r1, r1}, n0);
    m["inv"] = ty_fun({f_om, ty_arrow(n0, r1)}, ty_arrow(n0, om));
    m["I"] = ty_fun({f_om}, n0);
    m["supnorm"] = ty_fun({f_om}, r1);
    m["integ"] = ty_fun({f_om}, r1);
    m["X"] = ty_fun({n0, om}, r1);
    m["Pset"] = ty_fun({n0, n0, n0}, s);
    m["Qset"] = ty_fun({n0, n0, n0}, s);
    m["tauseq"] = ty_fun({n0}, r1);
    m["succ"] = ty_fun({n0}, n0);
    m["add"] = ty_fun({n0, n0}, n0);
    m["tminus"] = ty_fun({n0, n0}, n0);
    m["mul"] = ty_fun({n0, n0}, n0);
    m["max0"] = ty_fun({n0, n0}, n0);
    m["min0"] = ty_fun({n0, n0}, n0);
    m["pairj"] = ty_fun({n0, n0}, n0);
    m["circ"] = ty_fun({n0}, r1);
    m["taubar"] = ty_fun({n0}, n0);
    return m;
  }();
  return sig;
}

TermPtr mk_const(const std::string& name) {
  auto it = signature().find(name);
  if (it == signature().end())
    throw UnknownConstant("unknown constant '" + name + "'");
  auto t = std::make_shared<Term>();
  t->kind = Term::K::Const;
  t->name = name;
  t->type = it->second;
  return t;
}

namespace {
TermPtr mk_instance(std::string name, TypePtr type) {
  auto t = std::make_shared<Term>();
  t->kind = Term::K::Const;
  t->name = std::move(name);
  t->type = std::move(type);
  return t;
}
}  // namespace

TermPtr mk_kcomb(TypePtr rho, TypePtr tau) {
  return mk_instance("Kcomb", ty_fun({rho, tau}, rho));
}
TermPtr mk_scomb(TypePtr rho, TypePtr tau, TypePtr xi) {
  TypePtr x = ty_fun({xi, tau}, rho), y = ty_fun({xi}, tau);
  return mk_instance("Scomb", ty_fun({x, y, xi}, rho));
}
TermPtr mk_id(TypePtr rho) { return mk_instance("Id", ty_fun({rho}, rho)); }
TermPtr mk_rec(TypePtr rho) {
  TypePtr step = ty_fun({rho, ty_nat()}, rho);
  return mk_instance("R", ty_fun({ty_nat(), rho, step}, rho));
}
bool is_instance_const(const std::string& name) {
  return name == "Kcomb" || name == "Scomb" || name == "Id" || name == "R";
}

bool term_equal(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind || !type_equal(a->type, b->type)) return false;
  switch (a->kind) {
    case Term::K::Var:
    case Term::K::Const: return a->name == b->name;
    case Term::K::App:
      return term_equal(a->fun, b->fun) && term_equal(a->arg, b->arg);
    case Term::K::Lam:
      return a->binder == b->binder && type_equal(a->binder_type, b->binder_type) &&
             term_equal(a->body, b->body);
    case Term::K::NumLit: return a->num == b->num;
  }
  return false;
}

namespace {
bool term_alpha_rec(const TermPtr& a, const TermPtr& b,
                    std::vector<std::pair<std::string, std::string>>& bound) {
  if (a->kind != b->kind || !type_equal(a->type, b->type)) return false;
  switch (a->kind) {
    case Term::K::Var: {
      for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
        if (it->first == a->name || it->second == b->name)
          return it->first == a->name && it->second == b->name;
      }
      return a->name == b->name;
    }
    case Term::K::Const: return a->name == b->name;
    case Term::K::App:
      return term_alpha_rec(a->fun, b->fun, bound) &&
             term_alpha_rec(a->arg, b->arg, bound);
    case Term::K::Lam: {
      if (!type_equal(a->binder_type, b->binder_type)) return false;
      bound.emplace_back(a->binder, b->binder);
      bool ok = term_alpha_rec(a->body, b->body, bound);
      bound.pop_back();
      return ok;
    }
    case Term::K::NumLit: return a->num == b->num;
  }
  return false;
}

void free_vars_rec(const TermPtr& t, std::set<std::string>& bound,
                   std::vector<std::pair<std::string, TypePtr>>& out) {
  switch (t->kind) {
    case Term::K::Var:
      if (!bound.count(t->name)) {
        for (const auto& [n, _] : out)
          if (n == t->name) return;
        out.emplace_back(t->name, t->type);
      }
      return;
    case Term::K::Const:
    case Term::K::NumLit: return;
    case Term::K::App:
      free_vars_rec(t->fun, bound, out);
      free_vars_rec(t->arg, bound, out);
      return;
    case Term::K::Lam: {
      bool fresh = bound.insert(t->binder).second;
      free_vars_rec(t->body, bound, out);
      if (fresh) bound.erase(t->binder);
      return;
    }
  }
}
}  // namespace

bool term_alpha_equal(const TermPtr& a, const TermPtr& b) {
  std::vector<std::pair<std::string, std::string>> bound;
  return term_alpha_rec(a, b, bound);
}

std::vector<std::pair<std::string, TypePtr>> free_vars(const TermPtr& t) {
  std::set<std::string> bound;
  std::vector<std::pair<std::string, TypePtr>> out;
  free_vars_rec(t, bound, out);
  return out;
}

namespace {
bool occurs_free(const TermPtr& t, const std::string& var) {
  for (const auto& [n, _] : free_vars(t))
    if (n == var) return true;
  return false;
}

std::string pick_fresh(const std::string& base, const TermPtr& avoid1,
                       const TermPtr& avoid2) {
  std::string cand = base;
  int i = 0;
  while (occurs_free(avoid1, cand) || occurs_free(avoid2, cand))
    cand = base + "_" + std::to_string(i++);
  return cand;
}
}  // namespace

TermPtr subst_term(const TermPtr& t, const std::string& var, const TermPtr& s) {
  switch (t->kind) {
    case Term::K::Var:
      if (t->name == var) {
        if (!type_equal(t->type, s->type))
          throw TypeError("substitution changes the type of " + var);
        return s;
      }
      return t;
    case Term::K::Const:
    case Term::K::NumLit: return t;
    case Term::K::App:
      return mk_app(subst_term(t->fun, var, s), subst_term(t->arg, var, s));
    case Term::K::Lam: {
      if (t->binder == var) return t;
      if (occurs_free(s, t->binder) && occurs_free(t->body, var)) {
        std::string fresh = pick_fresh(t->binder, s, t->body);
        TermPtr renamed =
            subst_term(t->body, t->binder, mk_var(fresh, t->binder_type));
        return mk_lam(fresh, t->binder_type, subst_term(renamed, var, s));
      }
      return mk_lam(t->binder, t->binder_type, subst_term(t->body, var, s));
    }
  }
  return t;
}

namespace {
bool atomic_term(const TermPtr& t) {
  return t->kind == Term::K::Var || t->kind == Term::K::Const ||
         t->kind == Term::K::NumLit;
}
}  // namespace

std::string print_term(const TermPtr& t) {
  switch (t->kind) {
    case Term::K::Var: return t->name;
    case Term::K::Const:
      if (is_instance_const(t->name)) {
        // print the instance parameters, matching the parser's syntax
        auto args = arg_types(t->type);
        std::string ps;
        if (t->name == "Kcomb")
          ps = print_type(args[0]) + "," + print_type(args[1]);
        else if (t->name == "Scomb")
          ps = print_type(result_type(args[0])) + "," +
               print_type(result_type(args[1])) + "," + print_type(args[2]);
        else if (t->name == "Id")
          ps = print_type(args[0]);
        else  // R
          ps = print_type(args[1]);
        return t->name + "^[" + ps + "]";
      }
      return t->name;
    case Term::K::NumLit: {
      std::ostringstream os;
      os << t->num;
      return os.str();
    }
    case Term::K::App: {
      std::string f = print_term(t->fun);
      if (t->fun->kind == Term::K::Lam) f = "(" + f + ")";
      std::string a = print_term(t->arg);
      if (!atomic_term(t->arg)) a = "(" + a + ")";
      return f + " " + a;
    }
    case Term::K::Lam:
      return "\\" + t->binder + "^[" + print_type(t->binder_type) + "]. " +
             print_term(t->body);
  }
  return "?";
}

void typecheck(const TermPtr& t) {
  switch (t->kind) {
    case Term::K::Var:
    case Term::K::Const: return;
    case Term::K::NumLit:
      if (t->type->kind != FiniteType::K::Nat)
        throw TypeError("numeral must have type 0");
      return;
    case Term::K::App: {
      typecheck(t->fun);
      typecheck(t->arg);
      if (t->fun->type->kind != FiniteType::K::Arrow ||
          !type_equal(t->fun->type->arg, t->arg->type) ||
          !type_equal(t->fun->type->result, t->type))
        throw TypeError("ill-typed application node: " + print_term(t));
      return;
    }
    case Term::K::Lam:
      typecheck(t->body);
      if (!type_equal(t->type, ty_arrow(t->body->type, t->binder_type)))
        throw TypeError("ill-typed lambda node");
      return;
  }
}

TermPtr lambda_abstract(const TermPtr& var, const TermPtr& body) {
  if (var->kind != Term::K::Var) throw TypeError("lambda_abstract needs a variable");
  return mk_lam(var->name, var->type, body);
}

TermPtr bracket_abstract(const std::string& var, TypePtr var_type, TermPtr body) {
  body = eliminate_lambdas(body);
  if (body->kind == Term::K::Var && body->name == var) return mk_id(var_type);
  if (!occurs_free(body, var))
    return mk_app(mk_kcomb(body->type, var_type), body);
  // body is an application (vars/consts without var are covered above)
  return mk_app(mk_app(mk_scomb(body->type, body->arg->type, var_type),
                       bracket_abstract(var, var_type, body->fun)),
                bracket_abstract(var, var_type, body->arg));
}

TermPtr eliminate_lambdas(const TermPtr& t) {
  switch (t->kind) {
    case Term::K::Var:
    case Term::K::Const:
    case Term::K::NumLit: return t;
    case Term::K::App:
      return mk_app(eliminate_lambdas(t->fun), eliminate_lambdas(t->arg));
    case Term::K::Lam:
      return bracket_abstract(t->binder, t->binder_type,
                              eliminate_lambdas(t->body));
  }
  return t;
}

// ------------------------------------------------------------- formulas --

FormulaPtr f_prime(PrimeOp op, TermPtr lhs, TermPtr rhs, TypePtr cmp_type) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::K::Prime;
  f->op = op;
  if (op == PrimeOp::Eq0 || op == PrimeOp::Le0) {
    if (lhs->type->kind != FiniteType::K::Nat ||
        rhs->type->kind != FiniteType::K::Nat)
      throw TypeError("type-0 atom over non-0 terms");
  } else if (op == PrimeOp::LeTy) {
    if (!cmp_type) cmp_type = lhs->type;
    if (!type_equal(lhs->type, cmp_type) || !type_equal(rhs->type, cmp_type))
      throw TypeError("<=T atom with mismatched types");
    f->cmp_type = cmp_type;
  } else {
    if (!type_equal(lhs->type, ty_pure(1)) || !type_equal(rhs->type, ty_pure(1)))
      throw TypeError("real atom over non-1 terms");
  }
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

namespace {
FormulaPtr f_binary(Formula::K k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}
}  // namespace

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return f_binary(Formula::K::And, std::move(a), std::move(b));
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return f_binary(Formula::K::Or, std::move(a), std::move(b));
}
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return f_binary(Formula::K::Implies, std::move(a), std::move(b));
}
FormulaPtr f_not(FormulaPtr a) {
  return f_binary(Formula::K::Not, std::move(a), nullptr);
}
FormulaPtr f_forall(std::string var, TypePtr type, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::K::Forall;
  f->var = std::move(var);
  f->var_type = std::move(type);
  f->body = std::move(body);
  return f;
}
FormulaPtr f_exists(std::string var, TypePtr type, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::K::Exists;
  f->var = std::move(var);
  f->var_type = std::move(type);
  f->body = std::move(body);
  return f;
}
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return f_and(f_implies(a, b), f_implies(b, a));
}
FormulaPtr f_top() { return f_prime(PrimeOp::Eq0, mk_num(0), mk_num(0)); }
FormulaPtr f_bot() { return f_prime(PrimeOp::Eq0, mk_num(0), mk_num(1)); }

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::K::Prime:
      return a->op == b->op && term_equal(a->lhs, b->lhs) &&
             term_equal(a->rhs, b->rhs);
    case Formula::K::Not: return formula_equal(a->a, b->a);
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
      return formula_equal(a->a, b->a) && formula_equal(a->b, b->b);
    case Formula::K::Forall:
    case Formula::K::Exists:
      return a->var == b->var && type_equal(a->var_type, b->var_type) &&
             formula_equal(a->body, b->body);
  }
  return false;
}

namespace {
FormulaPtr rename_formula_var(const FormulaPtr& f, const std::string& from,
                              const std::string& to, const TypePtr& type) {
  return subst_formula(f, from, mk_var(to, type));
}
}  // namespace

bool formula_alpha_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Formula::K::Prime:
      return a->op == b->op && term_alpha_equal(a->lhs, b->lhs) &&
             term_alpha_equal(a->rhs, b->rhs);
    case Formula::K::Not: return formula_alpha_equal(a->a, b->a);
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
      return formula_alpha_equal(a->a, b->a) && formula_alpha_equal(a->b, b->b);
    case Formula::K::Forall:
    case Formula::K::Exists: {
      if (!type_equal(a->var_type, b->var_type)) return false;
      if (a->var == b->var) return formula_alpha_equal(a->body, b->body);
      static unsigned salt = 0;
      std::string fresh = "#ae" + std::to_string(salt++);
      return formula_alpha_equal(
          rename_formula_var(a->body, a->var, fresh, a->var_type),
          rename_formula_var(b->body, b->var, fresh, b->var_type));
    }
  }
  return false;
}

bool quantifier_free(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::K::Prime: return true;
    case Formula::K::Not: return quantifier_free(f->a);
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
      return quantifier_free(f->a) && quantifier_free(f->b);
    default: return false;
  }
}

namespace {
void formula_free_vars_rec(const FormulaPtr& f, std::set<std::string>& bound,
                           std::vector<std::pair<std::string, TypePtr>>& out) {
  auto add_term = [&](const TermPtr& t) {
    std::set<std::string> b = bound;
    std::vector<std::pair<std::string, TypePtr>> vs;
    free_vars_rec(t, b, vs);
    for (auto& [n, ty] : vs) {
      bool seen = false;
      for (const auto& [n2, _] : out) seen = seen || n2 == n;
      if (!seen) out.emplace_back(n, ty);
    }
  };
  switch (f->kind) {
    case Formula::K::Prime:
      add_term(f->lhs);
      add_term(f->rhs);
      return;
    case Formula::K::Not: formula_free_vars_rec(f->a, bound, out); return;
    case Formula::K::And:
    case Formula::K::Or:
    case Formula::K::Implies:
      formula_free_vars_rec(f->a, bound, out);
      formula_free_vars_rec(f->b, bound, out);
      return;
    case Formula::K::Forall:
    case Formula::K::Exists: {
      bool fresh = bound.insert(f->var).second;
      formula_free_vars_rec(f->body, bound, out);
      if (fresh) bound.erase(f->var);
      return;
    }
  }
}
}  // namespace

std::vector<std::pair<std::string, TypePtr>> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound;
  std::vector<std::pair<std::string, TypePtr>> out;
  formula_free_vars_rec(f, bound, out);
  return out;
}

FormulaPtr subst_formula(const FormulaPtr& f, const std::string& var,
                         const TermPtr& s) {
  switch (f->kind) {
    case Formula::K::Prime: {
      auto g = f_prime(f->op, subst_term(f->lhs, var, s),
                       subst_term(f->rhs, var, s), f->cmp_type);
      const_cast<Formula*>(g.get())->sugar = f->sugar;
      return g;
    }
    case Formula::K::Not: return f_not(subst_formula(f->a, var, s));
    case Formula::K::And:
      return f_and(subst_formula(f->a, var, s), subst_formula(f->b, var, s));
    case Formula::K::Or:
      return f_or(subst_formula(f->a, var, s), subst_formula(f->b, var, s));
    case Formula::K::Implies:
      return f_implies(subst_formula(f->a, var, s), subst_formula(f->b, var, s));
    case Formula::K::Forall:
    case Formula::K::Exists: {
      auto requant = f->kind == Formula::K::Forall ? f_forall : f_exists;
      if (f->var == var) return f;
      bool capture = occurs_free(s, f->var);
      if (capture) {
        std::string fresh = f->var;
        int i = 0;
        auto taken = [&](const std::string& cand) {
          if (occurs_free(s, cand)) return true;
          for (const auto& [n, _] : free_vars(f->body))
            if (n == cand) return true;
          return cand == var;
        };
        while (taken(fresh)) fresh = f->var + "_" + std::to_string(i++);
        FormulaPtr renamed =
            subst_formula(f->body, f->var, mk_var(fresh, f->var_type));
        return requant(fresh, f->var_type, subst_formula(renamed, var, s));
      }
      return requant(f->var, f->var_type, subst_formula(f->body, var, s));
    }
  }
  return f;
}

namespace {
const char* prime_op_str(PrimeOp op) {
  switch (op) {
    case PrimeOp::Eq0: return "=0";
    case PrimeOp::Le0: return "<=0";
    case PrimeOp::EqR: return "=R";
    case PrimeOp::LeR: return "<=R";
    case PrimeOp::LtR: return "<R";
    case PrimeOp::LeTy: return "<=T";
  }
  return "?";
}
}  // namespace

std::string print_formula(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::K::Prime: {
      std::string op = prime_op_str(f->op);
      if (f->op == PrimeOp::LeTy) op += "[" + print_type(f->cmp_type) + "]";
      auto side = [](const TermPtr& t) {
        std::string s = print_term(t);
        return atomic_term(t) ? s : "(" + s + ")";
      };
      return side(f->lhs) + " " + op + " " + side(f->rhs);
    }
    case Formula::K::Not: return "not (" + print_formula(f->a) + ")";
    case Formula::K::And:
      return "(" + print_formula(f->a) + " and " + print_formula(f->b) + ")";
    case Formula::K::Or:
      return "(" + print_formula(f->a) + " or " + print_formula(f->b) + ")";
    case Formula::K::Implies:
      return "(" + print_formula(f->a) + " -> " + print_formula(f->b) + ")";
    case Formula::K::Forall:
      return "forall " + f->var + "^[" + print_type(f->var_type) + "] (" +
             print_formula(f->body) + ")";
    case Formula::K::Exists:
      return "exists " + f->var + "^[" + print_type(f->var_type) + "] (" +
             print_formula(f->body) + ")";
  }
  return "?";
}

FormulaPtr simplify_qf(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::K::Prime: return f;
    case Formula::K::Not: {
      FormulaPtr a = simplify_qf(f->a);
      if (a->kind == Formula::K::Not) return a->a;
      // not (g -> bot) collapses to g on decidable primes
      if (a->kind == Formula::K::Implies &&
          formula_equal(a->b, f_bot()))
        return a->a;
      return f_not(a);
    }
    case Formula::K::And:
      return f_and(simplify_qf(f->a), simplify_qf(f->b));
    case Formula::K::Or: return f_or(simplify_qf(f->a), simplify_qf(f->b));
    case Formula::K::Implies: {
      FormulaPtr a = simplify_qf(f->a), b = simplify_qf(f->b);
      if (formula_equal(b, f_bot())) {
        if (a->kind == Formula::K::Not) return a->a;
        if (a->kind == Formula::K::Implies && formula_equal(a->b, f_bot()))
          return a->a;
      }
      return f_implies(a, b);
    }
    default: return f;  // quantifiers left alone
  }
}

}  // namespace probwb
