#include "probwb/interp.hpp"

#include "probwb/parse.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace probwb {

namespace {

// Rename every binder so that bound names are pairwise distinct and
// disjoint from the free variables (deterministic suffixing).  The tuple
// constructions below absorb binders into shared scopes, so this keeps all
// later substitutions capture-free.
class Barendregt {
 public:
  explicit Barendregt(const FormulaPtr& f) {
    for (const auto& [n, _] : free_vars(f)) used_.insert(n);
  }

  FormulaPtr run(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::K::Prime: return f;
      case Formula::K::Not: return f_not(run(f->a));
      case Formula::K::And: return f_and(run(f->a), run(f->b));
      case Formula::K::Or: return f_or(run(f->a), run(f->b));
      case Formula::K::Implies: return f_implies(run(f->a), run(f->b));
      case Formula::K::Forall:
      case Formula::K::Exists: {
        std::string name = f->var;
        FormulaPtr body = f->body;
        if (used_.count(name)) {
          std::string fresh = name;
          int k = 1;
          while (used_.count(fresh)) fresh = name + "_" + std::to_string(k++);
          body = subst_formula(body, name, mk_var(fresh, f->var_type));
          name = fresh;
        }
        used_.insert(name);
        body = run(body);
        return f->kind == Formula::K::Forall
                   ? f_forall(name, f->var_type, body)
                   : f_exists(name, f->var_type, body);
      }
    }
    return f;
  }

  std::set<std::string>& used() { return used_; }

 private:
  std::set<std::string> used_;
};

FormulaPtr kuroda_star(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::K::Prime: return f;
    case Formula::K::Not: return f_not(kuroda_star(f->a));
    case Formula::K::And: return f_and(kuroda_star(f->a), kuroda_star(f->b));
    case Formula::K::Or: return f_or(kuroda_star(f->a), kuroda_star(f->b));
    case Formula::K::Implies:
      return f_implies(kuroda_star(f->a), kuroda_star(f->b));
    case Formula::K::Exists:
      return f_exists(f->var, f->var_type, kuroda_star(f->body));
    case Formula::K::Forall:
      return f_forall(f->var, f->var_type, f_not(f_not(kuroda_star(f->body))));
  }
  return f;
}

// collapse double negations in front of quantifier-free parts (primes are
// decidable, so the collapse is harmless on either side of the pipeline)
FormulaPtr collapse_qf_negations(const FormulaPtr& f) {
  if (f->kind == Formula::K::Not && f->a->kind == Formula::K::Not &&
      quantifier_free(f->a->a))
    return simplify_qf(f->a->a);
  switch (f->kind) {
    case Formula::K::Prime: return f;
    case Formula::K::Not: return f_not(collapse_qf_negations(f->a));
    case Formula::K::And:
      return f_and(collapse_qf_negations(f->a), collapse_qf_negations(f->b));
    case Formula::K::Or:
      return f_or(collapse_qf_negations(f->a), collapse_qf_negations(f->b));
    case Formula::K::Implies:
      return f_implies(collapse_qf_negations(f->a),
                       collapse_qf_negations(f->b));
    case Formula::K::Forall:
      return f_forall(f->var, f->var_type, collapse_qf_negations(f->body));
    case Formula::K::Exists:
      return f_exists(f->var, f->var_type, collapse_qf_negations(f->body));
  }
  return f;
}

class DialecticaPass {
 public:
  explicit DialecticaPass(std::set<std::string> used) : used_(std::move(used)) {}

  DialecticaForm run(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::K::Prime: return {{}, {}, f};
      case Formula::K::And: {
        DialecticaForm da = run(f->a), db = run(f->b);
        return {concat(da.witnesses, db.witnesses),
                concat(da.challenges, db.challenges),
                f_and(da.matrix, db.matrix)};
      }
      case Formula::K::Or: {
        DialecticaForm da = run(f->a), db = run(f->b);
        TypedVar flag{fresh("z"), ty_nat()};
        DialecticaForm out;
        out.witnesses.push_back(flag);
        out.witnesses = concat(out.witnesses, concat(da.witnesses, db.witnesses));
        out.challenges = concat(da.challenges, db.challenges);
        TermPtr z = mk_var(flag.name, flag.type);
        out.matrix =
            f_and(f_implies(f_prime(PrimeOp::Eq0, z, mk_num(0)), da.matrix),
                  f_implies(f_not(f_prime(PrimeOp::Eq0, z, mk_num(0))),
                            db.matrix));
        return out;
      }
      case Formula::K::Not: return implication(run(f->a), {{}, {}, f_bot()});
      case Formula::K::Implies: return implication(run(f->a), run(f->b));
      case Formula::K::Exists: {
        DialecticaForm da = run(f->body);
        DialecticaForm out;
        out.witnesses.push_back({f->var, f->var_type});
        out.witnesses = concat(out.witnesses, da.witnesses);
        out.challenges = da.challenges;
        out.matrix = da.matrix;
        return out;
      }
      case Formula::K::Forall: {
        DialecticaForm da = run(f->body);
        DialecticaForm out;
        TermPtr z = mk_var(f->var, f->var_type);
        out.matrix = da.matrix;
        for (const TypedVar& x : da.witnesses) {
          TypedVar lifted{fresh("X"), ty_fun({f->var_type}, x.type)};
          out.witnesses.push_back(lifted);
          out.matrix = subst_formula(
              out.matrix, x.name, mk_app(mk_var(lifted.name, lifted.type), z));
        }
        out.challenges.push_back({f->var, f->var_type});
        out.challenges = concat(out.challenges, da.challenges);
        return out;
      }
    }
    return {{}, {}, f};
  }

 private:
  std::set<std::string> used_;
  unsigned counter_ = 0;

  std::string fresh(const std::string& stem) {
    std::string name;
    do {
      name = stem + std::to_string(counter_++);
    } while (used_.count(name));
    used_.insert(name);
    return name;
  }

  static std::vector<TypedVar> concat(const std::vector<TypedVar>& a,
                                      const std::vector<TypedVar>& b) {
    std::vector<TypedVar> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  static std::vector<TermPtr> vars_of(const std::vector<TypedVar>& vs) {
    std::vector<TermPtr> out;
    for (const TypedVar& v : vs) out.push_back(mk_var(v.name, v.type));
    return out;
  }

  static std::vector<TypePtr> types_of(const std::vector<TypedVar>& vs) {
    std::vector<TypePtr> out;
    for (const TypedVar& v : vs) out.push_back(v.type);
    return out;
  }

  // clause for A -> B: exists U,Y forall x,v (A_D(x, Y x v) -> B_D(U x, v))
  DialecticaForm implication(const DialecticaForm& da, const DialecticaForm& db) {
    DialecticaForm out;
    std::vector<TermPtr> xs = vars_of(da.witnesses);
    std::vector<TermPtr> vs = vars_of(db.challenges);
    std::vector<TypePtr> xt = types_of(da.witnesses);
    std::vector<TypePtr> vt = types_of(db.challenges);

    FormulaPtr rhs = db.matrix;
    for (const TypedVar& u : db.witnesses) {
      TypedVar uw{fresh("U"), ty_fun(xt, u.type)};
      out.witnesses.push_back(uw);
      rhs = subst_formula(rhs, u.name, mk_app(mk_var(uw.name, uw.type), xs));
    }
    std::vector<TypePtr> xvt = xt;
    xvt.insert(xvt.end(), vt.begin(), vt.end());
    std::vector<TermPtr> xvs = xs;
    xvs.insert(xvs.end(), vs.begin(), vs.end());
    FormulaPtr lhs = da.matrix;
    for (const TypedVar& y : da.challenges) {
      TypedVar yw{fresh("Y"), ty_fun(xvt, y.type)};
      out.witnesses.push_back(yw);
      lhs = subst_formula(lhs, y.name, mk_app(mk_var(yw.name, yw.type), xvs));
    }
    out.challenges = concat(da.witnesses, db.challenges);
    out.matrix = f_implies(lhs, rhs);
    return out;
  }
};

}  // namespace

FormulaPtr negative_translate(const FormulaPtr& f) {
  return f_not(f_not(kuroda_star(f)));
}

DialecticaForm dialectica(const FormulaPtr& f) {
  Barendregt b(f);
  FormulaPtr g = b.run(f);
  DialecticaPass pass(b.used());
  return pass.run(g);
}

DialecticaForm nd_interpret(const FormulaPtr& f) {
  FormulaPtr nt = collapse_qf_negations(negative_translate(f));
  DialecticaForm d = dialectica(nt);
  d.matrix = simplify_qf(d.matrix);
  return d;
}

namespace {

struct PrefixEntry {
  bool universal;
  std::string var;
  TypePtr type;
};

std::pair<std::vector<PrefixEntry>, FormulaPtr> pnf(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::K::Prime: return {{}, f};
    case Formula::K::Not: {
      auto [p, m] = pnf(f->a);
      for (auto& e : p) e.universal = !e.universal;
      return {p, f_not(m)};
    }
    case Formula::K::And:
    case Formula::K::Or: {
      auto [pa, ma] = pnf(f->a);
      auto [pb, mb] = pnf(f->b);
      pa.insert(pa.end(), pb.begin(), pb.end());
      return {pa, f->kind == Formula::K::And ? f_and(ma, mb) : f_or(ma, mb)};
    }
    case Formula::K::Implies: {
      auto [pa, ma] = pnf(f->a);
      auto [pb, mb] = pnf(f->b);
      for (auto& e : pa) e.universal = !e.universal;
      pa.insert(pa.end(), pb.begin(), pb.end());
      return {pa, f_implies(ma, mb)};
    }
    case Formula::K::Forall:
    case Formula::K::Exists: {
      auto [p, m] = pnf(f->body);
      p.insert(p.begin(), {f->kind == Formula::K::Forall, f->var, f->var_type});
      return {p, m};
    }
  }
  return {{}, f};
}

}  // namespace

FormulaPtr prenex(const FormulaPtr& f) {
  Barendregt b(f);
  auto [prefix, matrix] = pnf(b.run(f));
  FormulaPtr out = matrix;
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    out = it->universal ? f_forall(it->var, it->type, out)
                        : f_exists(it->var, it->type, out);
  return out;
}

SkolemizedAxiom skolem_delta(const FormulaPtr& f) {
  Barendregt bare(f);
  FormulaPtr g = bare.run(f);

  std::vector<TypedVar> avars, cvars;
  FormulaPtr cur = g;
  while (cur->kind == Formula::K::Forall) {
    avars.push_back({cur->var, cur->var_type});
    cur = cur->body;
  }
  struct Bounded {
    TypedVar var;
    TermPtr bound;
  };
  std::vector<Bounded> bvars;
  while (cur->kind == Formula::K::Exists) {
    FormulaPtr body = cur->body;
    if (body->kind != Formula::K::And || body->a->kind != Formula::K::Prime ||
        body->a->op != PrimeOp::LeTy || body->a->lhs->kind != Term::K::Var ||
        body->a->lhs->name != cur->var)
      throw NotDeltaShape("existential without the b <= r a bound");
    for (const auto& [n, _] : free_vars(body->a->rhs)) {
      bool among_a = false;
      for (const auto& a : avars) among_a = among_a || a.name == n;
      if (!among_a)
        throw NotDeltaShape("bound term depends on '" + n +
                            "', not a leading universal");
    }
    bvars.push_back({{cur->var, cur->var_type}, body->a->rhs});
    cur = body->b;
  }
  if (bvars.empty()) throw NotDeltaShape("no bounded existential block");
  while (cur->kind == Formula::K::Forall) {
    cvars.push_back({cur->var, cur->var_type});
    cur = cur->body;
  }
  if (!quantifier_free(cur))
    throw NotDeltaShape("matrix is not quantifier-free");

  auto require_admissible = [](const TypePtr& t, const char* role) {
    if (!classify_type(t).admissible)
      throw NotDeltaShape(std::string("inadmissible type for ") + role + ": " +
                          print_type(t));
  };
  for (const auto& a : avars) require_admissible(a.type, "a leading universal");
  for (const auto& b : bvars)
    require_admissible(b.var.type, "a bounded existential");
  for (const auto& c : cvars) require_admissible(c.type, "a trailing universal");

  SkolemizedAxiom out;
  std::vector<TypePtr> atypes;
  std::vector<TermPtr> aterms;
  for (const auto& a : avars) {
    atypes.push_back(a.type);
    aterms.push_back(mk_var(a.name, a.type));
  }
  FormulaPtr core = cur;
  for (const auto& b : bvars) {
    SkolemizedAxiom::SkolemConst sk;
    sk.name = "sk_" + b.var.name;
    sk.type = ty_fun(atypes, b.var.type);
    TermPtr bound = b.bound;
    for (auto it = avars.rbegin(); it != avars.rend(); ++it)
      bound = mk_lam(it->name, it->type, bound);
    sk.bound = bound;
    core = subst_formula(core, b.var.name,
                         mk_app(mk_var(sk.name, sk.type), aterms));
    out.skolem_constants.push_back(std::move(sk));
  }
  for (auto it = cvars.rbegin(); it != cvars.rend(); ++it)
    core = f_forall(it->name, it->type, core);
  for (auto it = avars.rbegin(); it != avars.rend(); ++it)
    core = f_forall(it->name, it->type, core);
  out.universal_core = core;
  return out;
}

bool dialectica_alpha_equal(const DialecticaForm& a, const DialecticaForm& b) {
  if (a.witnesses.size() != b.witnesses.size() ||
      a.challenges.size() != b.challenges.size())
    return false;
  for (size_t i = 0; i < a.witnesses.size(); ++i)
    if (!type_equal(a.witnesses[i].type, b.witnesses[i].type)) return false;
  for (size_t i = 0; i < a.challenges.size(); ++i)
    if (!type_equal(a.challenges[i].type, b.challenges[i].type)) return false;
  auto canon = [](FormulaPtr m, const std::vector<TypedVar>& ws,
                  const std::vector<TypedVar>& cs) {
    for (size_t i = 0; i < ws.size(); ++i)
      m = subst_formula(m, ws[i].name,
                        mk_var("#w" + std::to_string(i), ws[i].type));
    for (size_t i = 0; i < cs.size(); ++i)
      m = subst_formula(m, cs[i].name,
                        mk_var("#c" + std::to_string(i), cs[i].type));
    return m;
  };
  return formula_equal(canon(a.matrix, a.witnesses, a.challenges),
                       canon(b.matrix, b.witnesses, b.challenges));
}

std::string print_dialectica(const DialecticaForm& d) {
  auto tuple = [](const std::vector<TypedVar>& vs) {
    std::string out;
    for (size_t i = 0; i < vs.size(); ++i) {
      if (i) out += "; ";
      out += vs[i].name + ":" + print_type(vs[i].type);
    }
    return out;
  };
  return "E: " + tuple(d.witnesses) + "\nA: " + tuple(d.challenges) +
         "\nM: " + print_formula(d.matrix) + "\n";
}

DialecticaForm parse_dialectica(const std::string& text, const VarCtx& ctx) {
  std::istringstream in(text);
  std::string le, la, lm;
  if (!std::getline(in, le) || !std::getline(in, la) || !std::getline(in, lm))
    throw SyntaxError("dialectica form needs three lines E:/A:/M:");
  auto strip_head = [](std::string s, const std::string& head) {
    if (s.rfind(head, 0) != 0) throw SyntaxError("expected line head " + head);
    return s.substr(head.size());
  };
  auto parse_tuple = [](const std::string& s) {
    std::vector<TypedVar> out;
    std::istringstream ts(s);
    std::string item;
    while (std::getline(ts, item, ';')) {
      auto colon = item.find(':');
      if (colon == std::string::npos) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        throw SyntaxError("tuple entries look like name:type");
      }
      std::string name = item.substr(0, colon);
      name.erase(0, name.find_first_not_of(" \t"));
      name.erase(name.find_last_not_of(" \t") + 1);
      out.push_back({name, parse_type(item.substr(colon + 1))});
    }
    return out;
  };
  DialecticaForm d;
  d.witnesses = parse_tuple(strip_head(le, "E:"));
  d.challenges = parse_tuple(strip_head(la, "A:"));
  VarCtx full = ctx;
  for (const auto& v : d.witnesses) full[v.name] = v.type;
  for (const auto& v : d.challenges) full[v.name] = v.type;
  ParseOpts opts;
  opts.ctx = full;
  d.matrix = parse_formula(strip_head(lm, "M:"), opts);
  return d;
}

namespace {
std::optional<uint64_t> tuple_space(const std::vector<TypedVar>& vs,
                                    const Model& m) {
  uint64_t total = 1;
  for (const auto& v : vs) {
    uint64_t d = m.domain_size(v.type);
    if (d > m.enum_cap) return std::nullopt;
    if (d != 0 && total > m.enum_cap / d) return std::nullopt;
    total *= d;
  }
  return total;
}
}  // namespace

bool dialectica_searchable(const DialecticaForm& d, const Model& m) {
  return tuple_space(d.witnesses, m).has_value() &&
         tuple_space(d.challenges, m).has_value();
}

std::optional<bool> verify_dialectica(const DialecticaForm& d, const Model& m,
                                      const Env& env) {
  auto wspace = tuple_space(d.witnesses, m);
  auto cspace = tuple_space(d.challenges, m);
  if (!wspace || !cspace) return std::nullopt;
  std::vector<Enumeration> wenum, cenum;
  for (const auto& v : d.witnesses) wenum.push_back(*m.enumerate(v.type));
  for (const auto& v : d.challenges) cenum.push_back(*m.enumerate(v.type));

  auto assign = [](const std::vector<TypedVar>& vars,
                   const std::vector<Enumeration>& enums, uint64_t idx, Env& e) {
    for (size_t i = 0; i < vars.size(); ++i) {
      const Enumeration& en = enums[i];
      e[vars[i].name] = en.at(idx % en.size());
      idx /= en.size();
    }
  };

  for (uint64_t wi = 0; wi < *wspace; ++wi) {
    Env e = env;
    assign(d.witnesses, wenum, wi, e);
    bool all = true;
    for (uint64_t ci = 0; ci < *cspace && all; ++ci) {
      assign(d.challenges, cenum, ci, e);
      all = m.eval_formula(d.matrix, e);
    }
    if (all) return true;
  }
  return false;
}

}  // namespace probwb
