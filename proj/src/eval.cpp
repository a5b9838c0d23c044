#include "probwb/eval.hpp"

#include <algorithm>

namespace probwb {

MV mv_nat(Nat n) {
  auto v = std::make_shared<ModelValue>();
  v->kind = ModelValue::K::Nat;
  v->nat = std::move(n);
  return v;
}
MV mv_atom(uint64_t a) {
  auto v = std::make_shared<ModelValue>();
  v->kind = ModelValue::K::Atom;
  v->atom = a;
  return v;
}
MV mv_evt(Event e) {
  auto v = std::make_shared<ModelValue>();
  v->kind = ModelValue::K::Evt;
  v->evt = std::move(e);
  return v;
}
MV mv_fn(std::function<MV(const MV&)> f, std::optional<Rat> exact) {
  auto v = std::make_shared<ModelValue>();
  v->kind = ModelValue::K::Fn;
  v->fn = std::move(f);
  v->real_exact = std::move(exact);
  return v;
}

MV mv_real(const Rat& q) {
  return mv_fn(
      [q](const MV& n) {
        if (n->kind != ModelValue::K::Nat) throw EvalError("stream index must be a natural");
        unsigned idx = n->nat > 1000000 ? 1000000u : n->nat.convert_to<unsigned>();
        return mv_nat(circ(q, idx));
      },
      q);
}

MV mv_realcode(const RealCode& x) {
  return mv_fn(
      [x](const MV& n) {
        unsigned idx = n->nat > 1000000 ? 1000000u : n->nat.convert_to<unsigned>();
        return mv_nat(x.code_at(idx));
      },
      x.exact());
}

MV Enumeration::at(uint64_t i) const {
  MV v = gen_(i);
  const_cast<ModelValue*>(v.get())->self_index = i;
  return v;
}

uint64_t Model::domain_size(const TypePtr& ty) const {
  uint64_t lim = enum_cap + 1;
  switch (ty->kind) {
    case FiniteType::K::Nat: return horizon + 1;
    case FiniteType::K::Omega:
      if (space->backend() == Backend::Cofinite) return horizon + 1;
      return space->atom_count();
    case FiniteType::K::S: {
      if (space->backend() == Backend::Cofinite) return lim;
      try {
        return space->algebra().size();
      } catch (const SpaceError&) {
        return lim;
      }
    }
    case FiniteType::K::Arrow: {
      uint64_t d = domain_size(ty->arg), c = domain_size(ty->result);
      if (d >= lim || c >= lim) return lim;
      // c^d, saturating
      uint64_t total = 1;
      for (uint64_t k = 0; k < d; ++k) {
        if (total > lim / std::max<uint64_t>(c, 1)) return lim;
        total *= c;
      }
      return total;
    }
  }
  return lim;
}

std::optional<Enumeration> Model::enumerate(const TypePtr& ty) const {
  uint64_t n = domain_size(ty);
  if (n > enum_cap) return std::nullopt;
  switch (ty->kind) {
    case FiniteType::K::Nat:
      return Enumeration(n, [](uint64_t i) { return mv_nat(Nat(i)); });
    case FiniteType::K::Omega:
      return Enumeration(n, [](uint64_t i) { return mv_atom(i); });
    case FiniteType::K::S: {
      const auto& alg = space->algebra();
      return Enumeration(n, [&alg](uint64_t i) { return mv_evt(alg[i]); });
    }
    case FiniteType::K::Arrow: {
      auto dom = enumerate(ty->arg);
      auto cod = enumerate(ty->result);
      if (!dom || !cod) return std::nullopt;
      uint64_t c = cod->size();
      Model self = *this;
      TypePtr argty = ty->arg;
      return Enumeration(n, [self, dom = *dom, cod = *cod, c, argty](uint64_t i) {
        return mv_fn([self, dom, cod, c, argty, i](const MV& arg) {
          uint64_t ai = self.index_of(argty, arg);
          uint64_t digit = i;
          for (uint64_t k = 0; k < ai; ++k) digit /= c;
          return cod.at(digit % c);
        });
      });
    }
  }
  return std::nullopt;
}

uint64_t Model::index_of(const TypePtr& ty, const MV& v) const {
  if (v->self_index) return *v->self_index;
  switch (ty->kind) {
    case FiniteType::K::Nat: {
      if (v->nat > horizon) return horizon;
      return v->nat.convert_to<uint64_t>();
    }
    case FiniteType::K::Omega: return v->atom;
    case FiniteType::K::S: {
      const auto& alg = space->algebra();
      for (size_t i = 0; i < alg.size(); ++i)
        if (alg[i] == v->evt) return i;
      throw EvalError("event not in the algebra");
    }
    case FiniteType::K::Arrow:
      throw EvalError("cannot index a function value without a self index");
  }
  throw EvalError("unindexable value");
}

Rat Model::content_of(const MV& v) const { return space->content(v->evt); }

namespace {

Rat decoded_value(const Model& m, const MV& real) {
  if (real->kind != ModelValue::K::Fn)
    throw EvalError("expected a type-1 value");
  if (!real->real_exact)
    throw EvalError("type-1 value has no exact rational backing");
  return *real->real_exact;
}

uint64_t to_u64(const Nat& n, uint64_t cap, const char* what) {
  if (n < 0) throw EvalError(std::string("negative ") + what);
  if (n > cap) throw EvalError(std::string(what) + " exceeds cap");
  return n.convert_to<uint64_t>();
}

}  // namespace

MV Model::eval(const TermPtr& t, const Env& env) const {
  switch (t->kind) {
    case Term::K::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) throw EvalError("unbound variable '" + t->name + "'");
      return it->second;
    }
    case Term::K::NumLit: return mv_nat(t->num);
    case Term::K::App: {
      MV f = eval(t->fun, env);
      if (f->kind != ModelValue::K::Fn) throw EvalError("applying a non-function");
      return f->fn(eval(t->arg, env));
    }
    case Term::K::Lam: {
      Model self = *this;
      Env captured = env;
      std::string binder = t->binder;
      TermPtr body = t->body;
      return mv_fn([self, captured, binder, body](const MV& a) {
        Env e = captured;
        e[binder] = a;
        return self.eval(body, e);
      });
    }
    case Term::K::Const: break;
  }

  const std::string& c = t->name;
  const ContentSpace& sp = *space;
  Model self = *this;

  if (c == "eq")
    return mv_fn([](const MV& x) {
      return mv_fn([x](const MV& y) {
        return mv_nat(x->atom == y->atom ? 0 : 1);
      });
    });
  if (c == "In")
    return mv_fn([&sp](const MV& x) {
      return mv_fn([&sp, x](const MV& a) {
        return mv_nat(sp.evt_contains(a->evt, x->atom) ? 0 : 1);
      });
    });
  if (c == "cup")
    return mv_fn([&sp](const MV& a) {
      return mv_fn([&sp, a](const MV& b) {
        return mv_evt(sp.evt_union(a->evt, b->evt));
      });
    });
  if (c == "compl")
    return mv_fn([&sp](const MV& a) { return mv_evt(sp.evt_complement(a->evt)); });
  if (c == "empty") return mv_evt(sp.empty_event());
  if (c == "comega") return mv_atom(sp.designated_atom());
  if (c == "P")
    return mv_fn([&sp](const MV& a) { return mv_real(sp.content(a->evt)); });
  if (c == "bigU")
    return mv_fn([self, &sp](const MV& seq) {
      // bounded-model reading of the countable union: scan to a window past
      // the horizon and insist the partial unions have stabilized
      uint64_t scan = std::max<uint64_t>(self.horizon, 63);
      Event u = sp.empty_event();
      for (uint64_t i = 0; i <= scan; ++i)
        u = sp.evt_union(u, seq->fn(mv_nat(Nat(i)))->evt);
      for (uint64_t i = scan + 1; i <= 2 * scan + 1; ++i)
        if (!sp.evt_subset(seq->fn(mv_nat(Nat(i)))->evt, u))
          throw NotStabilized("countable union still grows past the scan window");
      return mv_evt(u);
    });
  if (c == "interval")
    return mv_fn([self](const MV& a) {
      return mv_fn([self, a](const MV& b) {
        return mv_fn([self, a, b](const MV& r) {
          Rat qa = decoded_value(self, a), qb = decoded_value(self, b),
              qr = decoded_value(self, r);
          return mv_nat(qa <= qr && qr <= qb ? 0 : 1);
        });
      });
    });
  if (c == "inv")
    return mv_fn([](const MV& f) {
      return mv_fn([f](const MV& a) {
        return mv_fn([f, a](const MV& x) { return a->fn(f->fn(x)); });
      });
    });
  if (c == "I")
    return mv_fn([self, &sp](const MV& f) {
      if (sp.backend() == Backend::Cofinite)
        throw EvalError("I is modeled on explicit spaces only");
      // constant on the algebra blocks = weakly Borel-measurable here
      for (const Event& blk : sp.algebra_blocks()) {
        std::optional<Rat> v;
        for (size_t i = 0; i < sp.atom_count(); ++i) {
          if (!sp.evt_contains(blk, i)) continue;
          Rat fi = decoded_value(self, f->fn(mv_atom(i)));
          if (!v)
            v = fi;
          else if (*v != fi)
            return mv_nat(1);
        }
      }
      return mv_nat(0);
    });
  if (c == "supnorm")
    return mv_fn([self, &sp](const MV& f) {
      Rat m(0);
      for (size_t i = 0; i < sp.atom_count(); ++i)
        m = std::max(m, rat_abs(decoded_value(self, f->fn(mv_atom(i)))));
      return mv_real(m);
    });
  if (c == "integ")
    return mv_fn([self, &sp](const MV& f) {
      std::vector<Rat> vals;
      for (size_t i = 0; i < sp.atom_count(); ++i)
        vals.push_back(decoded_value(self, f->fn(mv_atom(i))));
      MeasurableFn mf = MeasurableFn::on_atoms(vals);
      try {
        return mv_real(integral(sp, mf));
      } catch (const NotMeasurable&) {
        return mv_real(Rat(0));  // the model integrates only members of I
      }
    });
  if (c == "X") {
    if (!rv) throw EvalError("no random-variable sequence attached to the model");
    const ModelRV* r = rv;
    return mv_fn([r, &sp](const MV& n) {
      MeasurableFn f = r->at(to_u64(n->nat, 1u << 26, "sequence index"));
      return mv_fn([f, &sp](const MV& x) {
        return mv_real(f.value_at(sp, x->atom));
      });
    });
  }
  if (c == "Pset") {
    if (!rv) throw EvalError("no random-variable sequence attached to the model");
    const ModelRV* r = rv;
    return mv_fn([r, &sp](const MV& a) {
      return mv_fn([r, &sp, a](const MV& i) {
        return mv_fn([r, &sp, a, i](const MV& j) {
          MeasurableFn fi = r->at(to_u64(i->nat, 1u << 26, "index"));
          MeasurableFn fj = r->at(to_u64(j->nat, 1u << 26, "index"));
          Rat tol = rat_pow2(-static_cast<int>(to_u64(a->nat, 1u << 20, "precision")));
          uint64_t bits = 0;
          for (size_t x = 0; x < sp.atom_count(); ++x)
            if (rat_abs(fi.value_at(sp, x) - fj.value_at(sp, x)) <= tol)
              bits |= uint64_t(1) << x;
          return mv_evt(Event{Backend::ExplicitFinite, bits, false, {}});
        });
      });
    });
  }
  if (c == "Qset") throw EvalError("Qset has no fixed model interpretation");
  if (c == "tauseq") {
    if (!rv) throw EvalError("no random-variable sequence attached to the model");
    const ModelRV* r = rv;
    return mv_fn([r](const MV& n) {
      return mv_real(r->tau(to_u64(n->nat, 1u << 26, "sequence index")));
    });
  }
  if (c == "taubar") {
    if (!rv) throw EvalError("no random-variable sequence attached to the model");
    const ModelRV* r = rv;
    return mv_fn([r](const MV& n) {
      Rat t0 = circ_value(r->tau(to_u64(n->nat, 1u << 26, "sequence index")), 0);
      return mv_nat(rat_ceil(t0) + 1);
    });
  }
  if (c == "succ") return mv_fn([](const MV& n) { return mv_nat(n->nat + 1); });
  if (c == "add")
    return mv_fn([](const MV& a) {
      return mv_fn([a](const MV& b) { return mv_nat(a->nat + b->nat); });
    });
  if (c == "tminus")
    return mv_fn([](const MV& a) {
      return mv_fn([a](const MV& b) {
        return mv_nat(a->nat > b->nat ? a->nat - b->nat : Nat(0));
      });
    });
  if (c == "mul")
    return mv_fn([](const MV& a) {
      return mv_fn([a](const MV& b) { return mv_nat(a->nat * b->nat); });
    });
  if (c == "max0")
    return mv_fn([](const MV& a) {
      return mv_fn([a](const MV& b) { return mv_nat(std::max(a->nat, b->nat)); });
    });
  if (c == "min0")
    return mv_fn([](const MV& a) {
      return mv_fn([a](const MV& b) { return mv_nat(std::min(a->nat, b->nat)); });
    });
  if (c == "pairj")
    return mv_fn([](const MV& a) {
      return mv_fn([a](const MV& b) { return mv_nat(pair_j(a->nat, b->nat)); });
    });
  if (c == "circ")
    return mv_fn([](const MV& n) { return mv_real(Rat(n->nat)); });
  if (c == "Kcomb")
    return mv_fn([](const MV& x) {
      return mv_fn([x](const MV&) { return x; });
    });
  if (c == "Scomb")
    return mv_fn([](const MV& x) {
      return mv_fn([x](const MV& y) {
        return mv_fn([x, y](const MV& z) { return x->fn(z)->fn(y->fn(z)); });
      });
    });
  if (c == "Id") return mv_fn([](const MV& x) { return x; });
  if (c == "R") {
    uint64_t cap = rec_cap;
    return mv_fn([cap](const MV& n) {
      return mv_fn([cap, n](const MV& y) {
        return mv_fn([cap, n, y](const MV& z) {
          uint64_t steps = to_u64(n->nat, cap, "recursor depth");
          MV cur = y;
          for (uint64_t i = 0; i < steps; ++i)
            cur = z->fn(cur)->fn(mv_nat(Nat(i)));
          return cur;
        });
      });
    });
  }
  throw EvalError("constant '" + c + "' has no model interpretation");
}

Rat Model::eval_real(const TermPtr& t, const Env& env) const {
  return decoded_value(*this, eval(t, env));
}

bool Model::le_type(const MV& a, const MV& b, const TypePtr& ty) const {
  switch (ty->kind) {
    case FiniteType::K::Nat: return a->nat <= b->nat;
    case FiniteType::K::Omega: return true;  // P(Omega) <= P(Omega)
    case FiniteType::K::S: return content_of(a) <= content_of(b);
    case FiniteType::K::Arrow: {
      auto dom = enumerate(ty->arg);
      if (!dom)
        throw DomainTooLarge("argument domain too large for pointwise <=");
      for (uint64_t i = 0; i < dom->size(); ++i) {
        MV z = dom->at(i);
        if (!le_type(a->fn(z), b->fn(z), ty->result)) return false;
      }
      return true;
    }
  }
  return false;
}

bool Model::eval_formula(const FormulaPtr& f, const Env& env) const {
  switch (f->kind) {
    case Formula::K::Prime: {
      MV l = eval(f->lhs, env), r = eval(f->rhs, env);
      switch (f->op) {
        case PrimeOp::Eq0: return l->nat == r->nat;
        case PrimeOp::Le0: return l->nat <= r->nat;
        case PrimeOp::EqR:
          return decoded_value(*this, l) == decoded_value(*this, r);
        case PrimeOp::LeR:
          return decoded_value(*this, l) <= decoded_value(*this, r);
        case PrimeOp::LtR:
          return decoded_value(*this, l) < decoded_value(*this, r);
        case PrimeOp::LeTy: return le_type(l, r, f->cmp_type);
      }
      return false;
    }
    case Formula::K::Not: return !eval_formula(f->a, env);
    case Formula::K::And: return eval_formula(f->a, env) && eval_formula(f->b, env);
    case Formula::K::Or: return eval_formula(f->a, env) || eval_formula(f->b, env);
    case Formula::K::Implies:
      return !eval_formula(f->a, env) || eval_formula(f->b, env);
    case Formula::K::Forall:
    case Formula::K::Exists: {
      auto dom = enumerate(f->var_type);
      if (!dom)
        throw DomainTooLarge("quantifier domain too large at type " +
                             print_type(f->var_type));
      bool universal = f->kind == Formula::K::Forall;
      Env e = env;
      for (uint64_t i = 0; i < dom->size(); ++i) {
        e[f->var] = dom->at(i);
        bool v = eval_formula(f->body, e);
        if (universal && !v) return false;
        if (!universal && v) return true;
      }
      return universal;
    }
  }
  return false;
}

}  // namespace probwb
