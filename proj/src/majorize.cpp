#include "probwb/majorize.hpp"

#include "probwb/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <atomic>

namespace probwb {

TypePtr project_type(const TypePtr& t) {
  switch (t->kind) {
    case FiniteType::K::Nat:
    case FiniteType::K::Omega:
    case FiniteType::K::S: return ty_nat();
    case FiniteType::K::Arrow:
      return ty_arrow(project_type(t->result), project_type(t->arg));
  }
  return ty_nat();
}

namespace {

// lambda over the projected argument slots returning the numeral 1
TermPtr ones_majorant(const TypePtr& subject_type) {
  TypePtr proj = project_type(subject_type);
  std::vector<TypePtr> args = arg_types(proj);
  TermPtr body = mk_num(1);
  for (size_t i = args.size(); i-- > 0;)
    body = mk_lam("x" + std::to_string(i), args[i], body);
  return body;
}

// pointwise max at a projected (hence 0-based) type
TermPtr max_at(const TypePtr& ty, const TermPtr& a, const TermPtr& b,
               unsigned depth = 0) {
  if (ty->kind == FiniteType::K::Nat)
    return mk_app(mk_app(mk_const("max0"), a), b);
  std::string v = "m" + std::to_string(depth);
  TermPtr var = mk_var(v, ty->arg);
  return mk_lam(v, ty->arg,
                max_at(ty->result, mk_app(a, var), mk_app(b, var), depth + 1));
}

// majorant of the recursor: iterate z but never drop below earlier stages
TermPtr recursor_majorant(const TypePtr& rho_hat) {
  TypePtr step = ty_fun({rho_hat, ty_nat()}, rho_hat);
  TermPtr n = mk_var("n", ty_nat());
  TermPtr y = mk_var("y", rho_hat);
  TermPtr z = mk_var("z", step);
  TermPtr w = mk_var("w", rho_hat);
  TermPtr i = mk_var("i", ty_nat());
  TermPtr mono_step = mk_lam(
      "w", rho_hat,
      mk_lam("i", ty_nat(), max_at(rho_hat, w, mk_app(mk_app(z, w), i))));
  TermPtr body = mk_app(mk_app(mk_app(mk_rec(rho_hat), n), y), mono_step);
  return mk_lam("n", ty_nat(), mk_lam("y", rho_hat, mk_lam("z", step, body)));
}

TermPtr synth_const(const TermPtr& t) {
  const std::string& c = t->name;
  if (c == "eq" || c == "In" || c == "cup" || c == "compl" || c == "bigU" ||
      c == "interval" || c == "inv" || c == "I" || c == "Pset" || c == "Qset")
    return ones_majorant(t->type);
  if (c == "empty") return mk_num(0);
  if (c == "comega") return mk_num(1);
  if (c == "P")
    return mk_lam("x", ty_nat(), mk_app(mk_const("circ"), mk_var("x", ty_nat())));
  if (c == "supnorm" || c == "integ") {
    TypePtr fproj = project_type(ty_arrow(ty_pure(1), ty_omega()));  // 1(Omega)^
    TermPtr f = mk_var("f", fproj);
    TermPtr f10 = mk_app(mk_app(f, mk_num(1)), mk_num(0));
    TermPtr body = mk_app(mk_const("circ"),
                          mk_app(mk_app(mk_const("add"), f10), mk_num(1)));
    return mk_lam("f", fproj, body);
  }
  if (c == "X")
    return mk_lam("n", ty_nat(),
                  mk_lam("zz", ty_nat(),
                         mk_app(mk_const("circ"),
                                mk_app(mk_const("taubar"), mk_var("n", ty_nat())))));
  if (c == "tauseq")
    return mk_lam("n", ty_nat(),
                  mk_app(mk_const("circ"),
                         mk_app(mk_const("taubar"), mk_var("n", ty_nat()))));
  if (c == "taubar" || c == "succ" || c == "add" || c == "mul" ||
      c == "max0" || c == "min0" || c == "pairj" || c == "circ")
    return mk_const(c);
  if (c == "tminus")
    return mk_lam("x", ty_nat(),
                  mk_lam("y", ty_nat(), mk_var("x", ty_nat())));
  if (c == "Kcomb") {
    auto args = arg_types(t->type);
    return mk_kcomb(project_type(args[0]), project_type(args[1]));
  }
  if (c == "Scomb") {
    auto args = arg_types(t->type);
    TypePtr xi = project_type(args[2]);
    TypePtr tau = project_type(result_type(args[1]));
    TypePtr rho = project_type(result_type(t->type));
    return mk_scomb(rho, tau, xi);
  }
  if (c == "Id") return mk_id(project_type(result_type(t->type)));
  if (c == "R") {
    auto args = arg_types(t->type);
    return recursor_majorant(project_type(args[1]));
  }
  throw UnknownConstant("no majorant rule for constant '" + c + "'");
}

TermPtr synth_rec(const TermPtr& t) {
  switch (t->kind) {
    case Term::K::NumLit: return t;
    case Term::K::Const: return synth_const(t);
    case Term::K::App: return mk_app(synth_rec(t->fun), synth_rec(t->arg));
    case Term::K::Var:
      throw TypeError("majorant synthesis needs a closed term; '" + t->name +
                      "' is free");
    case Term::K::Lam:
      throw TypeError("lambdas should have been eliminated first");
  }
  throw TypeError("unreachable");
}

}  // namespace

TermPtr synth_majorant(const TermPtr& t) {
  return synth_rec(eliminate_lambdas(t));
}

bool le_type(const Model& m, const MV& a, const MV& b, const TypePtr& ty) {
  return m.le_type(a, b, ty);
}

namespace {

Nat base_ceiling(const Model& m, const MV& v, const TypePtr& ty) {
  switch (ty->kind) {
    case FiniteType::K::Nat: return v->nat;
    case FiniteType::K::Omega: return rat_ceil(m.space->content(m.space->full_event()));
    case FiniteType::K::S: return rat_ceil(m.space->content(v->evt));
    default: throw TypeMismatch("base_ceiling on an arrow type");
  }
}

bool base_majorizes(const Model& m, const MV& upper, const MV& lower,
                    const TypePtr& ty) {
  switch (ty->kind) {
    case FiniteType::K::Nat: return upper->nat >= lower->nat;
    case FiniteType::K::Omega:
      return Rat(upper->nat) >= m.space->content(m.space->full_event());
    case FiniteType::K::S: return Rat(upper->nat) >= m.space->content(lower->evt);
    default: throw TypeMismatch("base_majorizes on an arrow type");
  }
}

// random base value of a type, drawn from the model's enumeration
MV random_base(const Model& m, const TypePtr& ty, SplitMix& rng) {
  auto en = m.enumerate(ty);
  if (!en || en->size() == 0) throw DomainTooLarge("base domain not enumerable");
  return en->at(rng.below(en->size()));
}

// a table over the flattened (enumerable) arguments of ty, filled with
// random base values; returned as nested closures
MV random_flat_table(const Model& m, const TypePtr& ty, SplitMix& rng,
                     Nat* max_ceiling) {
  if (ty->kind != FiniteType::K::Arrow) {
    MV v = random_base(m, ty, rng);
    Nat c = base_ceiling(m, v, ty);
    if (c > *max_ceiling) *max_ceiling = c;
    return v;
  }
  auto dom = m.enumerate(ty->arg);
  if (!dom) throw DomainTooLarge("argument domain not enumerable");
  auto entries = std::make_shared<std::vector<MV>>();
  for (uint64_t i = 0; i < dom->size(); ++i)
    entries->push_back(random_flat_table(m, ty->result, rng, max_ceiling));
  Model self = m;
  TypePtr argty = ty->arg;
  return mv_fn([self, entries, argty](const MV& a) {
    return (*entries)[self.index_of(argty, a)];
  });
}

// constant function at the projected type, returning the given natural
MV const_proj(const TypePtr& proj, const Nat& n) {
  if (proj->kind != FiniteType::K::Arrow) return mv_nat(n);
  TypePtr res = proj->result;
  return mv_fn([res, n](const MV&) { return const_proj(res, n); });
}

}  // namespace

std::vector<MajPair> majorization_pairs(const Model& m, const TypePtr& ty,
                                        const CheckOpts& opts, bool* exhaustive) {
  std::vector<MajPair> out;
  if (ty->kind != FiniteType::K::Arrow) {
    auto en = m.enumerate(ty);
    if (!en) throw DomainTooLarge("base domain not enumerable");
    Rat full = ty->kind == FiniteType::K::Nat
                   ? Rat(0)
                   : m.space->content(m.space->full_event());
    for (uint64_t n = 0; n <= m.horizon; ++n) {
      for (uint64_t i = 0; i < en->size(); ++i) {
        MV lo = en->at(i);
        bool rel = ty->kind == FiniteType::K::Nat ? Nat(n) >= lo->nat
                   : ty->kind == FiniteType::K::Omega
                       ? Rat(n) >= full
                       : Rat(n) >= m.space->content(lo->evt);
        if (rel) out.push_back({mv_nat(Nat(n)), lo});
      }
    }
    if (exhaustive) *exhaustive = true;
    return out;
  }

  // arrow argument: exhaustive lower tables when the whole domain is small,
  // seeded random tables otherwise; uppers are dominating constants (always
  // hereditarily monotone) with a small slack spread
  if (exhaustive) *exhaustive = false;
  TypePtr proj = project_type(ty);
  uint64_t full_count = m.domain_size(ty);
  SplitMix rng(splitmix64(opts.seed ^ 0x6d61ef));
  uint64_t lowers = std::min<uint64_t>(opts.pair_budget / 2, 64);
  bool exh = full_count <= lowers;
  if (exhaustive) *exhaustive = exh;
  uint64_t count = exh ? full_count : lowers;
  auto lower_at = [&](uint64_t i) -> std::pair<MV, Nat> {
    Nat ceiling(0);
    if (exh) {
      auto en = m.enumerate(ty);
      MV v = en->at(i);
      // ceiling for an enumerated table: scan its flattened outputs
      // (enumerations are over small domains here)
      std::function<void(const MV&, const TypePtr&)> scan =
          [&](const MV& f, const TypePtr& t) {
            if (t->kind != FiniteType::K::Arrow) {
              Nat c = base_ceiling(m, f, t);
              if (c > ceiling) ceiling = c;
              return;
            }
            auto dom = m.enumerate(t->arg);
            for (uint64_t k = 0; k < dom->size(); ++k)
              scan(f->fn(dom->at(k)), t->result);
          };
      scan(v, ty);
      return {v, ceiling};
    }
    SplitMix local(splitmix64(opts.seed * 0x9e37 + i));
    MV v = random_flat_table(m, ty, local, &ceiling);
    return {v, ceiling};
  };
  for (uint64_t i = 0; i < count; ++i) {
    auto [lo, ceiling] = lower_at(i);
    uint64_t slack = rng.below(2);
    out.push_back({const_proj(proj, ceiling + slack), lo});
  }
  return out;
}

namespace {

struct FlatCheck {
  std::vector<std::vector<MajPair>> mixed;   // per argument slot
  std::vector<std::vector<MajPair>> tside;   // per slot, at projected types
  TypePtr base;
  bool exhaustive = true;
};

bool run_tuple_sweep(const Model& m, const MV& cand, const MV& subj,
                     const std::vector<std::vector<MajPair>>& slots,
                     const TypePtr& base, bool tside, const CheckOpts& opts,
                     uint64_t* checked) {
  uint64_t total = 1;
  bool overflow = false;
  for (const auto& s : slots) {
    if (s.empty()) return true;
    if (total > opts.combo_budget / s.size()) {
      overflow = true;
      break;
    }
    total *= s.size();
  }
  uint64_t sweeps = overflow ? opts.combo_budget : total;

  std::atomic<bool> ok{true};
  std::atomic<uint64_t> done{0};
  auto body = [&](uint64_t t) {
    if (!ok.load(std::memory_order_relaxed)) return;
    uint64_t idx = overflow ? splitmix64(opts.seed * 0x51ab + t) : t;
    // tside compares the candidate against itself at the projected types;
    // the mixed side compares candidate-on-uppers against subject-on-lowers
    MV a = cand, b = tside ? cand : subj;
    uint64_t rest = idx;
    for (const auto& s : slots) {
      const MajPair& p = s[rest % s.size()];
      rest /= s.size();
      a = a->fn(p.upper);
      b = b->fn(p.lower);
    }
    bool holds = tside ? a->nat >= b->nat : base_majorizes(m, a, b, base);
    if (!holds) ok.store(false);
    done.fetch_add(1, std::memory_order_relaxed);
  };

#ifdef _OPENMP
  if (opts.parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (int64_t t = 0; t < static_cast<int64_t>(sweeps); ++t)
      body(static_cast<uint64_t>(t));
  } else
#endif
  {
    for (uint64_t t = 0; t < sweeps && ok.load(); ++t) body(t);
  }
  if (checked) *checked += done.load();
  return ok.load();
}

}  // namespace

bool model_majorizes(const Model& m, const MV& candidate, const MV& value,
                     const TypePtr& ty, const CheckOpts& opts,
                     CheckReport* report) {
  if (ty->kind != FiniteType::K::Arrow) {
    if (report) report->tuples_checked += 1;
    return base_majorizes(m, candidate, value, ty);
  }
  std::vector<TypePtr> args = arg_types(ty);
  TypePtr base = result_type(ty);
  std::vector<std::vector<MajPair>> mixed, tside;
  bool exhaustive = true;
  for (const TypePtr& a : args) {
    bool exh = true;
    mixed.push_back(majorization_pairs(m, a, opts, &exh));
    exhaustive = exhaustive && exh;
    bool exh2 = true;
    tside.push_back(majorization_pairs(m, project_type(a), opts, &exh2));
    exhaustive = exhaustive && exh2;
  }
  if (!exhaustive && !opts.allow_sampling)
    throw DomainTooLarge("argument enumeration exceeds the cap");
  uint64_t checked = 0;
  bool a_ok = run_tuple_sweep(m, candidate, value, mixed, base, false, opts, &checked);
  bool b_ok = run_tuple_sweep(m, candidate, value, tside, base, true, opts, &checked);
  if (report) {
    report->exhaustive = report->exhaustive && exhaustive;
    report->tuples_checked += checked;
    if (!exhaustive) report->note = "sampled argument tuples (seeded)";
  }
  return a_ok && b_ok;
}

bool check_majorizes(const TermPtr& candidate, const TermPtr& subject,
                     const ContentSpace& space, uint32_t horizon,
                     const CheckOpts& opts, CheckReport* report,
                     const ModelRV* rv) {
  if (!type_equal(candidate->type, project_type(subject->type)))
    throw TypeMismatch("candidate type " + print_type(candidate->type) +
                       " is not the projection of " +
                       print_type(subject->type));
  Model m;
  m.space = &space;
  m.horizon = horizon;
  m.rv = rv;
  MV c = m.eval(candidate);
  MV s = m.eval(subject);
  return model_majorizes(m, c, s, subject->type, opts, report);
}

}  // namespace probwb
