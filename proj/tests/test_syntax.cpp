#include "probwb/syntax.hpp"

#include "probwb/eval.hpp"
#include "probwb/parse.hpp"
#include "probwb/rng.hpp"
#include "testutil.hpp"
#include "doctest.h"

using namespace probwb;
using namespace probwb::testgen;

TEST_CASE("type parsing and printing") {
  CHECK(parse_type("0")->kind == FiniteType::K::Nat);
  TypePtr one = parse_type("1");
  REQUIRE(one->kind == FiniteType::K::Arrow);
  CHECK(one->result->kind == FiniteType::K::Nat);
  CHECK(one->arg->kind == FiniteType::K::Nat);

  TypePtr t = parse_type("0(Omega)(Omega)");
  REQUIRE(t->kind == FiniteType::K::Arrow);
  CHECK(t->arg->kind == FiniteType::K::Omega);
  CHECK(type_equal(t->result, ty_arrow(ty_nat(), ty_omega())));
  CHECK(type_equal(parse_type("0(Ω)(Ω)"), t));

  CHECK(type_equal(parse_type(print_type(t)), t));
  CHECK(print_type(ty_pure(3)) == "3");
  CHECK_THROWS_AS(parse_type("Q"), SyntaxError);

  // deeper round-trips over random types
  SplitMix rng(5);
  std::function<TypePtr(int)> gen = [&](int depth) -> TypePtr {
    if (depth == 0 || rng.below(3) == 0) {
      switch (rng.below(3)) {
        case 0: return ty_nat();
        case 1: return ty_omega();
        default: return ty_s();
      }
    }
    return ty_arrow(gen(depth - 1), gen(depth - 1));
  };
  for (int i = 0; i < 200; ++i) {
    TypePtr ty = gen(4);
    CHECK(type_equal(parse_type(print_type(ty)), ty));
  }
}

TEST_CASE("type classification") {
  auto c1 = classify_type(parse_type("S(0)"));
  CHECK(c1.small);
  CHECK(c1.admissible);
  CHECK_FALSE(c1.degree.has_value());

  auto c2 = classify_type(parse_type("1(Omega)"));
  CHECK_FALSE(c2.small);
  CHECK(c2.admissible);

  auto c3 = classify_type(ty_omega());
  CHECK(c3.small);
  CHECK(c3.admissible);

  CHECK(classify_type(ty_pure(2)).degree == 2);
  CHECK(classify_type(ty_nat()).degree == 0);
  CHECK(classify_type(parse_type("0(1)(0)")).degree == 2);

  // small types that are not pure still have no degree
  CHECK_FALSE(classify_type(parse_type("S(0)(0)")).degree.has_value());
  // an argument that itself takes arguments breaks admissibility
  CHECK_FALSE(classify_type(parse_type("0(0(S))")).admissible);
}

TEST_CASE("term parsing, typing, printing") {
  CHECK(parse_term("empty")->type->kind == FiniteType::K::S);
  VarCtx ctx{{"A", ty_s()}, {"B", ty_s()}};
  TermPtr t = parse_term("cup A B", ctx);
  CHECK(t->kind == Term::K::App);
  CHECK(t->type->kind == FiniteType::K::S);
  CHECK(parse_term("P empty")->type->kind == FiniteType::K::Arrow);
  CHECK(type_equal(parse_term("P empty")->type, ty_pure(1)));
  CHECK(type_equal(parse_term("∪ A B", ctx)->type, ty_s()));
  CHECK(type_equal(parse_term("ℙ ∅")->type, ty_pure(1)));

  CHECK_THROWS_AS(parse_term("nosuch"), SyntaxError);
  CHECK_THROWS_AS(parse_term("cup 0 1"), TypeError);
  CHECK_THROWS_AS(parse_term("In empty empty"), TypeError);

  // ascriptions introduce variables; conflicts are rejected
  TermPtr v = parse_term("cup x^S x");
  CHECK(type_equal(v->type, ty_s()));
  CHECK_THROWS_AS(parse_term("cup x^S (compl x^0)"), SyntaxError);

  // cap and Omega sugar expand to the core operations
  TermPtr capped = parse_term("cap A B", ctx);
  CHECK(capped->kind == Term::K::App);
  CHECK(print_term(capped) == "compl (cup (compl A) (compl B))");
  CHECK(print_term(parse_term("Omega")) == "compl empty");

  typecheck(capped);
  typecheck(parse_term("\\x^S. cup x empty"));

  TermPtr a = mk_var("A", ty_s());
  TermPtr body = mk_app(mk_app(mk_const("cup"), a), mk_app(mk_const("compl"), a));
  TermPtr lam = mk_lam("A", ty_s(), body);
  TermPtr whole = mk_app(lam, mk_const("empty"));
  CHECK(term_equal(parse_term(print_term(whole)), whole));
  CHECK(term_alpha_equal(lam, mk_lam("B", ty_s(),
      mk_app(mk_app(mk_const("cup"), mk_var("B", ty_s())),
             mk_app(mk_const("compl"), mk_var("B", ty_s()))))));

  // instance constants round-trip with their parameters
  TermPtr k = mk_kcomb(ty_s(), ty_omega());
  CHECK(term_equal(parse_term(print_term(k)), k));
  TermPtr r = mk_rec(ty_s());
  CHECK(term_equal(parse_term(print_term(r)), r));
}

TEST_CASE("formula parsing and sugar") {
  FormulaPtr f = parse_formula("forall x^Omega (x NotIn empty)");
  REQUIRE(f->kind == Formula::K::Forall);
  CHECK(f->var_type->kind == FiniteType::K::Omega);
  CHECK(f->body->kind == Formula::K::Not);
  CHECK(formula_equal(parse_formula("∀x^Ω (x ∉ ∅)"), f));

  ParseOpts opts;
  opts.ctx = {{"A", ty_s()}, {"B", ty_s()}};
  FormulaPtr eqs = parse_formula("A =S B", opts);
  REQUIRE(eqs->kind == Formula::K::Forall);
  CHECK(eqs->body->kind == Formula::K::And);
  CHECK(formula_equal(
      eqs, parse_formula("forall u^Omega ((u In A -> u In B) and (u In B -> u In A))",
                         opts)));

  FormulaPtr sub = parse_formula("A subS B", opts);
  REQUIRE(sub->kind == Formula::K::Forall);
  CHECK(sub->body->kind == Formula::K::Implies);

  FormulaPtr triv = parse_formula("0 =0 0");
  CHECK(triv->kind == Formula::K::Prime);
  CHECK(quantifier_free(triv));

  // sugar tags are kept only under the flag, and never affect equality
  ParseOpts keep = opts;
  keep.keep_sugar = true;
  FormulaPtr tagged = parse_formula("A =S B", keep);
  CHECK(tagged->sugar == "=S");
  CHECK(parse_formula("A =S B", opts)->sugar.empty());
  CHECK(formula_equal(tagged, eqs));

  // bounded existential
  FormulaPtr bd = parse_formula("exists x^Omega <= comega (0 =0 0)");
  REQUIRE(bd->kind == Formula::K::Exists);
  REQUIRE(bd->body->kind == Formula::K::And);
  CHECK(bd->body->a->op == PrimeOp::LeTy);

  // round-trip through the printer
  for (const char* txt :
       {"forall x^Omega (x In A -> x In (cup A B))",
        "exists n^0 (n =0 2)",
        "((0 =0 0 and 1 <=0 2) -> (exists m^0 (m =0 0) or 0 =0 1))",
        "forall F^[0(0)] (F 0 <=0 F 1)",
        "not (P empty <R P (compl empty))"}) {
    FormulaPtr g = parse_formula(txt, opts);
    CHECK(formula_equal(parse_formula(print_formula(g), opts), g));
  }
}

TEST_CASE("substitution avoids capture") {
  ParseOpts opts;
  opts.ctx = {{"y", ty_nat()}};
  FormulaPtr f = parse_formula("forall x^0 (x <=0 y)", opts);
  FormulaPtr g = subst_formula(f, "y", mk_var("x", ty_nat()));
  REQUIRE(g->kind == Formula::K::Forall);
  CHECK(g->var != "x");  // renamed
  ContentSpace sp = ContentSpace::powerset({"a"}, {Rat(1)});
  Model m{&sp, 3};
  // the bound variable ranges over 0..3, so the bound 4 dominates and 0 does not
  CHECK(m.eval_formula(g, {{"x", mv_nat(Nat(4))}}));
  CHECK_FALSE(m.eval_formula(g, {{"x", mv_nat(Nat(0))}}));
}

TEST_CASE("lambda abstraction and the beta law") {
  ContentSpace sp = ContentSpace::powerset({"a", "b"}, {Rat(1, 2), Rat(1, 2)});
  Model m{&sp, 4};

  TermPtr idlam = lambda_abstract(mk_var("x", ty_nat()), mk_var("x", ty_nat()));
  CHECK(m.eval(mk_app(idlam, mk_num(5)))->nat == 5);

  TermPtr constlam = lambda_abstract(mk_var("x", ty_nat()), mk_const("empty"));
  CHECK(m.eval(mk_app(constlam, mk_num(3)))->evt == sp.empty_event());

  // beta: eval(App(\x.t, s)) = eval(t[s/x]) over random closed bodies
  SplitMix rng(11);
  auto gen0 = [&](auto&& self, int depth, bool with_x) -> TermPtr {
    if (depth == 0 || rng.below(3) == 0) {
      if (with_x && rng.below(2) == 0) return mk_var("x", ty_nat());
      return mk_num(Nat(rng.below(4)));
    }
    static const char* ops[] = {"add", "mul", "tminus", "max0", "min0"};
    TermPtr l = self(self, depth - 1, with_x);
    TermPtr r = self(self, depth - 1, with_x);
    return mk_app(mk_app(mk_const(ops[rng.below(5)]), l), r);
  };
  for (int i = 0; i < 300; ++i) {
    TermPtr body = gen0(gen0, 3, true);
    TermPtr arg = gen0(gen0, 2, false);
    TermPtr lam = lambda_abstract(mk_var("x", ty_nat()), body);
    CHECK(m.eval(mk_app(lam, arg))->nat ==
          m.eval(subst_term(body, "x", arg))->nat);
  }
}

TEST_CASE("bracket abstraction eliminates lambdas and preserves meaning") {
  ContentSpace sp = ContentSpace::powerset({"a", "b"}, {Rat(1, 3), Rat(2, 3)});
  Model m{&sp, 4};
  VarCtx ctx{{"A", ty_s()}};
  TermPtr lam = parse_term("\\B^S. cup B (compl A)", ctx);
  TermPtr combs = eliminate_lambdas(lam);
  std::function<bool(const TermPtr&)> nolam = [&](const TermPtr& t) {
    switch (t->kind) {
      case Term::K::Lam: return false;
      case Term::K::App: return nolam(t->fun) && nolam(t->arg);
      default: return true;
    }
  };
  CHECK(nolam(combs));
  typecheck(combs);
  for (const Event& e : sp.algebra())
    for (const Event& a : sp.algebra()) {
      Env env{{"A", mv_evt(a)}};
      CHECK(m.eval(lam, env)->fn(mv_evt(e))->evt ==
            m.eval(combs, env)->fn(mv_evt(e))->evt);
    }
}

TEST_CASE("finite unions through the recursor equation") {
  // U_{i=n}^{m} A(i) = R_S(m-n, A(n), \B,x. B u A(n+x+1))
  ContentSpace sp = ContentSpace::powerset(
      {"a", "b", "c"}, {Rat(1, 3), Rat(1, 3), Rat(1, 3)});
  Model m{&sp, 6};
  SplitMix rng(13);
  for (int t = 0; t < 50; ++t) {
    EventSeq seq = random_seq(rng, sp, 5);
    uint64_t n = rng.below(4), mm = n + rng.below(4);
    MV seqv = mv_fn([&sp, seq](const MV& i) {
      return mv_evt(seq.at(i->nat.convert_to<uint64_t>()));
    });
    VarCtx ctx{{"A", parse_type("S(0)")}, {"n", ty_nat()}, {"m", ty_nat()}};
    TermPtr rec = parse_term(
        "R^[S] (tminus m n) (A n) (\\B^S. \\x^0. cup B (A (add n (succ x))))",
        ctx);
    Env env{{"A", seqv}, {"n", mv_nat(Nat(n))}, {"m", mv_nat(Nat(mm))}};
    CHECK(m.eval(rec, env)->evt == finite_union(sp, seq, n, mm));
  }
}

TEST_CASE("evaluator constants behave like the model operations") {
  ContentSpace sp = ContentSpace::powerset({"a", "b"}, {Rat(1, 4), Rat(3, 4)});
  Model m{&sp, 4};
  CHECK(m.eval_formula(parse_formula("comega =Omega comega")));
  CHECK(m.eval_formula(parse_formula("forall x^Omega (x NotIn empty)")));
  CHECK(m.eval_formula(parse_formula(
      "forall x^Omega (forall A^S (forall B^S "
      "((x In (cup A B) -> (x In A or x In B)) and "
      "((x In A or x In B) -> x In (cup A B)))))")));
  CHECK(m.eval_real(parse_term("P empty")) == 0);
  CHECK(m.eval_real(parse_term("P (compl empty)")) == 1);
  CHECK(m.eval_formula(parse_formula("P empty <R P (compl empty)")));
  CHECK(m.eval_real(parse_term("integ (\\x^Omega. P (compl empty))")) == 1);
  CHECK(m.eval(parse_term("I (\\x^Omega. P empty)"))->nat == 0);
  CHECK(m.eval_real(parse_term("supnorm (\\x^Omega. P (compl empty))")) == 1);
  // interval constant under the exact model semantics
  CHECK(m.eval(parse_term("interval (circ 0) (circ 2) (circ 1)"))->nat == 0);
  CHECK(m.eval(parse_term("interval (circ 0) (circ 1) (circ 2)"))->nat == 1);
  // inverse map: x in f^{-1}A iff A(f(x)) = 0
  CHECK(m.eval_formula(parse_formula(
      "forall x^Omega (inv (\\y^Omega. circ 1) (interval (circ 0) (circ 2)) x =0 0)")));
  // countable union under the bounded-model reading
  VarCtx ctx{{"A", parse_type("S(0)")}};
  ContentSpace abc = ContentSpace::powerset(
      {"a", "b", "c"}, {Rat(1, 3), Rat(1, 3), Rat(1, 3)});
  Model m3{&abc, 4};
  MV seqv = mv_fn([&abc](const MV& i) {
    uint64_t n = i->nat.convert_to<uint64_t>();
    return mv_evt(n < 2 ? abc.atom_event(n) : abc.empty_event());
  });
  CHECK(m3.eval(parse_term("bigU A", ctx), {{"A", seqv}})->evt ==
        Event{Backend::ExplicitFinite, 0b011, false, {}});
}
