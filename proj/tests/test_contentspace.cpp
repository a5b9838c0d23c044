#include "probwb/contentspace.hpp"

#include "probwb/rng.hpp"
#include "testutil.hpp"
#include "doctest.h"

using namespace probwb;
using namespace probwb::testgen;

namespace {
ContentSpace abc() {
  return ContentSpace::powerset({"a", "b", "c"},
                                {Rat(1, 2), Rat(1, 3), Rat(1, 6)});
}
Event bitsev(uint64_t bits) { return Event{Backend::ExplicitFinite, bits, false, {}}; }
}  // namespace

TEST_CASE("building spaces") {
  ContentSpace s = ContentSpace::powerset({"a", "b"}, {Rat(1, 4), Rat(3, 4)});
  CHECK(s.algebra().size() == 4);
  CHECK(s.content(s.atom_event(0)) == Rat(1, 4));
  CHECK(s.content(s.full_event()) == Rat(1));
  CHECK(s.content(s.empty_event()) == Rat(0));

  CHECK_THROWS_AS(ContentSpace::powerset({"a", "b"}, {Rat(1, 2), Rat(1, 4)}),
                  BadContent);
  CHECK_THROWS_AS(ContentSpace::powerset({"a"}, {Rat(-1), Rat(2)}), BadContent);

  ContentSpace c = ContentSpace::cofinite();
  CHECK(c.content(c.finite_event({1, 2, 3})) == Rat(0));
  CHECK(c.content(c.evt_complement(c.finite_event({7}))) == Rat(1));
}

TEST_CASE("generated algebras close under the operations") {
  ContentSpace s = ContentSpace::generated(
      {"a", "b", "c"}, {{"a", "b"}}, {Rat(1, 2), Rat(1, 4), Rat(1, 4)});
  // {}, {a,b}, {c}, {a,b,c}
  CHECK(s.algebra().size() == 4);
  for (const Event& x : s.algebra())
    for (const Event& y : s.algebra()) {
      CHECK(s.in_algebra(s.evt_union(x, y)));
      CHECK(s.in_algebra(s.evt_complement(x)));
    }
  CHECK(s.algebra_blocks().size() == 2);
  CHECK_THROWS_AS(ContentSpace::generated({"a", "b", "c"}, {{"a"}, {"b"}},
                                          {Rat(1, 3), Rat(1, 3), Rat(1, 3)}, 3),
                  NotClosed);
}

TEST_CASE("explicitly tabulated contents are validated") {
  // powerset over {a,b} with an additive table
  std::map<uint64_t, Rat> good = {
      {0, Rat(0)}, {1, Rat(1, 4)}, {2, Rat(3, 4)}, {3, Rat(1)}};
  ContentSpace s = ContentSpace::with_event_contents({"a", "b"},
                                                     {{"a"}, {"b"}}, good);
  CHECK(s.content(bitsev(1)) == Rat(1, 4));
  std::map<uint64_t, Rat> bad = {
      {0, Rat(0)}, {1, Rat(1, 4)}, {2, Rat(1, 4)}, {3, Rat(1)}};
  CHECK_THROWS_AS(
      ContentSpace::with_event_contents({"a", "b"}, {{"a"}, {"b"}}, bad),
      NonAdditive);
}

TEST_CASE("space json round-trip") {
  ContentSpace s = abc();
  nlohmann::json j = s.to_json();
  ContentSpace s2 = ContentSpace::from_json(j);
  CHECK(s2.atom_count() == 3);
  CHECK(s2.content(s2.atom_event(1)) == Rat(1, 3));
  CHECK(ContentSpace::from_json(nlohmann::json{{"backend", "cofinite"}})
            .backend() == Backend::Cofinite);
}

TEST_CASE("finite unions") {
  ContentSpace s = abc();
  Event e = bitsev(0b011);
  EventSeq constant{[e](uint64_t) { return e; }, 0};
  CHECK(finite_union(s, constant, 0, 5) == e);
  CHECK(finite_union(s, constant, 4, 2) == s.empty_event());
  EventSeq two{[&s](uint64_t i) {
                 return i == 0 ? s.atom_event(0) : i == 1 ? s.atom_event(1)
                                                          : s.empty_event();
               },
               1};
  CHECK(finite_union(s, two, 0, 1) == bitsev(0b011));
}

TEST_CASE("countable union and intersection") {
  ContentSpace s = abc();
  EventSeq empty{[&s](uint64_t) { return s.empty_event(); }, 0};
  CHECK(countable_union(s, empty) == s.empty_event());

  EventSeq atoms{[&s](uint64_t i) { return s.atom_event(i % 3); }, 3};
  CHECK(countable_union(s, atoms) == s.full_event());

  EventSeq growing{[&s](uint64_t i) {
                     return i < 2 ? s.atom_event(i) : s.atom_event(2);
                   },
                   1};  // declared too early
  CHECK_THROWS_AS(countable_union(s, growing), NotStabilized);

  EventSeq undeclared{[&s](uint64_t) { return s.empty_event(); }, std::nullopt};
  CHECK_THROWS_AS(countable_union(s, undeclared), NotStabilized);

  EventSeq full{[&s](uint64_t) { return s.full_event(); }, 0};
  CHECK(countable_intersection(s, full) == s.full_event());

  EventSeq pair{[&s](uint64_t i) {
                  return i == 0 ? bitsev(0b011) : bitsev(0b110);
                },
                2};
  CHECK(countable_intersection(s, pair) == bitsev(0b010));

  // the intersection sits inside every member
  SplitMix rng(31);
  for (int t = 0; t < 40; ++t) {
    ContentSpace sp = random_space(rng.next(), 4);
    EventSeq seq = random_seq(rng, sp, 4);
    Event cap = countable_intersection(sp, seq);
    for (uint64_t n = 0; n <= 8; ++n) CHECK(sp.evt_subset(cap, seq.at(n)));
  }
}

TEST_CASE("disjointify") {
  ContentSpace s = abc();
  EventSeq pair{[&s](uint64_t i) {
                  return i == 0 ? bitsev(0b011) : i == 1 ? bitsev(0b110)
                                                         : s.empty_event();
                },
                1};
  EventSeq up = disjointify(s, pair);
  CHECK(up.at(0) == bitsev(0b011));
  CHECK(up.at(1) == bitsev(0b100));

  EventSeq omegas{[&s](uint64_t) { return s.full_event(); }, 0};
  EventSeq upo = disjointify(s, omegas);
  CHECK(upo.at(0) == s.full_event());
  CHECK(upo.at(1) == s.empty_event());
  CHECK(upo.at(5) == s.empty_event());

  SplitMix rng(37);
  for (int t = 0; t < 40; ++t) {
    ContentSpace sp = random_space(rng.next(), 4);
    EventSeq seq = random_seq(rng, sp, 5);
    EventSeq dj = disjointify(sp, seq);
    // pairwise disjoint with identical partial unions; unchanged when the
    // input was already disjoint
    for (uint64_t i = 0; i <= 6; ++i)
      for (uint64_t j = i + 1; j <= 6; ++j)
        CHECK(sp.evt_empty(sp.evt_intersect(dj.at(i), dj.at(j))));
    for (uint64_t n = 0; n <= 6; ++n)
      CHECK(finite_union(sp, dj, 0, n) == finite_union(sp, seq, 0, n));
  }
}

TEST_CASE("monotone cauchy modulus") {
  ContentSpace s = abc();
  EventSeq constant{[&s](uint64_t) { return s.atom_event(0); }, 0};
  CHECK(monotone_cauchy_modulus(s, constant, 4, 16) == 0);

  // eight uniform atoms, one more per step, k = 2 -> N = 6
  std::vector<std::string> names;
  std::vector<Rat> w;
  for (int i = 0; i < 8; ++i) {
    names.push_back("x" + std::to_string(i));
    w.push_back(Rat(1, 8));
  }
  ContentSpace u8 = ContentSpace::powerset(names, w);
  EventSeq grow{[](uint64_t n) {
                  uint64_t k = std::min<uint64_t>(n + 1, 8);
                  return Event{Backend::ExplicitFinite,
                               (uint64_t(1) << k) - 1, false, {}};
                },
                8};
  CHECK(monotone_cauchy_modulus(u8, grow, 2, 16) == 6);

  // decreasing variant via complements: same modulus
  EventSeq shrink{[&u8, &grow](uint64_t n) {
                    return u8.evt_complement(grow.at(n));
                  },
                  8};
  EventSeq reflipped{[&u8, &shrink](uint64_t n) {
                       return u8.evt_complement(shrink.at(n));
                     },
                     8};
  CHECK(monotone_cauchy_modulus(u8, reflipped, 2, 16) == 6);

  EventSeq notmono{[&s](uint64_t n) {
                     return n % 2 ? s.empty_event() : s.full_event();
                   },
                   0};
  CHECK_THROWS(monotone_cauchy_modulus(s, notmono, 2, 8));
}

TEST_CASE("stabilization index") {
  ContentSpace s = abc();
  EventSeq atoms{[&s](uint64_t i) { return s.atom_event(i % 3); }, 3};
  uint64_t n = stabilization_index(s, atoms, Rat(1, 100), 16);
  // after N the partial unions no longer add more than the threshold
  Event un = finite_union(s, atoms, 0, n);
  for (uint64_t m = 0; m <= 16; ++m) {
    Event um = finite_union(s, atoms, 0, m);
    CHECK(s.content(s.evt_intersect(um, s.evt_complement(un))) < Rat(1, 100));
  }
}

TEST_CASE("intensional intervals") {
  RealCode zero = RealCode::canonical(Rat(0));
  RealCode one = RealCode::canonical(Rat(1));
  RealCode half = RealCode::canonical(Rat(1, 2));
  RealCode two = RealCode::canonical(Rat(2));

  CHECK(interval_closed(zero, one, half, 3) == Tri::IN);
  CHECK(interval_closed(zero, one, zero, 3) == Tri::IN);  // syntactic endpoint
  CHECK(interval_closed(zero, one, two, 3) == Tri::OUT);
  // a fresh stream for the same endpoint value is not syntactically the
  // endpoint, and no strict inequality certifies: undecided
  CHECK(interval_closed(zero, one, RealCode::canonical(Rat(0)), 3) ==
        Tri::UNKNOWN);

  CHECK(interval_halfopen(zero, one, zero, 3) == Tri::IN);
  CHECK(interval_halfopen(zero, one, one, 3) == Tri::OUT);
  CHECK(interval_halfopen(zero, one, half, 3) == Tri::IN);
}

TEST_CASE("preimages, sup norm, integral") {
  ContentSpace s = ContentSpace::powerset({"a", "b"}, {Rat(1, 4), Rat(3, 4)});
  MeasurableFn zero = MeasurableFn::on_atoms({Rat(0), Rat(0)});
  CHECK(preimage(s, zero, Rat(-1), Rat(1)) == s.full_event());
  MeasurableFn f = MeasurableFn::on_atoms({Rat(1), Rat(2)});
  CHECK(preimage(s, f, Rat(0), Rat(3, 2)) == bitsev(0b01));
  CHECK(preimage(s, f, Rat(5), Rat(6)) == s.empty_event());

  CHECK(sup_norm(s, zero) == Rat(0));
  CHECK(sup_norm(s, MeasurableFn::on_atoms({Rat(2), Rat(-3)})) == Rat(3));

  MeasurableFn chi = MeasurableFn::on_atoms({Rat(1), Rat(1)});
  CHECK(integral(s, chi) == Rat(1));
  CHECK(integral(s, MeasurableFn::on_atoms({Rat(2), Rat(-1)})) == Rat(-1, 4));
  CHECK(integral(s, zero) == Rat(0));

  SplitMix rng(41);
  for (int t = 0; t < 60; ++t) {
    ContentSpace sp = random_space(rng.next(), 4);
    MeasurableFn g = random_fn(rng, sp);
    Rat norm = sup_norm(sp, g);
    for (size_t i = 0; i < sp.atom_count(); ++i)
      CHECK(norm >= rat_abs(g.values[i]));
  }

  // non-measurable w.r.t. a coarse algebra
  ContentSpace coarse = ContentSpace::generated(
      {"a", "b"}, {}, {Rat(1, 2), Rat(1, 2)});  // only {} and {a,b}
  CHECK_THROWS_AS(integral(coarse, MeasurableFn::on_atoms({Rat(0), Rat(1)})),
                  NotMeasurable);
}

TEST_CASE("cofinite measurable functions") {
  ContentSpace c = ContentSpace::cofinite();
  MeasurableFn f = MeasurableFn::cofinite_constant(Rat(2), {{3, Rat(7)}});
  CHECK(f.value_at(c, 3) == Rat(7));
  CHECK(f.value_at(c, 4) == Rat(2));
  CHECK(integral(c, f) == Rat(2));
  CHECK(sup_norm(c, f) == Rat(7));
  Event pre = preimage(c, f, Rat(0), Rat(3));
  CHECK(pre.complemented);           // the tail is in range
  CHECK(!c.evt_contains(pre, 3));    // the exceptional value is not

  MeasurableFn id = MeasurableFn::cofinite_identity();
  CHECK(id.value_at(c, 11) == Rat(11));
  Event band = preimage(c, id, Rat(2), Rat(4));
  CHECK(band.finite == std::vector<uint64_t>{2, 3, 4});
  CHECK_THROWS_AS(integral(c, id), NotMeasurable);
}

TEST_CASE("grid simple approximation") {
  ContentSpace s = ContentSpace::powerset({"a", "b"}, {Rat(1, 2), Rat(1, 2)});
  MeasurableFn zero = MeasurableFn::on_atoms({Rat(0), Rat(0)});
  SimpleApprox sa = simple_approx(s, zero, 1);
  CHECK(sa.defect <= Rat(1, 2));
  REQUIRE(sa.pieces.size() == 1);
  CHECK(sa.pieces[0].first == Rat(0));  // the cell [0, 1/2) holds 0

  MeasurableFn f = MeasurableFn::on_atoms({Rat(1, 3), Rat(-1, 3)});
  SimpleApprox sb = simple_approx(s, f, 3);
  CHECK(sb.defect <= Rat(1, 8));

  SplitMix rng(43);
  for (int t = 0; t < 80; ++t) {
    ContentSpace sp = random_space(rng.next(), 4);
    MeasurableFn g = random_fn(rng, sp);
    unsigned k = rng.below(9);
    SimpleApprox sc = simple_approx(sp, g, k);
    CHECK(sc.defect <= rat_pow2(-static_cast<int>(k)));
    // recompute the defect from the returned pieces
    Rat defect(0);
    for (size_t x = 0; x < sp.atom_count(); ++x) {
      std::optional<Rat> coeff;
      for (const auto& [cv, ev] : sc.pieces)
        if (sp.evt_contains(ev, x)) {
          CHECK(!coeff);  // cells partition the space
          coeff = cv;
        }
      REQUIRE(coeff);
      defect += sp.point_weight(x) * rat_abs(g.values[x] - *coeff);
    }
    CHECK(defect == sc.defect);
  }
}

TEST_CASE("specker demo") {
  SpeckerReport r = specker_demo({Rat(1, 2), Rat(1, 4), Rat(1, 8)}, 3);
  REQUIRE(r.gaps.size() == 3);
  CHECK(r.total == Rat(7, 8));
  CHECK(r.gaps[0] == Rat(3, 8));
  CHECK(r.gaps[1] == Rat(1, 8));
  CHECK(r.gaps[2] == Rat(0));
  CHECK(r.space.content(r.space.full_event()) == Rat(1));

  SpeckerReport e = specker_demo({}, 4);
  CHECK(e.gaps.empty());
  CHECK(e.space.point_weight(0) == Rat(1));  // everything on the marker

  CHECK_THROWS_AS(specker_demo({Rat(3, 4), Rat(3, 4)}, 2), BadWeights);

  // gaps are exactly the truncated tail sums, monotone to zero
  std::vector<Rat> w;
  for (int i = 0; i < 21; ++i) w.push_back(rat_pow2(-i - 1));
  SpeckerReport t = specker_demo(w, 21);
  for (size_t n = 0; n < t.gaps.size(); ++n) {
    Rat tail(0);
    for (size_t i = n + 1; i < 21; ++i) tail += w[i];
    CHECK(t.gaps[n] == tail);
    if (n) CHECK(t.gaps[n] <= t.gaps[n - 1]);
  }
}
