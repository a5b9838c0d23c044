#include "probwb/reals.hpp"

#include "probwb/rng.hpp"
#include "doctest.h"

using namespace probwb;

namespace {
Rat seeded_rat(SplitMix& rng) {
  // rationals in [-8, 8] with denominators up to 64
  Nat den = Nat(1 + rng.below(64));
  Nat span = 16 * den;
  Nat num = Nat(rng.below(span.convert_to<uint64_t>() + 1)) - 8 * den;
  return Rat(num, den);
}
}  // namespace

TEST_CASE("pairing examples and injectivity") {
  CHECK(pair_j(0, 0) == 0);
  CHECK(pair_j(1, 0) == 2);
  CHECK(pair_j(0, 1) == 1);
  // exhaustive injectivity on {0..500}^2, against the inverse
  for (uint64_t n = 0; n <= 500; ++n)
    for (uint64_t m = 0; m <= 500; ++m) {
      auto [n2, m2] = unpair_j(pair_j(n, m));
      REQUIRE(n2 == n);
      REQUIRE(m2 == m);
    }
}

TEST_CASE("rational code convention") {
  CHECK(rat_of_code(pair_j(4, 1)) == Rat(1));
  CHECK(rat_of_code(pair_j(1, 1)) == Rat(-1, 2));
  CHECK(rat_of_code(pair_j(0, 0)) == Rat(0));
  SplitMix rng(7);
  for (int i = 0; i < 500; ++i) {
    Rat q = seeded_rat(rng);
    CHECK(rat_of_code(code_of_rat(q)) == q);
  }
}

TEST_CASE("circ examples") {
  CHECK(circ(Rat(1), 0) == pair_j(4, 1));
  for (unsigned n = 0; n <= 10; ++n)
    CHECK(circ(Rat(0), n) == pair_j(0, nat_pow2(n + 1) - 1));
  CHECK(circ(Rat(-1, 2), 0) == pair_j(1, 1));
  CHECK(circ_value(Rat(-1, 2), 0) == Rat(-1, 2));
}

TEST_CASE("canonical selection: representation, order, monotonicity") {
  SplitMix rng(11);
  for (int i = 0; i < 1000; ++i) {
    Rat q = seeded_rat(rng);
    for (unsigned n = 0; n <= 20; ++n) {
      // (1) representation: within 2^{-n} of the value
      CHECK(rat_abs(q - circ_value(q, n)) <= rat_pow2(-static_cast<int>(n)));
      // (3) nondecreasing approximants for q >= 0
      if (q >= 0 && n > 0) CHECK(circ_value(q, n) >= circ_value(q, n - 1));
    }
  }
  // (2) |r| <= s gives the pointwise order, on values and on codes
  for (int i = 0; i < 400; ++i) {
    Rat r = seeded_rat(rng);
    Rat s = rat_abs(r) + Rat(rng.below(5), 1 + rng.below(7));
    for (unsigned n = 0; n <= 16; ++n) {
      CHECK(circ_value(r, n) <= circ_value(s, n));
      CHECK(circ(r, n) <= circ(s, n));
    }
  }
}

TEST_CASE("circ streams obey the fast-Cauchy discipline") {
  SplitMix rng(13);
  for (int i = 0; i < 200; ++i) {
    Rat q = seeded_rat(rng);
    for (unsigned n = 0; n <= 16; ++n)
      CHECK(rat_abs(circ_value(q, n) - circ_value(q, n + 1)) <
            rat_pow2(-static_cast<int>(n) - 1));
  }
}

TEST_CASE("hat: identity on fast-Cauchy inputs, stall on violation") {
  RealCode c = RealCode::constant(Rat(3, 7));
  RealCode hc = hat(c);
  for (unsigned n = 0; n <= 12; ++n) CHECK(hc.code_at(n) == c.code_at(n));

  // 0, 1, 0, 0, ... jumps by 1 >= 2^{-1}; hat stalls at the first value
  RealCode bad = RealCode::from_fn(
      [](uint32_t n) { return code_of_rat(n == 1 ? Rat(1) : Rat(0)); });
  RealCode hb = hat(bad);
  for (unsigned n = 0; n <= 12; ++n) CHECK(hb.rat_at(n) == Rat(0));

  // idempotence on seeded raw streams
  SplitMix rng(17);
  for (int i = 0; i < 50; ++i) {
    uint64_t seed = rng.next();
    RealCode raw = RealCode::from_fn([seed](uint32_t n) {
      SplitMix local(splitmix64(seed + n));
      return code_of_rat(Rat(local.below(9), 1 + local.below(6)));
    });
    RealCode h1 = hat(raw), h2 = hat(hat(raw));
    for (unsigned n = 0; n <= 10; ++n) CHECK(h1.code_at(n) == h2.code_at(n));
    for (unsigned n = 0; n <= 10; ++n)
      CHECK(rat_abs(h1.rat_at(n) - h1.rat_at(n + 1)) <
            rat_pow2(-static_cast<int>(n) - 1));
  }
}

TEST_CASE("arithmetic on codes") {
  RealCode half = RealCode::canonical(Rat(1, 2));
  RealCode one = real_add(half, half);
  for (unsigned n = 0; n <= 20; ++n)
    CHECK(rat_abs(one.rat_at(n) - Rat(1)) <= rat_pow2(1 - static_cast<int>(n)));
  CHECK(*one.exact() == Rat(1));

  RealCode a = real_abs(RealCode::canonical(Rat(-3, 4)));
  CHECK(*a.exact() == Rat(3, 4));

  CHECK(compare_upto(RealCode::canonical(Rat(0)),
                     RealCode::canonical(Rat(1, 1024)), 5) == Cmp::WITHIN);
  CHECK(compare_upto(RealCode::canonical(Rat(0)),
                     RealCode::canonical(Rat(1)), 5) == Cmp::LT);
  CHECK(compare_upto(RealCode::canonical(Rat(2)),
                     RealCode::canonical(Rat(1)), 5) == Cmp::GT);
}

TEST_CASE("arithmetic through raw streams (no exact backing)") {
  auto raw = [](const Rat& q) {
    return hat(RealCode::from_fn([q](uint32_t n) { return circ(q, n); }));
  };
  SplitMix rng(23);
  for (int i = 0; i < 60; ++i) {
    Rat x = seeded_rat(rng), y = seeded_rat(rng);
    RealCode sum = real_add(raw(x), raw(y));
    RealCode prod = real_mul(raw(x), raw(y));
    for (unsigned n = 2; n <= 12; ++n) {
      CHECK(rat_abs(sum.rat_at(n) - (x + y)) <= rat_pow2(1 - static_cast<int>(n)));
      CHECK(rat_abs(prod.rat_at(n) - x * y) <= rat_pow2(1 - static_cast<int>(n)));
    }
    Cmp c = compare_upto(raw(x), raw(y), 8);
    if (rat_abs(x - y) > rat_pow2(-7)) {
      CHECK(c == (x < y ? Cmp::LT : Cmp::GT));
    }
  }
}

TEST_CASE("stream identity and memoized reads") {
  RealCode x = RealCode::canonical(Rat(5, 3));
  RealCode y = x;  // shares the stream
  CHECK(x.same_stream(y));
  CHECK_FALSE(x.same_stream(RealCode::canonical(Rat(5, 3))));
  for (int i = 0; i < 3; ++i) CHECK(x.code_at(9) == y.code_at(9));
}
