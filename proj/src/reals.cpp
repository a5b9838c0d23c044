#include "probwb/reals.hpp"

#include <atomic>

namespace probwb {

Nat pair_j(const Nat& n, const Nat& m) {
  Nat v = (n + m) * (n + m) + 3 * n + m;
  if (v % 2 != 0) return Nat(0);  // never hit: v is always even
  return v / 2;
}

std::pair<Nat, Nat> unpair_j(const Nat& code) {
  // j(n,m) = T(n+m) + n with T(s) = s(s+1)/2; invert by locating the
  // largest triangular number <= code.
  Nat s = (boost::multiprecision::sqrt(Nat(8) * code + 1) - 1) / 2;
  while (s * (s + 1) / 2 > code) --s;
  while ((s + 1) * (s + 2) / 2 <= code) ++s;
  Nat n = code - s * (s + 1) / 2;
  Nat m = s - n;
  return {n, m};
}

Rat rat_of_code(const Nat& code) {
  auto [n, m] = unpair_j(code);
  if (n % 2 == 0) return Rat(n / 2, m + 1);
  return -Rat((n + 1) / 2, m + 1);
}

Nat code_of_rat(const Rat& q) {
  Nat p = numerator(q), d = denominator(q);
  if (p >= 0) return pair_j(2 * p, d - 1);
  return pair_j(2 * (-p) - 1, d - 1);
}

Nat circ(const Rat& q, unsigned n) {
  Nat den = nat_pow2(n + 1);
  if (q >= 0) {
    Nat k0 = rat_floor(q * den);
    return pair_j(2 * k0, den - 1);
  }
  Nat kb0 = rat_floor(-q * den);
  Nat first = 2 * kb0;
  if (first > 0) --first;  // truncated minus
  return pair_j(first, den - 1);
}

Rat circ_value(const Rat& q, unsigned n) { return rat_of_code(circ(q, n)); }

struct RealCode::State {
  std::function<Nat(uint32_t)> gen;
  std::optional<Rat> exact;
  uint64_t id;
  mutable std::mutex mu;
  mutable std::vector<std::optional<Nat>> memo;
};

namespace {
std::shared_ptr<RealCode::State> make_state(std::function<Nat(uint32_t)> gen,
                                            std::optional<Rat> exact) {
  static std::atomic<uint64_t> next_id{1};
  auto st = std::make_shared<RealCode::State>();
  st->gen = std::move(gen);
  st->exact = std::move(exact);
  st->id = next_id.fetch_add(1);
  return st;
}
}  // namespace

RealCode RealCode::constant(const Rat& q) {
  Nat c = code_of_rat(q);
  return RealCode(make_state([c](uint32_t) { return c; }, q));
}

RealCode RealCode::canonical(const Rat& q) {
  return RealCode(make_state([q](uint32_t n) { return circ(q, n); }, q));
}

RealCode RealCode::from_fn(std::function<Nat(uint32_t)> gen) {
  return RealCode(make_state(std::move(gen), std::nullopt));
}

RealCode RealCode::from_fn_exact(std::function<Nat(uint32_t)> gen, Rat exact) {
  return RealCode(make_state(std::move(gen), std::move(exact)));
}

Nat RealCode::code_at(uint32_t n) const {
  std::lock_guard lock(state_->mu);
  if (state_->memo.size() <= n) state_->memo.resize(n + 1);
  if (!state_->memo[n]) state_->memo[n] = state_->gen(n);
  return *state_->memo[n];
}

const std::optional<Rat>& RealCode::exact() const { return state_->exact; }

uint64_t RealCode::id() const { return state_->id; }

RealCode hat(const RealCode& x) {
  // violation(n): least k < n with |x(k) - x(k+1)| >= 2^{-k-1}, if any.
  // Scanning is monotone, so each index looks at its own prefix only.
  auto gen = [x](uint32_t n) -> Nat {
    for (uint32_t k = 0; k < n; ++k) {
      Rat step = rat_abs(x.rat_at(k) - x.rat_at(k + 1));
      if (step >= rat_pow2(-static_cast<int>(k) - 1)) return x.code_at(k);
    }
    return x.code_at(n);
  };
  if (x.exact()) return RealCode::from_fn_exact(gen, *x.exact());
  return RealCode::from_fn(gen);
}

namespace {
// |r - x(n)| <= 2^{-n} for a fast-Cauchy x; we use the safe 2^{-n+1}.
Rat prefix_slack(uint32_t n) { return rat_pow2(1 - static_cast<int>(n)); }
}  // namespace

RealCode real_add(const RealCode& x, const RealCode& y) {
  if (x.exact() && y.exact()) return RealCode::canonical(*x.exact() + *y.exact());
  return RealCode::from_fn([x, y](uint32_t n) {
    return code_of_rat(x.rat_at(n + 3) + y.rat_at(n + 3));
  });
}

RealCode real_neg(const RealCode& x) {
  if (x.exact()) return RealCode::canonical(-*x.exact());
  return RealCode::from_fn([x](uint32_t n) { return code_of_rat(-x.rat_at(n)); });
}

RealCode real_abs(const RealCode& x) {
  if (x.exact()) return RealCode::canonical(rat_abs(*x.exact()));
  return RealCode::from_fn([x](uint32_t n) { return code_of_rat(rat_abs(x.rat_at(n))); });
}

RealCode real_mul(const RealCode& x, const RealCode& y) {
  if (x.exact() && y.exact()) return RealCode::canonical(*x.exact() * *y.exact());
  return RealCode::from_fn([x, y](uint32_t n) {
    // shift s so that (Bx + By + 1) * 2^{-s+1} < 2^{-n-2} where B bounds
    // the factors via their 0-th approximations.
    Rat bx = rat_abs(x.rat_at(0)) + 2, by = rat_abs(y.rat_at(0)) + 2;
    Nat scale = rat_ceil(bx + by + 1);
    uint32_t extra = 0;
    while ((Nat(1) << extra) < scale) ++extra;
    uint32_t m = n + extra + 4;
    return code_of_rat(x.rat_at(m) * y.rat_at(m));
  });
}

Cmp compare_upto(const RealCode& x, const RealCode& y, unsigned k) {
  Rat tol = rat_pow2(-static_cast<int>(k));
  if (x.exact() && y.exact()) {
    Rat d = *x.exact() - *y.exact();
    if (rat_abs(d) <= tol) return Cmp::WITHIN;
    return d < 0 ? Cmp::LT : Cmp::GT;
  }
  for (unsigned m = k + 2; m <= k + 66; ++m) {
    Rat g = x.rat_at(m) - y.rat_at(m);
    Rat u = 2 * prefix_slack(m);
    if (rat_abs(g) + u <= tol) return Cmp::WITHIN;
    if (g - u > tol) return Cmp::GT;
    if (g + u < -tol) return Cmp::LT;
  }
  return Cmp::WITHIN;  // undecided at depth k+64: off by at most 2^{-k-62}
}

}  // namespace probwb
