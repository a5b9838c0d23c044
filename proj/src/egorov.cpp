#include "probwb/egorov.hpp"

#include <algorithm>

namespace probwb {

ModelRV RandomVariableSeq::model_view() const {
  ModelRV rv;
  rv.at = at;
  rv.uniform_bound = uniform_bound;
  Nat b = uniform_bound.value_or(Nat(0));
  rv.tau = [b](uint64_t) { return Rat(b); };
  return rv;
}

NatFunctional logged_functional(
    NatFunctional m, std::shared_ptr<std::vector<FunctionalQuery>> log) {
  return [m = std::move(m), log](const NatFn& f) {
    auto points = std::make_shared<std::vector<std::pair<uint64_t, uint64_t>>>();
    NatFn traced = [f, points](uint64_t n) {
      uint64_t v = f(n);
      points->emplace_back(n, v);
      return v;
    };
    uint64_t r = m(traced);
    log->push_back({*points, r});
    return r;
  };
}

Event p_set(const ContentSpace& space, const RandomVariableSeq& X, uint64_t a,
            uint64_t i, uint64_t j) {
  MeasurableFn fi = X.at(i), fj = X.at(j);
  Rat tol = rat_pow2(-static_cast<int>(a));
  if (space.backend() == Backend::ExplicitFinite) {
    uint64_t bits = 0;
    for (size_t x = 0; x < space.atom_count(); ++x)
      if (rat_abs(fi.value_at(space, x) - fj.value_at(space, x)) <= tol)
        bits |= uint64_t(1) << x;
    return Event{Backend::ExplicitFinite, bits, false, {}};
  }
  throw SpaceError("p_set needs an explicit finite space");
}

namespace {

// cache of closeness events plus the nested unions both modes use
struct PsetSweep {
  const ContentSpace& space;
  const RandomVariableSeq& X;
  uint64_t a;
  std::vector<std::vector<std::optional<Event>>> memo;

  PsetSweep(const ContentSpace& s, const RandomVariableSeq& x, uint64_t a_,
            uint64_t bound)
      : space(s), X(x), a(a_),
        memo(bound + 1, std::vector<std::optional<Event>>(bound + 1)) {}

  const Event& bad(uint64_t i, uint64_t j) {
    auto& slot = memo[i][j];
    if (!slot) slot = space.evt_complement(p_set(space, X, a, i, j));
    return *slot;
  }

  // U_{i=lo..hi} U_{j=lo..hi} p_set(a,i,j)^c
  Event block(uint64_t lo, uint64_t hi) {
    Event u = space.empty_event();
    for (uint64_t i = lo; i <= hi; ++i)
      for (uint64_t j = lo; j <= hi; ++j) u = space.evt_union(u, bad(i, j));
    return u;
  }

  // I_{m=0..b} U_{i,j=m..F(m)} p_set^c
  Event metastable_core(uint64_t b, const NatFn& F) {
    Event acc = space.full_event();
    for (uint64_t m = 0; m <= b; ++m) {
      uint64_t top = F(m);
      Event blk = m > top ? space.empty_event() : block(m, top);
      acc = space.evt_intersect(acc, blk);
    }
    return acc;
  }
};

}  // namespace

std::optional<uint64_t> au_finite_unions_bound(const ContentSpace& space,
                                               const RandomVariableSeq& X,
                                               unsigned k, uint64_t a,
                                               uint64_t search_bound) {
  PsetSweep sweep(space, X, a, search_bound);
  Rat tol = rat_pow2(-static_cast<int>(k));
  for (uint64_t b = 0; b <= search_bound; ++b)
    if (space.content(sweep.block(b, search_bound)) <= tol) return b;
  return std::nullopt;
}

std::optional<uint64_t> aump_bound(const ContentSpace& space,
                                   const RandomVariableSeq& X, unsigned k,
                                   uint64_t a, const NatFn& F,
                                   uint64_t search_bound) {
  uint64_t top = search_bound;
  for (uint64_t m = 0; m <= search_bound; ++m) top = std::max(top, F(m));
  PsetSweep sweep(space, X, a, top);
  Rat tol = rat_pow2(-static_cast<int>(k));
  for (uint64_t b = 0; b <= search_bound; ++b)
    if (space.content(sweep.metastable_core(b, F)) <= tol) return b;
  return std::nullopt;
}

std::optional<uint64_t> egorov_forward(const ContentSpace& space,
                                       const RandomVariableSeq& X, unsigned k,
                                       uint64_t a, const NatFn& F,
                                       uint64_t search_bound) {
  auto b0 = au_finite_unions_bound(space, X, k, a, search_bound);
  if (!b0) return std::nullopt;
  uint64_t top = search_bound;
  for (uint64_t m = 0; m <= *b0; ++m) top = std::max(top, F(m));
  PsetSweep sweep(space, X, a, top);
  Rat tol = rat_pow2(-static_cast<int>(k));
  // the intersection up to b0 sits inside the b0-block, so this holds; it
  // is still computed exactly rather than assumed
  if (!(space.content(sweep.metastable_core(*b0, F)) <= tol))
    throw SpaceError("finite-unions certificate failed the metastable check");
  return b0;
}

namespace {
EventSeq shifted(const EventSeq& A, uint64_t m) {
  return EventSeq{[A, m](uint64_t i) { return A.at(i + m); },
                  A.stabilization_horizon};
}
}  // namespace

uint64_t combinatorial_witness(const ContentSpace& space, const EventSeq& A,
                               const NatFunctional& M, unsigned u, unsigned v,
                               uint64_t search_bound) {
  if (!(v > u)) throw SpaceError("combinatorial witness needs v > u");
  Rat base_gap = rat_pow2(-static_cast<int>(u)) - rat_pow2(-static_cast<int>(v));
  // F(m): stabilization index of the m-shifted sequence at threshold
  // (2^{-u} - 2^{-v}) / 2^{m+1}, shifted back by m
  auto F = [&space, &A, base_gap, search_bound](uint64_t m) {
    Rat threshold = base_gap / rat_pow2(static_cast<int>(m) + 1);
    uint64_t n = stabilization_index(space, shifted(A, m), threshold,
                                     search_bound);
    return n + m;
  };
  return M(F);
}

std::optional<uint64_t> egorov_reverse(const ContentSpace& space,
                                       const RandomVariableSeq& X, unsigned k,
                                       uint64_t a,
                                       const NatFunctional& M_certificate,
                                       uint64_t search_bound) {
  PsetSweep sweep(space, X, a, search_bound);
  Rat tol_k = rat_pow2(-static_cast<int>(k));
  Rat tol_k1 = rat_pow2(-static_cast<int>(k) - 1);

  // spot-check the certificate's own inequality at k+1 on a few
  // counterfunctions before trusting it
  std::vector<NatFn> probes = {
      [](uint64_t m) { return m; },
      [search_bound](uint64_t) { return search_bound; },
      [search_bound](uint64_t m) { return std::min(m + 2, search_bound); }};
  for (const NatFn& F : probes) {
    uint64_t b = M_certificate(F);
    if (!(space.content(sweep.metastable_core(b, F)) <= tol_k1))
      throw CertificateInvalid("metastable certificate fails its inequality");
  }

  // direct search, recording the least violating c for every failing b
  std::vector<uint64_t> G;
  for (uint64_t b = 0; b <= search_bound; ++b) {
    bool fails = false;
    for (uint64_t c = b; c <= search_bound && !fails; ++c) {
      if (space.content(sweep.block(b, c)) > tol_k) {
        G.push_back(c);
        fails = true;
      }
    }
    if (!fails) return b;
  }

  // Search exhausted: every b <= search_bound has a violation.  Materialize
  // the proof's construction as a consistency check; on a finite space with
  // stabilizing closeness events this point is unreachable.
  auto Gt = [&G](uint64_t n) {
    uint64_t m = 0;
    for (uint64_t i = 0; i <= std::min<uint64_t>(n, G.size() - 1); ++i)
      m = std::max(m, G[i]);
    return m;
  };
  EventSeq A{[&](uint64_t n) {
               uint64_t nn = std::min<uint64_t>(n, G.size() - 1);
               return sweep.block(nn, std::max(nn, G[nn]));
             },
             search_bound};
  NatFunctional Mp = [&](const NatFn& F) {
    return M_certificate([&](uint64_t n) { return Gt(F(n)); });
  };
  uint64_t n = combinatorial_witness(space, A, Mp, k, k + 1, search_bound);
  (void)n;
  return std::nullopt;
}

std::optional<uint64_t> dct_index(const ContentSpace& space,
                                  const RandomVariableSeq& X, unsigned k,
                                  uint64_t search_bound) {
  for (uint64_t n = 0; n <= std::min<uint64_t>(search_bound, 8); ++n) {
    MeasurableFn f = X.at(n);
    for (size_t x = 0; x < space.atom_count(); ++x) {
      Rat v = f.value_at(space, x);
      if (v < 0 || v > 1)
        throw SpaceError("dct_index needs values in [0,1]");
    }
  }
  auto n = au_finite_unions_bound(space, X, k + 2, k + 1, search_bound);
  if (!n) return std::nullopt;
  // exact verification of the integral gaps over the searched window
  Rat tol = rat_pow2(-static_cast<int>(k));
  std::vector<Rat> ints;
  for (uint64_t i = *n; i <= search_bound; ++i)
    ints.push_back(integral(space, X.at(i)));
  for (size_t i = 0; i < ints.size(); ++i)
    for (size_t j = i; j < ints.size(); ++j)
      if (rat_abs(ints[i] - ints[j]) > tol)
        throw SpaceError("dominated-convergence index failed verification");
  return n;
}

nlohmann::json ConvergenceCertificate::to_json() const {
  nlohmann::json j;
  j["mode"] = mode;
  j["k"] = k;
  j["a"] = a;
  j["bound"] = bound;
  j["verified_up_to"] = verified_up_to;
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& q : queries) {
    nlohmann::json e;
    e["result"] = q.result;
    nlohmann::json pts = nlohmann::json::array();
    for (auto [x, y] : q.points) pts.push_back({x, y});
    e["points"] = pts;
    qs.push_back(e);
  }
  j["queries"] = qs;
  return j;
}

ConvergenceCertificate ConvergenceCertificate::from_json(const nlohmann::json& j) {
  ConvergenceCertificate c;
  c.mode = j.at("mode").get<std::string>();
  c.k = j.at("k").get<unsigned>();
  c.a = j.at("a").get<uint64_t>();
  c.bound = j.at("bound").get<uint64_t>();
  c.verified_up_to = j.at("verified_up_to").get<uint64_t>();
  for (const auto& e : j.at("queries")) {
    FunctionalQuery q;
    q.result = e.at("result").get<uint64_t>();
    for (const auto& p : e.at("points"))
      q.points.emplace_back(p[0].get<uint64_t>(), p[1].get<uint64_t>());
    c.queries.push_back(std::move(q));
  }
  return c;
}

}  // namespace probwb
