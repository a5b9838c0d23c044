#include "probwb/transfer.hpp"

#include <algorithm>

namespace probwb {

namespace {

std::vector<Rat> pointwise_prefix(const ContentSpace& space,
                                  const RandomVariableSeq& X, uint64_t atom,
                                  size_t len) {
  std::vector<Rat> out;
  out.reserve(len);
  for (size_t n = 0; n < len; ++n) out.push_back(X.at(n).value_at(space, atom));
  return out;
}

}  // namespace

LiftedRealizers lift_realizers(const RealizerTriple& r, const BoundSeq& tau,
                               const ContentSpace& space,
                               const RandomVariableSeq& X, uint64_t check_to) {
  // bound-sequence invariants: monotone and dominating |X(n)| atom-wise
  for (uint64_t n = 0; n + 1 <= check_to; ++n) {
    Rat tn = tau.at(n).rat_at(0), tn1 = tau.at(n + 1).rat_at(0);
    if (tn > tn1) throw SpaceError("bound sequence is not nondecreasing");
  }
  if (space.backend() == Backend::ExplicitFinite) {
    for (uint64_t n = 0; n <= check_to; ++n) {
      auto exact = tau.at(n).exact();
      if (!exact) continue;
      MeasurableFn f = X.at(n);
      for (size_t z = 0; z < space.atom_count(); ++z)
        if (rat_abs(f.value_at(space, z)) > *exact)
          throw SpaceError("bound sequence fails to dominate X");
    }
  }

  auto log = std::make_shared<std::vector<LiftedQuery>>();
  auto tau_at = tau.at;
  NatFn tau_bar = [tau_at, log](uint64_t n) {
    Rat t0 = tau_at(n).rat_at(0);
    uint64_t r = (rat_ceil(t0) + 1).convert_to<uint64_t>();
    log->push_back({"taubar", {n}, r});
    return r;
  };

  LiftedRealizers out;
  out.tau_bar = tau_bar;
  out.log = log;
  out.Vp = [r, tau_bar, log](const std::vector<Rat>& p, const BFunctional& B,
                             uint64_t k, uint64_t u) {
    uint64_t res = r.V(p, tau_bar, B(k), u);
    log->push_back({"V", {k, u}, res});
    return res;
  };
  out.Ap = [r, tau_bar, log](const std::vector<Rat>& p, const BFunctional& B,
                             uint64_t k, uint64_t u, uint64_t w) {
    uint64_t res = r.A(p, tau_bar, B(k), u, w);
    log->push_back({"A", {k, u, w}, res});
    return res;
  };
  out.Cp = [r, tau_bar, log](const std::vector<Rat>& p, const BFunctional& B,
                             uint64_t k, uint64_t u, uint64_t w) {
    uint64_t res = r.C(p, tau_bar, B(k), u, w);
    log->push_back({"C", {k, u, w}, res});
    return res;
  };
  return out;
}

nlohmann::json TransferReport::to_json() const {
  nlohmann::json j;
  j["cases"] = cases;
  j["premise_holds"] = premise_holds;
  j["conclusion_holds"] = conclusion_holds;
  j["all_pass"] = all_pass;
  return j;
}

TransferReport verify_transfer(const ContentSpace& space,
                               const RandomVariableSeq& X,
                               const ModePredicate& P0, const ModePredicate& Q0,
                               const RealizerTriple& realizers,
                               const LiftedRealizers& lifted,
                               const TransferSweep& sweep) {
  if (space.backend() != Backend::ExplicitFinite)
    throw SpaceError("verify_transfer enumerates atoms of an explicit space");
  TransferReport rep;

  auto event_of = [&](const ModePredicate& pred, uint64_t a, uint64_t b,
                      uint64_t c, const std::vector<Rat>& p) {
    size_t len = pred.prefix_len(a, b, c);
    uint64_t bits = 0;
    for (size_t z = 0; z < space.atom_count(); ++z)
      if (pred.holds(a, b, c, pointwise_prefix(space, X, z, len), p))
        bits |= uint64_t(1) << z;
    return Event{Backend::ExplicitFinite, bits, false, {}};
  };

  for (const auto& p : sweep.params)
    for (const auto& B : sweep.Bs)
      for (uint64_t k : sweep.ks)
        for (uint64_t u : sweep.us)
          for (uint64_t w : sweep.ws) {
            ++rep.cases;
            // premise oracle: the unlifted realizers on each pointwise
            // sequence, with the lifted majorant
            for (size_t z = 0; z < space.atom_count(); ++z) {
              uint64_t a = realizers.A(p, lifted.tau_bar, B(k), u, w);
              uint64_t b = B(k)(a);
              uint64_t c = realizers.C(p, lifted.tau_bar, B(k), u, w);
              uint64_t v = realizers.V(p, lifted.tau_bar, B(k), u);
              size_t lenP = P0.prefix_len(a, b, c);
              size_t lenQ = Q0.prefix_len(u, v, w);
              std::vector<Rat> prefix = pointwise_prefix(
                  space, X, z, std::max(lenP, lenQ));
              if (P0.holds(a, b, c, prefix, p) && !Q0.holds(u, v, w, prefix, p))
                throw PremiseFailed("realizers fail at atom index " +
                                    std::to_string(z));
            }
            uint64_t a = lifted.Ap(p, B, k, u, w);
            uint64_t b = B(k)(a);
            uint64_t c = lifted.Cp(p, B, k, u, w);
            uint64_t v = lifted.Vp(p, B, k, u);
            Event pev = event_of(P0, a, b, c, p);
            Event qev = event_of(Q0, u, v, w, p);
            // the proof's complement inclusion, checked pointwise
            if (!space.evt_subset(space.evt_complement(qev),
                                  space.evt_complement(pev)))
              throw ConclusionFailed("Q^c is not contained in P^c");
            Rat tol = rat_pow2(-static_cast<int>(k));
            bool prem = space.content(space.evt_complement(pev)) <= tol;
            bool conc = space.content(space.evt_complement(qev)) <= tol;
            if (prem) {
              ++rep.premise_holds;
              if (conc)
                ++rep.conclusion_holds;
              else
                throw ConclusionFailed("conclusion inequality failed");
            }
          }
  return rep;
}

CounterexampleBundle counterexample_space() {
  CounterexampleBundle out;
  out.space = ContentSpace::cofinite();
  out.X.at = [](uint64_t) { return MeasurableFn::cofinite_identity(); };
  out.X.uniform_bound = std::nullopt;  // the whole point: no bound exists
  out.P0.name = "trivially-true";
  out.P0.holds = [](uint64_t, uint64_t, uint64_t, const std::vector<Rat>&,
                    const std::vector<Rat>&) { return true; };
  out.P0.prefix_len = [](uint64_t, uint64_t, uint64_t) { return size_t{0}; };
  out.Q0.name = "first-value-dominated";
  out.Q0.holds = [](uint64_t n, uint64_t /*m*/, uint64_t,
                    const std::vector<Rat>& prefix, const std::vector<Rat>&) {
    return !prefix.empty() && Rat(n) >= prefix[0];
  };
  out.Q0.prefix_len = [](uint64_t, uint64_t, uint64_t) { return size_t{1}; };
  return out;
}

nlohmann::json CounterexampleReport::to_json() const {
  nlohmann::json j;
  j["swept"] = swept;
  j["p_side_full"] = p_side_full;
  j["q_side_always_null"] = q_side_always_null;
  j["pointwise_premise_ok"] = pointwise_premise_ok;
  j["conclusion_fails_as_expected"] = p_side_full && q_side_always_null;
  return j;
}

CounterexampleReport counterexample_report(uint64_t limit) {
  CounterexampleBundle bundle = counterexample_space();
  const ContentSpace& sp = bundle.space;
  CounterexampleReport rep;
  for (uint64_t n = 0; n <= limit; ++n)
    for (uint64_t m = 0; m <= limit; ++m) {
      ++rep.swept;
      // Q(n,m) = {z in N : n >= X(0)(z)} = {0..n}, a finite event
      std::vector<uint64_t> members;
      for (uint64_t z = 0; z <= n; ++z) members.push_back(z);
      Event q = sp.finite_event(members);
      for (uint64_t z = 0; z <= limit; ++z) {
        bool in_q = bundle.Q0.holds(n, m, 0, {Rat(z)}, {});
        if (in_q != sp.evt_contains(q, z)) rep.q_side_always_null = false;
      }
      if (sp.content(sp.evt_complement(q)) != 1) rep.q_side_always_null = false;
      // P-side events are all of N (content 1)
      if (sp.content(sp.full_event()) != 1) rep.p_side_full = false;
      // pointwise: for the fixed z-th sequence (constantly z), the realizer
      // v = z itself witnesses Q, so P -> Q holds sequence by sequence
      for (uint64_t z = 0; z <= limit; ++z)
        if (!bundle.Q0.holds(z, m, 0, {Rat(z)}, {}))
          rep.pointwise_premise_ok = false;
    }
  return rep;
}

}  // namespace probwb
