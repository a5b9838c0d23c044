#pragma once

// Executable models: finite sample spaces (and the finite/cofinite space
// over N) carrying an algebra of events and an exactly rational probability
// content, together with the event-sequence machinery, intensional interval
// membership, measurable functions, integration and the Specker-style
// no-rate demonstration.

#include "probwb/rat.hpp"
#include "probwb/reals.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace probwb {

enum class Backend { ExplicitFinite, Cofinite };

// An event of the algebra.  Explicit events are bitmasks over the atom
// list; cofinite-backend events are a finite set of naturals or the
// complement of one.  Equality is extensional.
struct Event {
  Backend backend = Backend::ExplicitFinite;
  uint64_t bits = 0;
  bool complemented = false;
  std::vector<uint64_t> finite;

  bool operator==(const Event& other) const;
};

struct SpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotClosed : SpaceError { using SpaceError::SpaceError; };
struct BadContent : SpaceError { using SpaceError::SpaceError; };
struct NonAdditive : SpaceError { using SpaceError::SpaceError; };
struct NotStabilized : SpaceError { using SpaceError::SpaceError; };
struct NotMeasurable : SpaceError { using SpaceError::SpaceError; };
struct BadWeights : SpaceError { using SpaceError::SpaceError; };
struct SearchExhausted : SpaceError { using SpaceError::SpaceError; };

class ContentSpace {
 public:
  // Powerset algebra over named atoms with the given point weights.
  static ContentSpace powerset(std::vector<std::string> atoms,
                               std::vector<Rat> weights);
  // Algebra generated by the given events (as atom-name sets), closed under
  // union and complement; content induced by the point weights.
  static ContentSpace generated(std::vector<std::string> atoms,
                                std::vector<std::vector<std::string>> generators,
                                std::vector<Rat> weights,
                                size_t closure_cap = 1u << 16);
  // The finite/cofinite algebra over N with the 0/1 content.
  static ContentSpace cofinite();

  // Validation path for explicitly tabulated contents: checks the content
  // axioms exhaustively over the algebra (additivity included) and fails
  // with BadContent/NonAdditive instead of inducing from point weights.
  static ContentSpace with_event_contents(
      std::vector<std::string> atoms,
      std::vector<std::vector<std::string>> generators,
      const std::map<uint64_t, Rat>& contents);

  static ContentSpace from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  Backend backend() const { return backend_; }
  size_t atom_count() const { return atoms_.size(); }
  const std::vector<std::string>& atom_names() const { return atoms_; }
  // Designated nonemptiness witness (the constant c_Omega): first atom.
  size_t designated_atom() const { return 0; }

  // Full event list (explicit backend only).
  const std::vector<Event>& algebra() const;
  // Partition blocks of the algebra (minimal nonempty events).
  const std::vector<Event>& algebra_blocks() const;
  bool in_algebra(const Event& e) const;

  Event empty_event() const;
  Event full_event() const;
  Event atom_event(size_t atom) const;        // explicit backend
  Event finite_event(std::vector<uint64_t> members) const;  // cofinite backend

  Event evt_union(const Event& a, const Event& b) const;
  Event evt_intersect(const Event& a, const Event& b) const;
  Event evt_complement(const Event& a) const;
  bool evt_subset(const Event& a, const Event& b) const;
  bool evt_contains(const Event& a, uint64_t point) const;
  bool evt_empty(const Event& a) const;

  Rat content(const Event& e) const;
  const Rat& point_weight(size_t atom) const { return weights_[atom]; }

  ContentSpace() = default;  // placeholder value; build via the factories

 private:
  void index_algebra();

  Backend backend_ = Backend::ExplicitFinite;
  std::vector<std::string> atoms_;
  std::vector<Rat> weights_;
  bool powerset_ = true;
  std::vector<Event> algebra_;
  std::vector<Event> blocks_;
  std::vector<uint64_t> algebra_masks_;  // sorted, for membership tests
  std::optional<std::map<uint64_t, Rat>> event_contents_;
};

// A sequence of events: total generator plus an optional declared horizon
// by which the partial unions stabilize (verified when a countable
// operation is invoked).
struct EventSeq {
  std::function<Event(uint64_t)> at;
  std::optional<uint64_t> stabilization_horizon;
};

// Union of A(n..m); empty when m < n.
Event finite_union(const ContentSpace& space, const EventSeq& seq, uint64_t n,
                   uint64_t m);
Event finite_intersection(const ContentSpace& space, const EventSeq& seq,
                          uint64_t n, uint64_t m);

// Union of the whole sequence, computed at the declared horizon; the
// horizon is re-verified over [H, verify_to] and NotStabilized is raised if
// the partial unions still grow.
Event countable_union(const ContentSpace& space, const EventSeq& seq,
                      std::optional<uint64_t> verify_to = std::nullopt);
Event countable_intersection(const ContentSpace& space, const EventSeq& seq,
                             std::optional<uint64_t> verify_to = std::nullopt);

// A|^: pairwise disjoint with the same partial unions.
EventSeq disjointify(const ContentSpace& space, const EventSeq& seq);

// Least N <= search_bound with |P(A(n)) - P(A(m))| < 2^{-k} for all
// N <= n,m <= search_bound, for a nondecreasing sequence (checked).
uint64_t monotone_cauchy_modulus(const ContentSpace& space, const EventSeq& seq,
                                 unsigned k, uint64_t search_bound);

// Least N <= search_bound with P(U_{i<=n} A(i) \ U_{i<=N} A(i)) < threshold
// for all n <= search_bound.  The scan underlying the combinatorial
// witness construction.
uint64_t stabilization_index(const ContentSpace& space, const EventSeq& seq,
                             const Rat& threshold, uint64_t search_bound);

enum class Tri { IN, OUT, UNKNOWN };

// Intensional membership of r in [a,b]: IN on syntactic identity with an
// endpoint or on a verified strict interior position at precision k; OUT on
// a verified exterior position; UNKNOWN otherwise.
Tri interval_closed(const RealCode& a, const RealCode& b, const RealCode& r,
                    unsigned k);
// r in [a,b) iff r in [a,b] and r not in [b,b].
Tri interval_halfopen(const RealCode& a, const RealCode& b, const RealCode& r,
                      unsigned k);

// A bounded function into the rationals, atom-wise on explicit spaces and
// eventually constant (or the identity embedding, for the unbounded
// counterexample) on the cofinite space.
struct MeasurableFn {
  enum class Tail { Constant, Identity };

  std::vector<Rat> values;  // explicit backend: one value per atom

  // cofinite backend
  std::map<uint64_t, Rat> exceptional;
  Tail tail = Tail::Constant;
  Rat tail_value = Rat(0);

  std::optional<Nat> bound;  // natural with |f| <= bound, when one exists

  Rat value_at(const ContentSpace& space, uint64_t point) const;

  static MeasurableFn on_atoms(std::vector<Rat> values);
  static MeasurableFn cofinite_constant(Rat tail_value,
                                        std::map<uint64_t, Rat> exceptional = {});
  static MeasurableFn cofinite_identity();
};

// The event {x : a <= f(x) <= b}.
Event preimage(const ContentSpace& space, const MeasurableFn& f, const Rat& a,
               const Rat& b);

Rat sup_norm(const ContentSpace& space, const MeasurableFn& f);

// Sum over algebra blocks of value * content; requires f constant on each
// block (the finite-model reading of weak Borel-measurability).
Rat integral(const ContentSpace& space, const MeasurableFn& f);

struct SimpleApprox {
  std::vector<std::pair<Rat, Event>> pieces;  // nonempty grid cells only
  Rat defect;                                 // integral of |f - s|
};

// Grid simple function at resolution 2^{-k} over [-b, b] with half-open
// cells and a closed top cell; the defect is at most 2^{-k}.
SimpleApprox simple_approx(const ContentSpace& space, const MeasurableFn& f,
                           unsigned k);

struct SpeckerReport {
  ContentSpace space;       // atoms 0..n_used-1 plus the infinity marker
  std::vector<Rat> partial; // a_n
  std::vector<Rat> gaps;    // a - a_n, the contents left above each prefix
  Rat total;                // a = sum of the used weights
};

// Truncation of the discrete no-computable-rate space: weights r_i on the
// natural-number part, 1 - sum on the marker; the gap sequence demonstrates
// monotone bounded convergence of the partial sums.
SpeckerReport specker_demo(const std::vector<Rat>& r, uint64_t horizon);

}  // namespace probwb
