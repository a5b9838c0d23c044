#include "probwb/contentspace.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace probwb {

namespace {

std::vector<uint64_t> sorted_unique(std::vector<uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

std::vector<uint64_t> set_union_vec(const std::vector<uint64_t>& a,
                                    const std::vector<uint64_t>& b) {
  std::vector<uint64_t> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<uint64_t> set_intersect_vec(const std::vector<uint64_t>& a,
                                        const std::vector<uint64_t>& b) {
  std::vector<uint64_t> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

std::vector<uint64_t> set_diff_vec(const std::vector<uint64_t>& a,
                                   const std::vector<uint64_t>& b) {
  std::vector<uint64_t> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

}  // namespace

bool Event::operator==(const Event& other) const {
  if (backend != other.backend) return false;
  if (backend == Backend::ExplicitFinite) return bits == other.bits;
  return complemented == other.complemented && finite == other.finite;
}

ContentSpace ContentSpace::powerset(std::vector<std::string> atoms,
                                    std::vector<Rat> weights) {
  if (atoms.empty()) throw BadContent("a space needs at least one atom");
  if (atoms.size() != weights.size())
    throw BadContent("one weight per atom required");
  if (atoms.size() > 64) throw NotClosed("explicit spaces are capped at 64 atoms");
  Rat total(0);
  for (const Rat& w : weights) {
    if (w < 0) throw BadContent("negative weight");
    total += w;
  }
  if (total != 1) throw BadContent("weights must sum to 1, got " + format_rat(total));
  ContentSpace s;
  s.backend_ = Backend::ExplicitFinite;
  s.atoms_ = std::move(atoms);
  s.weights_ = std::move(weights);
  s.powerset_ = true;
  if (s.atoms_.size() <= 12) {
    uint64_t n = uint64_t(1) << s.atoms_.size();
    s.algebra_.reserve(n);
    for (uint64_t m = 0; m < n; ++m)
      s.algebra_.push_back(Event{Backend::ExplicitFinite, m, false, {}});
  }
  for (size_t i = 0; i < s.atoms_.size(); ++i)
    s.blocks_.push_back(Event{Backend::ExplicitFinite, uint64_t(1) << i, false, {}});
  return s;
}

ContentSpace ContentSpace::generated(
    std::vector<std::string> atoms,
    std::vector<std::vector<std::string>> generators, std::vector<Rat> weights,
    size_t closure_cap) {
  ContentSpace s = powerset(atoms, std::move(weights));
  s.powerset_ = false;
  s.algebra_.clear();
  s.blocks_.clear();

  auto mask_of = [&](const std::vector<std::string>& names) {
    uint64_t m = 0;
    for (const auto& name : names) {
      auto it = std::find(s.atoms_.begin(), s.atoms_.end(), name);
      if (it == s.atoms_.end()) throw BadContent("unknown atom '" + name + "'");
      m |= uint64_t(1) << (it - s.atoms_.begin());
    }
    return m;
  };

  uint64_t full = s.atoms_.size() == 64
                      ? ~uint64_t(0)
                      : (uint64_t(1) << s.atoms_.size()) - 1;
  std::set<uint64_t> closure = {0};
  for (const auto& g : generators) closure.insert(mask_of(g));
  // close under complement and pairwise union
  for (;;) {
    std::set<uint64_t> next = closure;
    for (uint64_t a : closure) {
      next.insert(full & ~a);
      for (uint64_t b : closure) next.insert(a | b);
    }
    if (next.size() > closure_cap)
      throw NotClosed("algebra closure exceeds cap");
    if (next.size() == closure.size()) break;
    closure.swap(next);
  }
  for (uint64_t m : closure)
    s.algebra_.push_back(Event{Backend::ExplicitFinite, m, false, {}});
  s.index_algebra();
  return s;
}

ContentSpace ContentSpace::with_event_contents(
    std::vector<std::string> atoms,
    std::vector<std::vector<std::string>> generators,
    const std::map<uint64_t, Rat>& contents) {
  std::vector<Rat> dummy(atoms.size(), Rat(0));
  dummy[0] = Rat(1);
  ContentSpace s = generated(std::move(atoms), std::move(generators), dummy);
  s.weights_.clear();
  s.event_contents_ = contents;
  uint64_t full = s.atoms_.size() == 64
                      ? ~uint64_t(0)
                      : (uint64_t(1) << s.atoms_.size()) - 1;
  for (const Event& e : s.algebra_) {
    auto it = contents.find(e.bits);
    if (it == contents.end()) throw BadContent("missing content for an event");
    if (it->second < 0 || it->second > 1)
      throw BadContent("content outside [0,1]");
  }
  if (contents.at(0) != 0) throw BadContent("P(empty) must be 0");
  if (contents.at(full) != 1) throw BadContent("P(full) must be 1");
  for (const Event& a : s.algebra_)
    for (const Event& b : s.algebra_) {
      if (!s.in_algebra(s.evt_union(a, b)) ||
          !s.in_algebra(s.evt_intersect(a, b)))
        throw NotClosed("algebra not closed");
      Rat lhs = contents.at(a.bits | b.bits);
      Rat rhs = contents.at(a.bits) + contents.at(b.bits) -
                contents.at(a.bits & b.bits);
      if (lhs != rhs) throw NonAdditive("content violates the union formula");
    }
  return s;
}

ContentSpace ContentSpace::cofinite() {
  ContentSpace s;
  s.backend_ = Backend::Cofinite;
  s.atoms_ = {"n0"};  // the designated witness is the natural number 0
  s.powerset_ = false;
  return s;
}

void ContentSpace::index_algebra() {
  algebra_masks_.clear();
  for (const Event& e : algebra_) algebra_masks_.push_back(e.bits);
  std::sort(algebra_masks_.begin(), algebra_masks_.end());
  // blocks: for each atom, intersect all events containing it
  blocks_.clear();
  std::set<uint64_t> seen;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    uint64_t blk = atoms_.size() == 64 ? ~uint64_t(0)
                                       : (uint64_t(1) << atoms_.size()) - 1;
    for (const Event& e : algebra_)
      if (e.bits >> i & 1) blk &= e.bits;
    if (seen.insert(blk).second)
      blocks_.push_back(Event{Backend::ExplicitFinite, blk, false, {}});
  }
}

const std::vector<Event>& ContentSpace::algebra() const {
  if (backend_ == Backend::Cofinite)
    throw SpaceError("the cofinite algebra is not enumerable");
  if (algebra_.empty())
    throw SpaceError("algebra too large to enumerate");
  return algebra_;
}

const std::vector<Event>& ContentSpace::algebra_blocks() const {
  if (backend_ == Backend::Cofinite)
    throw SpaceError("the cofinite algebra is not enumerable");
  return blocks_;
}

bool ContentSpace::in_algebra(const Event& e) const {
  if (backend_ == Backend::Cofinite) return e.backend == Backend::Cofinite;
  if (e.backend != Backend::ExplicitFinite) return false;
  if (powerset_) return true;
  return std::binary_search(algebra_masks_.begin(), algebra_masks_.end(), e.bits);
}

Event ContentSpace::empty_event() const {
  if (backend_ == Backend::Cofinite) return Event{Backend::Cofinite, 0, false, {}};
  return Event{Backend::ExplicitFinite, 0, false, {}};
}

Event ContentSpace::full_event() const {
  if (backend_ == Backend::Cofinite) return Event{Backend::Cofinite, 0, true, {}};
  uint64_t full = atoms_.size() == 64 ? ~uint64_t(0)
                                      : (uint64_t(1) << atoms_.size()) - 1;
  return Event{Backend::ExplicitFinite, full, false, {}};
}

Event ContentSpace::atom_event(size_t atom) const {
  if (backend_ == Backend::Cofinite)
    return Event{Backend::Cofinite, 0, false, {atom}};
  return Event{Backend::ExplicitFinite, uint64_t(1) << atom, false, {}};
}

Event ContentSpace::finite_event(std::vector<uint64_t> members) const {
  if (backend_ != Backend::Cofinite)
    throw SpaceError("finite_event is a cofinite-backend constructor");
  return Event{Backend::Cofinite, 0, false, sorted_unique(std::move(members))};
}

Event ContentSpace::evt_union(const Event& a, const Event& b) const {
  if (backend_ == Backend::ExplicitFinite)
    return Event{Backend::ExplicitFinite, a.bits | b.bits, false, {}};
  if (!a.complemented && !b.complemented)
    return Event{Backend::Cofinite, 0, false, set_union_vec(a.finite, b.finite)};
  if (a.complemented && b.complemented)
    return Event{Backend::Cofinite, 0, true, set_intersect_vec(a.finite, b.finite)};
  const Event& fin = a.complemented ? b : a;
  const Event& cof = a.complemented ? a : b;
  return Event{Backend::Cofinite, 0, true, set_diff_vec(cof.finite, fin.finite)};
}

Event ContentSpace::evt_complement(const Event& a) const {
  if (backend_ == Backend::ExplicitFinite) {
    uint64_t full = atoms_.size() == 64 ? ~uint64_t(0)
                                        : (uint64_t(1) << atoms_.size()) - 1;
    return Event{Backend::ExplicitFinite, full & ~a.bits, false, {}};
  }
  return Event{Backend::Cofinite, 0, !a.complemented, a.finite};
}

Event ContentSpace::evt_intersect(const Event& a, const Event& b) const {
  return evt_complement(evt_union(evt_complement(a), evt_complement(b)));
}

bool ContentSpace::evt_subset(const Event& a, const Event& b) const {
  if (backend_ == Backend::ExplicitFinite) return (a.bits & ~b.bits) == 0;
  return evt_empty(evt_intersect(a, evt_complement(b)));
}

bool ContentSpace::evt_contains(const Event& a, uint64_t point) const {
  if (backend_ == Backend::ExplicitFinite) return a.bits >> point & 1;
  bool member = std::binary_search(a.finite.begin(), a.finite.end(), point);
  return a.complemented ? !member : member;
}

bool ContentSpace::evt_empty(const Event& a) const {
  if (backend_ == Backend::ExplicitFinite) return a.bits == 0;
  return !a.complemented && a.finite.empty();
}

Rat ContentSpace::content(const Event& e) const {
  if (backend_ == Backend::Cofinite) return e.complemented ? Rat(1) : Rat(0);
  if (event_contents_) return event_contents_->at(e.bits);
  Rat total(0);
  for (size_t i = 0; i < atoms_.size(); ++i)
    if (e.bits >> i & 1) total += weights_[i];
  return total;
}

ContentSpace ContentSpace::from_json(const nlohmann::json& j) {
  if (j.contains("backend") && j["backend"] == "cofinite") return cofinite();
  std::vector<std::string> atoms = j.at("atoms").get<std::vector<std::string>>();
  std::vector<Rat> weights;
  for (const auto& a : atoms)
    weights.push_back(parse_rat(j.at("weights").at(a).get<std::string>()));
  if (j.contains("algebra") && j["algebra"].is_array()) {
    auto gens = j["algebra"].get<std::vector<std::vector<std::string>>>();
    return generated(std::move(atoms), std::move(gens), std::move(weights));
  }
  return powerset(std::move(atoms), std::move(weights));
}

nlohmann::json ContentSpace::to_json() const {
  nlohmann::json j;
  if (backend_ == Backend::Cofinite) {
    j["backend"] = "cofinite";
    return j;
  }
  j["atoms"] = atoms_;
  nlohmann::json w = nlohmann::json::object();
  for (size_t i = 0; i < atoms_.size(); ++i)
    w[atoms_[i]] = format_rat(weights_[i]);
  j["weights"] = w;
  if (powerset_) {
    j["algebra"] = "powerset";
  } else {
    std::vector<std::vector<std::string>> gens;
    for (const Event& e : algebra_) {
      std::vector<std::string> names;
      for (size_t i = 0; i < atoms_.size(); ++i)
        if (e.bits >> i & 1) names.push_back(atoms_[i]);
      gens.push_back(std::move(names));
    }
    j["algebra"] = gens;
  }
  return j;
}

Event finite_union(const ContentSpace& space, const EventSeq& seq, uint64_t n,
                   uint64_t m) {
  if (m < n) return space.empty_event();
  Event acc = seq.at(n);
  for (uint64_t i = n + 1; i <= m; ++i) acc = space.evt_union(acc, seq.at(i));
  return acc;
}

Event finite_intersection(const ContentSpace& space, const EventSeq& seq,
                          uint64_t n, uint64_t m) {
  EventSeq comp{[&](uint64_t i) { return space.evt_complement(seq.at(i)); },
                seq.stabilization_horizon};
  return space.evt_complement(finite_union(space, comp, n, m));
}

Event countable_union(const ContentSpace& space, const EventSeq& seq,
                      std::optional<uint64_t> verify_to) {
  if (!seq.stabilization_horizon)
    throw NotStabilized("no stabilization horizon declared");
  uint64_t h = *seq.stabilization_horizon;
  Event u = finite_union(space, seq, 0, h);
  uint64_t check_to = verify_to.value_or(h + 8);
  for (uint64_t n = h + 1; n <= check_to; ++n)
    if (!space.evt_subset(seq.at(n), u))
      throw NotStabilized("partial unions still grow past the declared horizon");
  return u;
}

Event countable_intersection(const ContentSpace& space, const EventSeq& seq,
                             std::optional<uint64_t> verify_to) {
  EventSeq comp{[&space, seq](uint64_t i) { return space.evt_complement(seq.at(i)); },
                seq.stabilization_horizon};
  return space.evt_complement(countable_union(space, comp, verify_to));
}

EventSeq disjointify(const ContentSpace& space, const EventSeq& seq) {
  // shared prefix-union cache so repeated queries stay linear
  auto prefix = std::make_shared<std::vector<Event>>();
  auto at = [&space, seq, prefix](uint64_t n) {
    while (prefix->size() <= n) {
      uint64_t i = prefix->size();
      Event u = i == 0 ? seq.at(0) : space.evt_union(prefix->back(), seq.at(i));
      prefix->push_back(u);
    }
    if (n == 0) return seq.at(0);
    return space.evt_intersect(seq.at(n),
                               space.evt_complement((*prefix)[n - 1]));
  };
  return EventSeq{at, seq.stabilization_horizon};
}

uint64_t monotone_cauchy_modulus(const ContentSpace& space, const EventSeq& seq,
                                 unsigned k, uint64_t search_bound) {
  for (uint64_t n = 0; n < search_bound; ++n)
    if (!space.evt_subset(seq.at(n), seq.at(n + 1)))
      throw SpaceError("sequence is not nondecreasing");
  Rat top = space.content(seq.at(search_bound));
  Rat tol = rat_pow2(-static_cast<int>(k));
  for (uint64_t n = 0; n <= search_bound; ++n)
    if (top - space.content(seq.at(n)) < tol) return n;
  throw SearchExhausted("no modulus within the search bound");  // unreachable
}

uint64_t stabilization_index(const ContentSpace& space, const EventSeq& seq,
                             const Rat& threshold, uint64_t search_bound) {
  if (threshold <= 0) throw SearchExhausted("threshold must be positive");
  Rat partial(0);
  std::vector<Rat> contents;
  Event u = space.empty_event();
  for (uint64_t n = 0; n <= search_bound; ++n) {
    u = space.evt_union(u, seq.at(n));
    contents.push_back(space.content(u));
  }
  const Rat& top = contents.back();
  for (uint64_t n = 0; n <= search_bound; ++n)
    if (top - contents[n] < threshold) return n;
  throw SearchExhausted("no stabilization index within the search bound");
}

Tri interval_closed(const RealCode& a, const RealCode& b, const RealCode& r,
                    unsigned k) {
  if (r.same_stream(a) || r.same_stream(b)) return Tri::IN;
  Cmp ra = compare_upto(r, a, k);
  Cmp rb = compare_upto(r, b, k);
  if (ra == Cmp::LT || rb == Cmp::GT) return Tri::OUT;
  if (ra == Cmp::GT && rb == Cmp::LT) return Tri::IN;
  return Tri::UNKNOWN;
}

Tri interval_halfopen(const RealCode& a, const RealCode& b, const RealCode& r,
                      unsigned k) {
  Tri closed = interval_closed(a, b, r, k);
  Tri at_b = interval_closed(b, b, r, k);
  if (closed == Tri::IN && at_b == Tri::OUT) return Tri::IN;
  if (closed == Tri::OUT || at_b == Tri::IN) return Tri::OUT;
  return Tri::UNKNOWN;
}

Rat MeasurableFn::value_at(const ContentSpace& space, uint64_t point) const {
  if (space.backend() == Backend::ExplicitFinite) return values.at(point);
  auto it = exceptional.find(point);
  if (it != exceptional.end()) return it->second;
  if (tail == Tail::Identity) return Rat(point);
  return tail_value;
}

MeasurableFn MeasurableFn::on_atoms(std::vector<Rat> values) {
  MeasurableFn f;
  f.values = std::move(values);
  Rat m(0);
  for (const Rat& v : f.values) m = std::max(m, rat_abs(v));
  f.bound = rat_ceil(m);
  return f;
}

MeasurableFn MeasurableFn::cofinite_constant(Rat tail_value,
                                             std::map<uint64_t, Rat> exceptional) {
  MeasurableFn f;
  f.tail = Tail::Constant;
  f.tail_value = std::move(tail_value);
  f.exceptional = std::move(exceptional);
  Rat m = rat_abs(f.tail_value);
  for (const auto& [_, v] : f.exceptional) m = std::max(m, rat_abs(v));
  f.bound = rat_ceil(m);
  return f;
}

MeasurableFn MeasurableFn::cofinite_identity() {
  MeasurableFn f;
  f.tail = Tail::Identity;
  f.bound = std::nullopt;
  return f;
}

Event preimage(const ContentSpace& space, const MeasurableFn& f, const Rat& a,
               const Rat& b) {
  if (a > b) throw SpaceError("preimage needs a <= b");
  if (space.backend() == Backend::ExplicitFinite) {
    uint64_t bits = 0;
    for (size_t i = 0; i < space.atom_count(); ++i) {
      const Rat& v = f.values.at(i);
      if (a <= v && v <= b) bits |= uint64_t(1) << i;
    }
    return Event{Backend::ExplicitFinite, bits, false, {}};
  }
  bool tail_in;
  std::vector<uint64_t> members;
  if (f.tail == MeasurableFn::Tail::Constant) {
    tail_in = a <= f.tail_value && f.tail_value <= b;
  } else {
    tail_in = false;
    if (b >= 0) {
      Nat lo = a <= 0 ? Nat(0) : rat_ceil(a);
      Nat hi = rat_floor(b);
      for (Nat p = lo; p <= hi; ++p) {
        uint64_t pt = p.convert_to<uint64_t>();
        if (!f.exceptional.count(pt)) members.push_back(pt);
      }
    }
  }
  if (tail_in) {
    std::vector<uint64_t> out;  // complement of the failing exceptionals
    for (const auto& [pt, v] : f.exceptional)
      if (!(a <= v && v <= b)) out.push_back(pt);
    return Event{Backend::Cofinite, 0, true, sorted_unique(std::move(out))};
  }
  for (const auto& [pt, v] : f.exceptional)
    if (a <= v && v <= b) members.push_back(pt);
  return Event{Backend::Cofinite, 0, false, sorted_unique(std::move(members))};
}

Rat sup_norm(const ContentSpace& space, const MeasurableFn& f) {
  if (space.backend() == Backend::ExplicitFinite) {
    Rat m(0);
    for (const Rat& v : f.values) m = std::max(m, rat_abs(v));
    return m;
  }
  if (f.tail == MeasurableFn::Tail::Identity)
    throw SpaceError("the identity embedding is unbounded");
  Rat m = rat_abs(f.tail_value);
  for (const auto& [_, v] : f.exceptional) m = std::max(m, rat_abs(v));
  return m;
}

Rat integral(const ContentSpace& space, const MeasurableFn& f) {
  if (space.backend() == Backend::Cofinite) {
    if (f.tail == MeasurableFn::Tail::Identity)
      throw NotMeasurable("the identity embedding is not integrable");
    return f.tail_value;  // every finite set is null
  }
  Rat total(0);
  for (const Event& blk : space.algebra_blocks()) {
    std::optional<Rat> v;
    for (size_t i = 0; i < space.atom_count(); ++i) {
      if (!space.evt_contains(blk, i)) continue;
      if (!v) {
        v = f.values.at(i);
      } else if (*v != f.values.at(i)) {
        throw NotMeasurable("function is not constant on an algebra block");
      }
    }
    if (v) total += *v * space.content(blk);
  }
  return total;
}

SimpleApprox simple_approx(const ContentSpace& space, const MeasurableFn& f,
                           unsigned k) {
  if (!f.bound) throw NotMeasurable("simple_approx needs a bounded function");
  Nat b = *f.bound;
  if (b == 0) b = 1;
  Rat step = rat_pow2(-static_cast<int>(k));
  Nat cells = 2 * b * nat_pow2(k);

  auto cell_of = [&](const Rat& v) {
    Nat i = rat_floor((v + Rat(b)) / step);
    if (i < 0) i = 0;
    if (i >= cells) i = cells - 1;  // top cell is closed
    return i;
  };

  std::map<Nat, std::vector<size_t>> groups;
  for (size_t x = 0; x < space.atom_count(); ++x)
    groups[cell_of(f.values.at(x))].push_back(x);

  SimpleApprox out;
  std::vector<Rat> diff(space.atom_count());
  for (const auto& [i, atoms] : groups) {
    Rat coeff = -Rat(b) + Rat(i) * step;
    uint64_t bits = 0;
    for (size_t x : atoms) {
      bits |= uint64_t(1) << x;
      diff[x] = rat_abs(f.values.at(x) - coeff);
    }
    out.pieces.emplace_back(coeff, Event{Backend::ExplicitFinite, bits, false, {}});
  }
  MeasurableFn residual = MeasurableFn::on_atoms(diff);
  out.defect = integral(space, residual);
  return out;
}

SpeckerReport specker_demo(const std::vector<Rat>& r, uint64_t horizon) {
  size_t used = std::min<size_t>(horizon, r.size());
  Rat total(0);
  for (size_t i = 0; i < used; ++i) {
    if (r[i] <= 0) throw BadWeights("weights must be positive");
    total += r[i];
    if (total > 1) throw BadWeights("partial sums exceed 1");
  }
  std::vector<std::string> atoms;
  std::vector<Rat> weights;
  for (size_t i = 0; i < used; ++i) {
    atoms.push_back(std::to_string(i));
    weights.push_back(r[i]);
  }
  atoms.push_back("inf");
  weights.push_back(Rat(1) - total);

  SpeckerReport rep;
  rep.space = ContentSpace::powerset(std::move(atoms), std::move(weights));
  rep.total = total;
  Rat partial(0);
  for (size_t i = 0; i < used; ++i) {
    partial += r[i];
    rep.partial.push_back(partial);
    rep.gaps.push_back(total - partial);
  }
  return rep;
}

}  // namespace probwb
