#pragma once

// Shared seeded generators for the test suites: spaces with rational
// weights (zero-weight atoms allowed so null events exist), measurable
// functions, event sequences.

#include "probwb/contentspace.hpp"
#include "probwb/rng.hpp"

#include <string>
#include <vector>

namespace probwb::testgen {

inline std::vector<Rat> random_weights(SplitMix& rng, size_t n,
                                       bool allow_zero = true) {
  // numerators over a common denominator, normalized to sum 1
  std::vector<Nat> nums(n);
  Nat total = 0;
  for (size_t i = 0; i < n; ++i) {
    uint64_t v = rng.below(16) + (allow_zero ? 0 : 1);
    if (!allow_zero && v == 0) v = 1;
    nums[i] = v;
    total += nums[i];
  }
  if (total == 0) {
    nums[0] = 1;
    total = 1;
  }
  std::vector<Rat> out;
  for (size_t i = 0; i < n; ++i) out.emplace_back(nums[i], total);
  return out;
}

inline ContentSpace random_space(uint64_t seed, size_t max_atoms = 4,
                                 bool allow_zero = true) {
  SplitMix rng(splitmix64(seed));
  size_t n = 1 + rng.below(max_atoms);
  std::vector<std::string> atoms;
  for (size_t i = 0; i < n; ++i) atoms.push_back("a" + std::to_string(i));
  return ContentSpace::powerset(atoms, random_weights(rng, n, allow_zero));
}

inline Rat random_rat(SplitMix& rng, int64_t lo, int64_t hi, uint64_t maxden = 16) {
  int64_t span = hi - lo;
  Nat den = Nat(1 + rng.below(maxden));
  Nat num = Nat(rng.below(static_cast<uint64_t>(span) *
                          den.convert_to<uint64_t>() + 1)) +
            lo * den;
  return Rat(num, den);
}

inline MeasurableFn random_fn(SplitMix& rng, const ContentSpace& space,
                              int64_t lo = -4, int64_t hi = 4) {
  std::vector<Rat> vals;
  for (size_t i = 0; i < space.atom_count(); ++i)
    vals.push_back(random_rat(rng, lo, hi));
  return MeasurableFn::on_atoms(vals);
}

// an eventually-constant event sequence with the given horizon
inline EventSeq random_seq(SplitMix& rng, const ContentSpace& space,
                           uint64_t horizon) {
  auto events = std::make_shared<std::vector<Event>>();
  const auto& alg = space.algebra();
  for (uint64_t i = 0; i <= horizon; ++i)
    events->push_back(alg[rng.below(alg.size())]);
  return EventSeq{[events, horizon](uint64_t n) {
                    return (*events)[n > horizon ? horizon : n];
                  },
                  horizon};
}

}  // namespace probwb::testgen
