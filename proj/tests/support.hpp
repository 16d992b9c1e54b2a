#pragma once

#include <random>
#include <vector>

#include "asg/subset.hpp"

namespace asg::testing {

// Symmetric interval {lo, ..., hi} taken mod n in a cyclic group.
inline GroupSubset interval(const GroupPtr& g, long lo, long hi) {
  const long n = static_cast<long>(g->order());
  GroupSubset s(g);
  for (long i = lo; i <= hi; ++i) s.insert(static_cast<Element>(((i % n) + n) % n));
  return s;
}

inline GroupSubset random_subset(const GroupPtr& g, std::mt19937_64& rng, double p) {
  std::bernoulli_distribution coin(p);
  GroupSubset s(g);
  for (Element x = 0; x < g->order(); ++x)
    if (coin(rng)) s.insert(x);
  return s;
}

inline GroupSubset random_symmetric(const GroupPtr& g, std::mt19937_64& rng, double p) {
  GroupSubset s = random_subset(g, rng, p);
  s |= set_inverse(s);
  s.insert(g->identity());
  return s;
}

inline std::vector<GroupPtr> small_groups() {
  return {make_cyclic(1), make_cyclic(6),  make_cyclic(12), make_dihedral(4),
          make_dihedral(5), make_direct_product(make_cyclic(2), make_cyclic(4)),
          make_direct_product(make_cyclic(2), make_dihedral(3))};
}

}  // namespace asg::testing
