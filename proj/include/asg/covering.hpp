#pragma once

#include <cstdint>

#include "asg/subset.hpp"

namespace asg {

// Node budget for the exact searches. Defaults to 20M nodes, or to the value
// of the ASG_BUDGET environment variable when it is set.
struct SearchConfig {
  std::uint64_t budget = default_search_budget();

  static std::uint64_t default_search_budget();
};

// covered ⊆ translates · coverer, size = |translates|.
struct CoverCertificate {
  GroupSubset covered;
  GroupSubset coverer;
  GroupSubset translates;
  std::size_t size = 0;
};

// The translates {c · block : c ∈ centers} are pairwise disjoint, centers ⊆ base.
struct PackingCertificate {
  GroupSubset base;
  GroupSubset block;
  GroupSubset centers;
  std::size_t size = 0;
};

// Minimum number of left translates of y covering x. y must be symmetric
// (NotSymmetric otherwise); the returned translator set is the
// lexicographically least among all minimum covers.
CoverCertificate covering_number(const GroupSubset& x, const GroupSubset& y,
                                 const SearchConfig& cfg = {});

// Same as covering_number without the symmetry requirement: candidate
// translators range over x · y^-1.
CoverCertificate minimum_cover(const GroupSubset& x, const GroupSubset& y,
                               const SearchConfig& cfg = {});

// [x : y], the largest number of centers in x with pairwise disjoint
// y-translates. Centers giving the same translate are merged before the
// independent-set search; the result is the lexicographically least optimum.
PackingCertificate packing_index(const GroupSubset& x, const GroupSubset& y,
                                 const SearchConfig& cfg = {});

// Greedy inclusion-maximal disjoint family, scanning x in increasing order.
PackingCertificate maximal_disjoint_family(const GroupSubset& x, const GroupSubset& y);

bool certificate_valid(const CoverCertificate& c);
bool certificate_valid(const PackingCertificate& p);

// Checks |pack| <= |cover| for a packing of base by block and a cover of base
// by the same (symmetric) block. Throws PreconditionFailed when the inputs do
// not fit together and LemmaViolation when the inequality fails.
bool check_cover_bound(const PackingCertificate& pack, const CoverCertificate& cover);

}  // namespace asg
