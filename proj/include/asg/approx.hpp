#pragma once

#include <optional>
#include <vector>

#include "asg/covering.hpp"

namespace asg {

// A symmetric identity-containing carrier A with A·A ⊆ W·A, |W| = doubling_k.
struct ApproximateSubgroup {
  GroupSubset carrier;
  std::size_t doubling_k = 0;
  GroupSubset doubling_witness;
};

// left ⊆ z0 · right and right ⊆ z1 · left, n = max(|z0|, |z1|).
struct CommensurabilityCertificate {
  std::size_t n = 0;
  GroupSubset z0;
  GroupSubset z1;
};

struct Family {
  std::vector<ApproximateSubgroup> members;
  std::size_t k_uniform = 0;
  std::size_t n_uniform = 0;
  // pairwise[i][j] relates members[i] (left) to members[j] (right).
  std::vector<std::vector<CommensurabilityCertificate>> pairwise;

  std::size_t size() const { return members.size(); }
  const GroupPtr& group() const { return members.front().carrier.group(); }
};

// Throws MissingIdentity / NotSymmetric.
void require_approx_shape(const GroupSubset& a);

// Exact minimal doubling constant of a, with the least witness.
ApproximateSubgroup minimal_doubling(const GroupSubset& a, const SearchConfig& cfg = {});

CommensurabilityCertificate commensurability(const ApproximateSubgroup& x, const ApproximateSubgroup& y,
                                             const SearchConfig& cfg = {});

// Computes K as the largest member doubling and N as the largest pairwise
// commensurability. Member failures are rethrown with the member index.
Family family_validate(const std::vector<GroupSubset>& sets, const SearchConfig& cfg = {});

// The family of squares X·X, revalidated exactly. Throws LemmaViolation if
// K(X²) > K³ or N(X²) > N·K.
Family family_square(const Family& f, const SearchConfig& cfg = {});

// Translate sets for the product T = X_{p0} ··· X_{p(n-1)} against member x,
// built the way the product-commensurability argument builds them:
// T ⊆ forward · X with forward = N_0 K_0 ··· N_{n-2} K_{n-2} N_{n-1}, and
// X ⊆ backward · T. The optimal covers are reported alongside.
struct ProductWitness {
  GroupSubset product;
  GroupSubset forward;
  GroupSubset backward;
  std::size_t bound = 0;  // (N K)^(n-1) N, saturating
  std::size_t optimal_forward = 0;
  std::size_t optimal_backward = 0;
  bool holds = false;
};

ProductWitness product_commensurability_witness(const Family& f, const std::vector<std::size_t>& parts,
                                                std::size_t x, const SearchConfig& cfg = {});

// E = X_1 · X_0 where X_0 is the greedy maximal disjoint family of
// y-translates inside x and X_1 is x's doubling witness; then
// XX ⊆ E (XX ∩ YY) with |E| <= K·N.
struct SquareIntersectionWitness {
  GroupSubset e;
  GroupSubset x0;
  GroupSubset x1;
  std::size_t bound = 0;
  bool size_ok = false;
  bool containment_ok = false;
  bool packing_ok = false;  // |X_0| <= |Z_0|
};

SquareIntersectionWitness xx_intersection_witness(const ApproximateSubgroup& x, const ApproximateSubgroup& y,
                                                  const CommensurabilityCertificate& cert);

// Throws LemmaViolation when the witness fails any of its checks.
void require_holds(const SquareIntersectionWitness& w);
void require_holds(const ProductWitness& w);

std::size_t saturating_mul(std::size_t a, std::size_t b);
std::size_t saturating_pow(std::size_t base, std::size_t exp);

}  // namespace asg
