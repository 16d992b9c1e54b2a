#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "asg/approx.hpp"

namespace asg {

using BigNat = boost::multiprecision::cpp_int;

struct PipelineConfig {
  SearchConfig search;
  // Largest union size considered; 0 means every nonempty subset.
  std::size_t max_union = 0;
  // Largest squared family enumerated exhaustively.
  std::size_t family_cap = 12;
};

// Z = ⋃_{i ∈ index_set} X_i X_i, tracked formally: two candidates with equal
// Z but different index sets are distinct, and n(Z) = |index_set|.
struct UnionCandidate {
  std::vector<std::size_t> index_set;
  std::uint64_t mask = 0;
  GroupSubset z;

  std::size_t n_of_z() const { return index_set.size(); }
  // Index-set containment.
  bool within(const UnionCandidate& other) const { return (mask & ~other.mask) == 0; }
};

// Memo of packing indices keyed by the two sets.
class PackingCache {
 public:
  std::size_t index(const GroupSubset& x, const GroupSubset& y, const SearchConfig& cfg);
  std::size_t hits() const { return hits_; }

 private:
  std::map<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>, std::size_t> memo_;
  std::size_t hits_ = 0;
};

struct KProfile {
  std::size_t k_z = 0;
  std::size_t value = 0;
  // Profile value for k = 0, 1, ... up to the level where every power is stable.
  std::vector<std::size_t> values;
};

struct StrongRecord {
  UnionCandidate candidate;
  std::size_t k_z = 0;
  std::size_t profile_value = 0;
  std::vector<std::size_t> eta;  // indices into the squared family
  GroupSubset n_set;
};

struct CoreResult {
  std::size_t m = 0;
  std::size_t k0 = 0;
  std::vector<KProfile> profiles;  // parallel to the candidate list
  std::vector<StrongRecord> strong;
};

struct FamilyLayers {
  std::size_t n0 = 0;
  std::vector<std::size_t> i_family;  // indices into the strong list
  std::vector<std::size_t> i_prime;
};

struct DualResult {
  std::size_t m_prime = 0;
  std::vector<std::size_t> dual_values;  // parallel to i_family
  std::vector<std::size_t> i_mprime;     // indices into the strong list
};

struct SetCertificates {
  ApproximateSubgroup doubling;
  std::vector<CommensurabilityCertificate> against_members;  // set vs. each input member
  std::size_t max_n = 0;
};

struct PipelineResult {
  Family family;                        // validated input family
  std::vector<std::size_t> distinct;    // input indices of the distinct carriers
  Family base;                          // the distinct members
  Family squared;
  std::vector<UnionCandidate> candidates;
  CoreResult core;
  FamilyLayers layers;
  DualResult dual;
  std::size_t n2 = 0;
  std::vector<std::size_t> y_prime;  // strong records with n(Z) = n2 whose N(Z) lies in the dual layer
  GroupSubset h;
  GroupSubset h_prime;
  SetCertificates h_cert;
  SetCertificates h_prime_cert;
  BigNat n_z;
  BigNat n_y;  // m' N_Z^3 (KN)^4
};

// All nonempty index subsets of size <= max_union (0 = all), ordered by size
// and then lexicographically. Throws FamilyTooLargeForExhaustive when the
// squared family exceeds the cap.
std::vector<UnionCandidate> enumerate_candidates(const Family& f2, std::size_t max_union,
                                                 std::size_t family_cap = 12);

// max over X in f2 of [X : (X ∩ z)^(2^k)].
std::size_t index_profile(const GroupSubset& z, std::size_t k, const Family& f2, PackingCache& cache,
                          const SearchConfig& cfg = {});

// Scans k upward until every (X ∩ z)^(2^k) is stable and returns the least k
// attaining the minimal profile value.
KProfile k_of(const UnionCandidate& cand, const Family& f2, PackingCache& cache, const SearchConfig& cfg = {});

CoreResult compute_core(const Family& f2, const std::vector<UnionCandidate>& cands, PackingCache& cache,
                        const SearchConfig& cfg = {});

FamilyLayers build_families(const std::vector<StrongRecord>& strong);

DualResult compute_dual(const std::vector<StrongRecord>& strong, const FamilyLayers& layers, PackingCache& cache,
                        const SearchConfig& cfg = {});

// N_Z = n0^(2^(k0+1)) · K^(2^(k0+1)+4) · N^(2^(k0+1))
BigNat n_z_bound(std::size_t n0, std::size_t k0, std::size_t k, std::size_t n);
BigNat n_y_bound(std::size_t m_prime, const BigNat& n_z, std::size_t k, std::size_t n);

// Fills n2, y_prime, h, h_prime, their certificates and the derived
// constants. Throws LemmaViolation if h or h_prime is not a symmetric
// identity-containing set or h_prime ⊄ h.
void assemble(PipelineResult& res, const SearchConfig& cfg = {});

// Runs every stage above on a validated family. Members with equal carriers
// are collapsed to their first occurrence before squaring.
PipelineResult run_pipeline(const Family& f, const PipelineConfig& cfg = {});

struct InvarianceVerdict {
  std::size_t automorphism = 0;  // index into the supplied list
  bool stabilizing = false;
  bool h_invariant = true;
  bool h_prime_invariant = true;
};

struct InvarianceReport {
  std::vector<InvarianceVerdict> verdicts;
  bool ok() const;
};

// Automorphisms that do not permute the member carriers are listed as
// non-stabilizing and skipped.
InvarianceReport invariance_check(const PipelineResult& res, const std::vector<Automorphism>& autos);

// Throws LemmaViolation naming the first automorphism that moves h or h_prime.
void require_invariance(const InvarianceReport& report);

}  // namespace asg
