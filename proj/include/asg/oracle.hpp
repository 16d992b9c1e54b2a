#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "asg/io.hpp"

namespace asg {

struct OracleCaps {
  std::size_t max_members = 4;
  std::size_t max_order = 24;
};

// The quantities both sides compute.
struct CoreValues {
  std::size_t m = 0;
  std::size_t k0 = 0;
  std::size_t n0 = 0;
  std::size_t m_prime = 0;
  std::size_t n2 = 0;
  GroupSubset h;
  GroupSubset h_prime;
};

struct OracleComparison {
  CoreValues oracle;
  CoreValues pipeline;
  std::map<std::string, bool> matches;  // field name -> equal

  bool all_match() const;
};

struct OracleReport {
  std::string digest;
  OracleComparison comparison;
  LemmaReport lemmas;
};

// Recomputes the construction from the member carriers by exhaustion: every
// index subset, every exponent up to ceil(log2 |G|) + 1, powers by repeated
// products, packings by trying center subsets from the largest size down.
// Shares nothing with the pipeline beyond group-core. Throws CapExceeded
// outside the caps.
CoreValues oracle_recompute(const std::vector<GroupSubset>& carriers, const OracleCaps& caps = {});

// Naive exact [x : y] and covering number, by trying subsets in size order.
std::size_t naive_packing(const GroupSubset& x, const GroupSubset& y);
std::size_t naive_cover(const GroupSubset& x, const GroupSubset& y);

CoreValues pipeline_values(const PipelineResult& res);
OracleComparison compare_with_oracle(const PipelineResult& res, const OracleCaps& caps = {});

// Runs the pipeline and the oracle; a mismatch raises LemmaViolation
// ("oracle-equivalence") after the comparison has been filled in.
OracleReport oracle_core(const Family& f, const PipelineConfig& cfg = {}, const OracleCaps& caps = {});

struct BatteryOptions {
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::size_t group_cap = 24;
  bool inject_fault = false;
  SearchConfig search;
};

struct BatteryTrial {
  std::size_t index = 0;
  std::string generator;
  std::string digest;
  std::size_t group_order = 0;
  std::size_t members = 0;
  std::size_t failures = 0;
};

struct BatteryReport {
  BatteryOptions options;
  std::vector<BatteryTrial> trials;
  LemmaReport lemmas;
  std::size_t oracle_checked = 0;
};

// Seeded random instances; every one is run through the pipeline, all lemma
// checks, invariance against the enumerated automorphisms, and the oracle when
// it fits the default caps. The first failing instance raises LemmaViolation
// with its serialized instance as the reproducer.
BatteryReport lemma_battery(const BatteryOptions& opt);

Json battery_json(const BatteryReport& rep);

// Groups of order <= cap used by the battery, in a fixed order.
std::vector<GroupSpec> battery_groups(std::size_t cap);

struct RandomInstance {
  Instance instance;
  std::string generator;
};

RandomInstance random_instance(std::mt19937_64& rng, const std::vector<GroupSpec>& groups);

struct SubgroupCrosscheck {
  PipelineResult result;
  InvarianceReport invariance;
  bool h_is_subgroup = false;
  bool h_prime_is_subgroup = false;
};

// For families of genuine subgroups: runs the pipeline and asserts that H and
// H' are commensurable with every member and invariant under the stabilizing
// automorphisms. Whether H' is a subgroup is reported, not asserted.
SubgroupCrosscheck subgroup_crosscheck(const Family& f, const std::vector<Automorphism>& autos,
                                       const PipelineConfig& cfg = {});

}  // namespace asg
