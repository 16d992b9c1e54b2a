#pragma once

#include <map>
#include <string>
#include <vector>

#include "asg/pipeline.hpp"

namespace asg {

struct LemmaTally {
  std::size_t pass = 0;
  std::size_t fail = 0;
};

struct LemmaFailure {
  std::string lemma;
  std::string detail;
};

struct LemmaReport {
  std::map<std::string, LemmaTally> tallies;
  std::vector<LemmaFailure> failures;

  void record(const std::string& lemma, bool ok, const std::string& detail = {});
  void merge(const LemmaReport& other);
  std::size_t failure_count() const { return failures.size(); }
  bool clean() const { return failures.empty(); }
};

// The nine checks every run performs, in report order.
const std::vector<std::string>& core_lemma_labels();

struct LemmaOptions {
  // Shrinks one cover certificate below its packing so the cover-packing
  // check must fail. Test mode only.
  bool corrupt_certificate = false;
  // Products of up to this many members are checked; length 3 only for
  // families of at most three members.
  std::size_t product_length = 3;
  // The chain check takes unions of all subfamilies of the dual layer when it
  // has at most this many distinct sets, singletons and pairs otherwise.
  std::size_t chain_subset_cap = 10;
  // Caps on pairwise scans over strong records.
  std::size_t pair_cap = 20000;
};

// Evaluates every check against a finished pipeline result. Violations are
// collected, never thrown.
LemmaReport check_lemmas(const PipelineResult& res, const SearchConfig& cfg = {}, const LemmaOptions& opt = {});

void record_invariance(LemmaReport& report, const InvarianceReport& inv);

// Throws LemmaViolation for the first recorded failure.
void require_clean(const LemmaReport& report);

// Longest strictly increasing chain (by proper inclusion) among the given sets.
std::size_t longest_chain(const std::vector<GroupSubset>& sets);

}  // namespace asg
