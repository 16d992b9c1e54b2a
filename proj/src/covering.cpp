#include "asg/covering.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>

#include "asg/error.hpp"
#include "bits.hpp"

namespace asg {

using detail::Bits;

std::uint64_t SearchConfig::default_search_budget() {
  if (const char* env = std::getenv("ASG_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 20'000'000;
}

namespace {

class Budget {
 public:
  explicit Budget(std::uint64_t limit) : limit_(limit) {}
  void tick() {
    if (++used_ > limit_) {
      throw Error(ErrorKind::SearchBudgetExceeded,
                  "exact search exceeded its budget of " + std::to_string(limit_) + " nodes");
    }
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

// Set cover of the elements of x by candidate translates. Candidates are kept
// sorted by translator index so "earlier" means lexicographically smaller.
class CoverSearch {
 public:
  CoverSearch(const GroupSubset& x, const GroupSubset& y, std::uint64_t budget) : budget_(budget) {
    const FiniteGroup& g = *x.group();
    const auto xs = x.elements();
    m_ = xs.size();
    std::vector<std::size_t> local(g.order(), m_);
    for (std::size_t i = 0; i < m_; ++i) local[xs[i]] = i;

    // Every useful translator z has z*y meeting x, i.e. z ∈ x · y^-1.
    const GroupSubset useful = set_product(x, set_inverse(y));
    std::map<std::vector<std::uint64_t>, bool> seen;
    useful.for_each([&](Element z) {
      Bits cov(m_);
      const auto row = g.row(z);
      y.for_each([&](Element b) {
        const std::size_t i = local[row[b]];
        if (i < m_) cov.set(i);
      });
      if (cov.none()) return;
      // Identical coverage: keep the least translator only.
      std::vector<std::uint64_t> key;
      cov.for_each([&](std::size_t i) { key.push_back(i); });
      if (!seen.emplace(std::move(key), true).second) return;
      translators_.push_back(z);
      coverage_.push_back(std::move(cov));
    });
    covering_.assign(m_, {});
    for (std::size_t c = 0; c < coverage_.size(); ++c)
      coverage_[c].for_each([&](std::size_t i) { covering_[i].push_back(c); });
    max_block_ = y.size();
  }

  std::size_t element_count() const { return m_; }
  std::size_t candidate_count() const { return translators_.size(); }
  Element translator(std::size_t c) const { return translators_[c]; }
  const Bits& coverage(std::size_t c) const { return coverage_[c]; }

  // Whether `uncovered` can be covered by at most `slots` candidates from
  // `allowed`.
  bool feasible(const Bits& uncovered, std::size_t slots, Bits allowed) {
    budget_.tick();
    if (uncovered.none()) return true;
    if (slots == 0) return false;

    std::size_t best_gain = 0;
    allowed.for_each([&](std::size_t c) { best_gain = std::max(best_gain, coverage_[c].count_and(uncovered)); });
    if (best_gain == 0) return false;
    const std::size_t remaining = uncovered.count();
    if ((remaining + best_gain - 1) / best_gain > slots) return false;

    // Branch on the uncovered element with the fewest allowed candidates.
    std::size_t pick = m_, pick_options = SIZE_MAX;
    uncovered.for_each([&](std::size_t i) {
      if (pick_options == 0) return;
      std::size_t options = 0;
      for (std::size_t c : covering_[i]) options += allowed.test(c) ? 1 : 0;
      if (options < pick_options) {
        pick_options = options;
        pick = i;
      }
    });
    if (pick_options == 0) return false;

    for (std::size_t c : covering_[pick]) {
      if (!allowed.test(c)) continue;
      allowed.reset(c);
      Bits rest = uncovered - coverage_[c];
      if (feasible(rest, slots - 1, allowed)) return true;
    }
    return false;
  }

  std::size_t lower_bound() const {
    if (max_block_ == 0) return m_;
    return std::max<std::size_t>(1, (m_ + max_block_ - 1) / max_block_);
  }

 private:
  Budget budget_;
  std::size_t m_ = 0;
  std::size_t max_block_ = 0;
  std::vector<Element> translators_;
  std::vector<Bits> coverage_;
  std::vector<std::vector<std::size_t>> covering_;
};

CoverCertificate solve_cover(const GroupSubset& x, const GroupSubset& y, const SearchConfig& cfg) {
  CoverSearch search(x, y, cfg.budget);
  const std::size_t ncand = search.candidate_count();
  const Bits everything = Bits::all(search.element_count());
  const Bits all_candidates = Bits::all(ncand);

  std::size_t s = search.lower_bound();
  while (!search.feasible(everything, s, all_candidates)) ++s;

  // Lexicographically least optimum: fix translators one at a time, each the
  // smallest that still admits a completion of the optimal size.
  GroupSubset chosen(x.group());
  Bits uncovered = everything;
  std::size_t next = 0;
  for (std::size_t pos = 0; pos < s && !uncovered.none(); ++pos) {
    bool placed = false;
    for (std::size_t c = next; c < ncand && !placed; ++c) {
      Bits later(ncand);
      for (std::size_t d = c + 1; d < ncand; ++d) later.set(d);
      const Bits rest = uncovered - search.coverage(c);
      if (search.feasible(rest, s - pos - 1, later)) {
        chosen.insert(search.translator(c));
        uncovered = rest;
        next = c + 1;
        placed = true;
      }
    }
    if (!placed) throw Error(ErrorKind::SearchBudgetExceeded, "cover reconstruction failed");
  }
  return CoverCertificate{x, y, chosen, chosen.size()};
}

void require_nonempty(const GroupSubset& x, const GroupSubset& y) {
  require_same_group(x, y);
  if (x.empty() || y.empty()) throw Error(ErrorKind::EmptyInput, "covering/packing needs nonempty sets");
}

}  // namespace

CoverCertificate covering_number(const GroupSubset& x, const GroupSubset& y, const SearchConfig& cfg) {
  require_nonempty(x, y);
  if (!is_symmetric(y)) throw Error(ErrorKind::NotSymmetric, "covering set must be symmetric");
  return solve_cover(x, y, cfg);
}

CoverCertificate minimum_cover(const GroupSubset& x, const GroupSubset& y, const SearchConfig& cfg) {
  require_nonempty(x, y);
  return solve_cover(x, y, cfg);
}

namespace {

// Maximum independent set on the translate-conflict graph. Vertices are
// ordered by their least center; the DFS includes the lowest candidate first,
// so the first optimum found is the lexicographically least one.
class PackingSearch {
 public:
  PackingSearch(std::vector<Bits> adjacency, std::uint64_t budget)
      : adj_(std::move(adjacency)), budget_(budget), n_(adj_.size()) {}

  std::vector<std::size_t> run() {
    std::vector<std::size_t> cur;
    search(Bits::all(n_), cur);
    return best_;
  }

 private:
  // Greedy partition of p into cliques; each clique holds at most one vertex
  // of an independent set.
  std::size_t clique_cover(Bits p) const {
    std::size_t cliques = 0;
    while (!p.none()) {
      const std::size_t u = p.first();
      p.reset(u);
      Bits cand = p & adj_[u];
      while (!cand.none()) {
        const std::size_t w = cand.first();
        p.reset(w);
        cand.reset(w);
        cand &= adj_[w];
      }
      ++cliques;
    }
    return cliques;
  }

  void search(const Bits& p, std::vector<std::size_t>& cur) {
    budget_.tick();
    if (p.none()) {
      if (cur.size() > best_.size()) best_ = cur;
      return;
    }
    if (cur.size() + clique_cover(p) <= best_.size()) return;
    const std::size_t v = p.first();
    Bits with = p - adj_[v];
    with.reset(v);
    cur.push_back(v);
    search(with, cur);
    cur.pop_back();
    if (!p.intersects(adj_[v])) return;  // v is free: excluding it never helps
    Bits without = p;
    without.reset(v);
    search(without, cur);
  }

  std::vector<Bits> adj_;
  Budget budget_;
  std::size_t n_;
  std::vector<std::size_t> best_;
};

}  // namespace

PackingCertificate packing_index(const GroupSubset& x, const GroupSubset& y, const SearchConfig& cfg) {
  require_nonempty(x, y);
  std::vector<Element> centers;
  std::vector<GroupSubset> blocks;
  std::map<std::vector<std::uint64_t>, std::size_t> classes;
  x.for_each([&](Element c) {
    GroupSubset t = left_translate(c, y);
    if (classes.emplace(t.words(), centers.size()).second) {
      centers.push_back(c);
      blocks.push_back(std::move(t));
    }
  });
  const std::size_t n = centers.size();
  std::vector<Bits> adj(n, Bits(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (blocks[i].intersects(blocks[j])) {
        adj[i].set(j);
        adj[j].set(i);
      }
    }
  }
  PackingSearch search(std::move(adj), cfg.budget);
  GroupSubset chosen(x.group());
  for (std::size_t v : search.run()) chosen.insert(centers[v]);
  return PackingCertificate{x, y, chosen, chosen.size()};
}

PackingCertificate maximal_disjoint_family(const GroupSubset& x, const GroupSubset& y) {
  require_nonempty(x, y);
  GroupSubset chosen(x.group());
  GroupSubset occupied(x.group());
  x.for_each([&](Element c) {
    GroupSubset t = left_translate(c, y);
    if (!t.intersects(occupied)) {
      chosen.insert(c);
      occupied |= t;
    }
  });
  return PackingCertificate{x, y, chosen, chosen.size()};
}

bool certificate_valid(const CoverCertificate& c) {
  if (c.translates.size() != c.size) return false;
  return c.covered.subset_of(set_product(c.translates, c.coverer));
}

bool certificate_valid(const PackingCertificate& p) {
  if (p.centers.size() != p.size || !p.centers.subset_of(p.base)) return false;
  GroupSubset occupied(p.base.group());
  bool disjoint = true;
  p.centers.for_each([&](Element c) {
    GroupSubset t = left_translate(c, p.block);
    if (t.intersects(occupied)) disjoint = false;
    occupied |= t;
  });
  return disjoint;
}

bool check_cover_bound(const PackingCertificate& pack, const CoverCertificate& cover) {
  if (!(pack.block == cover.coverer) || !is_symmetric(pack.block)) {
    throw Error(ErrorKind::PreconditionFailed, "packing block and cover set must be the same symmetric set");
  }
  if (!pack.base.subset_of(set_product(cover.translates, cover.coverer))) {
    throw Error(ErrorKind::PreconditionFailed, "cover does not cover the packing base");
  }
  if (!certificate_valid(pack)) {
    throw Error(ErrorKind::PreconditionFailed, "packing certificate is not disjoint");
  }
  if (pack.size > cover.size) {
    throw LemmaViolation("cover-packing", "disjoint family of " + std::to_string(pack.size) +
                                              " translates exceeds a cover by " +
                                              std::to_string(cover.size));
  }
  return true;
}

}  // namespace asg
