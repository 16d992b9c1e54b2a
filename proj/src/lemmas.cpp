#include "asg/lemmas.hpp"

#include <algorithm>
#include <unordered_map>

#include "asg/error.hpp"

namespace asg {

namespace {

std::string idx(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

std::string big(const BigNat& b) { return b.str(); }

std::size_t cover_size(const GroupSubset& x, const GroupSubset& y, const SearchConfig& cfg) {
  return minimum_cover(x, y, cfg).size;
}

std::size_t commensurability_n(const GroupSubset& x, const GroupSubset& y, const SearchConfig& cfg) {
  return std::max(cover_size(x, y, cfg), cover_size(y, x, cfg));
}

// Runs one check body; a LemmaViolation thrown from inside a library witness
// is recorded as a failure under the given label.
template <class F>
void guarded(LemmaReport& rep, const std::string& label, F&& body) {
  try {
    body();
  } catch (const LemmaViolation& v) {
    rep.record(label, false, v.what());
  }
}

void check_products(LemmaReport& rep, const Family& f, const SearchConfig& cfg, const LemmaOptions& opt) {
  const std::size_t n = f.size();
  std::vector<std::vector<std::size_t>> seqs;
  std::vector<std::size_t> cur;
  const std::size_t max_len = n <= 3 ? opt.product_length : std::min<std::size_t>(opt.product_length, 2);
  auto rec = [&](auto&& self) -> void {
    if (!cur.empty()) seqs.push_back(cur);
    if (cur.size() == max_len) return;
    for (std::size_t i = 0; i < n; ++i) {
      cur.push_back(i);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  for (const auto& parts : seqs) {
    for (std::size_t x = 0; x < n; ++x) {
      guarded(rep, "product-commensurability", [&] {
        auto w = product_commensurability_witness(f, parts, x, cfg);
        rep.record("product-commensurability", w.holds,
                   "parts " + idx(parts) + " against member " + std::to_string(x) + ": forward " +
                       std::to_string(w.forward.size()) + ", backward " + std::to_string(w.backward.size()) +
                       ", bound " + std::to_string(w.bound));
      });
    }
  }
}

void check_cover_packing(LemmaReport& rep, const Family& f, const LemmaOptions& opt, const SearchConfig& cfg) {
  bool corrupted = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      const auto& x = f.members[i].carrier;
      const auto& y = f.members[j].carrier;
      const auto& z0 = f.pairwise[i][j].z0;
      CoverCertificate cover{x, y, z0, z0.size()};
      if (opt.corrupt_certificate && !corrupted) {
        cover.size = 0;
        corrupted = true;
      }
      for (const auto& pack : {maximal_disjoint_family(x, y), packing_index(x, y, cfg)}) {
        guarded(rep, "cover-packing", [&] {
          check_cover_bound(pack, cover);
          rep.record("cover-packing", true);
        });
      }
    }
  }
}

void check_square_intersections(LemmaReport& rep, const Family& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    for (std::size_t j = 0; j < f.size(); ++j) {
      auto w = xx_intersection_witness(f.members[i], f.members[j], f.pairwise[i][j]);
      rep.record("square-intersection", w.size_ok && w.containment_ok && w.packing_ok,
                 "members " + std::to_string(i) + "," + std::to_string(j) + ": |E| = " +
                     std::to_string(w.e.size()) + ", bound " + std::to_string(w.bound) +
                     (w.containment_ok ? "" : ", XX not inside E(XX ∩ YY)"));
    }
  }
}

// Index of every candidate by its mask.
std::unordered_map<std::uint64_t, std::size_t> by_mask(const std::vector<UnionCandidate>& cands) {
  std::unordered_map<std::uint64_t, std::size_t> m;
  for (std::size_t i = 0; i < cands.size(); ++i) m.emplace(cands[i].mask, i);
  return m;
}

void check_downward_closure(LemmaReport& rep, const PipelineResult& res) {
  const auto& cands = res.candidates;
  const auto& prof = res.core.profiles;
  const auto masks = by_mask(cands);
  const std::uint64_t full = res.squared.size() >= 64 ? ~std::uint64_t{0}
                                                       : (std::uint64_t{1} << res.squared.size()) - 1;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    if (prof[c].value != res.core.m) continue;
    const std::uint64_t base = cands[c].mask;
    const std::uint64_t rest = full & ~base;
    // Every superset of base inside the full index set.
    for (std::uint64_t extra = rest;; extra = (extra - 1) & rest) {
      if (extra != 0) {
        auto it = masks.find(base | extra);
        if (it != masks.end()) {
          const auto& p = prof[it->second];
          rep.record("downward-closure", p.value == res.core.m && p.k_z <= prof[c].k_z,
                     "candidate " + idx(cands[c].index_set) + " attains m but its superset " +
                         idx(cands[it->second].index_set) + " has value " + std::to_string(p.value) +
                         " at k " + std::to_string(p.k_z));
        }
      }
      if (extra == 0) break;
    }
  }
}

void check_strong_sets(LemmaReport& rep, const PipelineResult& res, const SearchConfig& cfg,
                       const LemmaOptions& opt) {
  const auto& strong = res.core.strong;
  const std::size_t kn = saturating_mul(res.base.k_uniform, res.base.n_uniform);
  const std::size_t kn2 = saturating_mul(kn, kn);

  for (const auto& r : strong) {
    for (std::size_t i = 0; i < res.squared.size(); ++i) {
      const std::size_t c = cover_size(res.squared.members[i].carrier, r.n_set, cfg);
      rep.record("n-set-cover", c <= kn2,
                 "N(Z) for " + idx(r.candidate.index_set) + " needs " + std::to_string(c) +
                     " translates to cover square " + std::to_string(i) + ", bound " + std::to_string(kn2));
    }
  }

  std::unordered_map<std::uint64_t, std::size_t> strong_by_mask;
  for (std::size_t i = 0; i < strong.size(); ++i) strong_by_mask.emplace(strong[i].candidate.mask, i);
  const auto cand_by_mask = by_mask(res.candidates);

  std::size_t pairs = 0;
  for (std::size_t a = 0; a < strong.size() && pairs < opt.pair_cap; ++a) {
    for (std::size_t b = 0; b < strong.size() && pairs < opt.pair_cap; ++b) {
      if (a == b) continue;
      ++pairs;
      const auto& za = strong[a];
      const auto& zb = strong[b];
      if (za.candidate.within(zb.candidate)) {
        rep.record("strong-nesting", zb.n_set.subset_of(za.n_set),
                   "N(" + idx(zb.candidate.index_set) + ") is not inside N(" + idx(za.candidate.index_set) + ")");
      }
      if (a < b) {
        const std::uint64_t u = za.candidate.mask | zb.candidate.mask;
        if (!cand_by_mask.count(u)) continue;  // union beyond max_union
        auto it = strong_by_mask.find(u);
        if (it == strong_by_mask.end()) {
          rep.record("n-set-intersection", false,
                     "union of strong " + idx(za.candidate.index_set) + " and " + idx(zb.candidate.index_set) +
                         " is not strong");
          continue;
        }
        const auto& nu = strong[it->second].n_set;
        rep.record("n-set-intersection", nu.subset_of(za.n_set & zb.n_set),
                   "N of the union of " + idx(za.candidate.index_set) + " and " + idx(zb.candidate.index_set) +
                       " escapes the intersection");
      }
    }
  }
  // The union of all strong records, when enumerated.
  if (strong.size() > 2) {
    std::uint64_t all = 0;
    GroupSubset meet = GroupSubset::full(res.base.group());
    for (const auto& r : strong) {
      all |= r.candidate.mask;
      meet &= r.n_set;
    }
    if (auto it = strong_by_mask.find(all); it != strong_by_mask.end()) {
      rep.record("n-set-intersection", strong[it->second].n_set.subset_of(meet),
                 "N of the union of every strong candidate escapes their intersection");
    }
  }
}

void check_n_z(LemmaReport& rep, const PipelineResult& res, const SearchConfig& cfg) {
  const auto& strong = res.core.strong;
  const BigNat nz2 = res.n_z * res.n_z;
  for (std::size_t i : res.layers.i_prime) {
    const auto& z0 = strong[i].candidate.z;
    const GroupSubset p1 = set_power_of_two(z0, res.core.k0 + 1);
    const GroupSubset p2 = set_power_of_two(z0, res.core.k0 + 2);
    for (std::size_t x = 0; x < res.squared.size(); ++x) {
      const auto& sq = res.squared.members[x].carrier;
      const std::size_t c1 = commensurability_n(p1, sq, cfg);
      rep.record("n-z-bound", BigNat(c1) <= res.n_z,
                 "Z" + idx(strong[i].candidate.index_set) + " power is " + std::to_string(c1) +
                     "-commensurable with square " + std::to_string(x) + ", N_Z = " + big(res.n_z));
      const std::size_t c2 = commensurability_n(p2, sq, cfg);
      rep.record("n-z-bound", BigNat(c2) <= nz2,
                 "Z" + idx(strong[i].candidate.index_set) + " double power is " + std::to_string(c2) +
                     "-commensurable with square " + std::to_string(x) + ", N_Z^2 = " + big(nz2));
    }
  }
}

std::vector<GroupSubset> distinct_sets(const std::vector<StrongRecord>& strong, const std::vector<std::size_t>& ids) {
  std::vector<GroupSubset> out;
  for (std::size_t i : ids)
    if (std::find(out.begin(), out.end(), strong[i].n_set) == out.end()) out.push_back(strong[i].n_set);
  return out;
}

void check_i_family(LemmaReport& rep, const PipelineResult& res, const SearchConfig& cfg) {
  const BigNat kn = BigNat(res.base.k_uniform) * res.base.n_uniform;
  const BigNat approx_bound = (res.n_z * kn) * (res.n_z * kn);
  const BigNat comm_bound = res.n_z * kn * kn;
  const auto sets = distinct_sets(res.core.strong, res.layers.i_family);
  for (std::size_t a = 0; a < sets.size(); ++a) {
    const bool shape = sets[a].contains_identity() && is_symmetric(sets[a]);
    rep.record("i-family-uniform", shape, "an N(Z) set is not symmetric with identity");
    if (!shape) continue;
    const std::size_t k = minimal_doubling(sets[a], cfg).doubling_k;
    rep.record("i-family-uniform", BigNat(k) <= approx_bound,
               "N(Z) set " + std::to_string(a) + " has doubling " + std::to_string(k) + " above " +
                   big(approx_bound));
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      const std::size_t n = commensurability_n(sets[a], sets[b], cfg);
      rep.record("i-family-uniform", BigNat(n) <= comm_bound,
                 "N(Z) sets " + std::to_string(a) + "," + std::to_string(b) + " are only " + std::to_string(n) +
                     "-commensurable, bound " + big(comm_bound));
    }
  }
}

void check_dual_closure(LemmaReport& rep, const PipelineResult& res, const LemmaOptions& opt) {
  const auto& strong = res.core.strong;
  const auto& fam = res.layers.i_family;
  auto in_mprime = [&](std::size_t t) { return res.dual.dual_values[t] == res.dual.m_prime; };
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < fam.size() && pairs < opt.pair_cap; ++a) {
    for (std::size_t b = 0; b < fam.size() && pairs < opt.pair_cap; ++b) {
      ++pairs;
      if (a == b || !in_mprime(b)) continue;
      if (!strong[fam[a]].n_set.subset_of(strong[fam[b]].n_set)) continue;
      rep.record("dual-downward-closure", in_mprime(a),
                 "N(Z) for " + idx(strong[fam[a]].candidate.index_set) + " lies inside a dual-layer set but has value " +
                     std::to_string(res.dual.dual_values[a]));
    }
  }
}

void check_chain(LemmaReport& rep, const PipelineResult& res, const LemmaOptions& opt) {
  const auto sets = distinct_sets(res.core.strong, res.dual.i_mprime);
  std::vector<std::vector<std::size_t>> picks;
  if (sets.size() <= opt.chain_subset_cap) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << sets.size()); ++mask) {
      std::vector<std::size_t> p;
      for (std::size_t i = 0; i < sets.size(); ++i)
        if (mask >> i & 1) p.push_back(i);
      picks.push_back(std::move(p));
    }
  } else {
    for (std::size_t i = 0; i < sets.size(); ++i) {
      picks.push_back({i});
      for (std::size_t j = i + 1; j < sets.size(); ++j) picks.push_back({i, j});
    }
  }
  std::vector<GroupSubset> generated;
  for (const auto& p : picks) {
    GroupSubset y(res.base.group());
    for (std::size_t i : p) y |= sets[i];
    auto g = generated_subgroup(y).subgroup;
    if (std::find(generated.begin(), generated.end(), g) == generated.end()) generated.push_back(std::move(g));
  }
  const std::size_t len = longest_chain(generated);
  rep.record("chain-bound", BigNat(len) <= res.n_y,
             "chain of " + std::to_string(len) + " generated subgroups exceeds N_Y = " + big(res.n_y));
}

void check_squares(LemmaReport& rep, const PipelineResult& res) {
  const std::size_t k = res.base.k_uniform, n = res.base.n_uniform;
  rep.record("square-bounds", res.squared.k_uniform <= saturating_pow(k, 3),
             "K of the squares is " + std::to_string(res.squared.k_uniform) + ", above K^3");
  rep.record("square-bounds", res.squared.n_uniform <= saturating_mul(n, k),
             "N of the squares is " + std::to_string(res.squared.n_uniform) + ", above N K");
  for (std::size_t i = 0; i < res.base.size(); ++i) {
    const auto& x = res.base.members[i].carrier;
    rep.record("square-bounds", res.squared.members[i].carrier == set_product(x, x),
               "squared member " + std::to_string(i) + " is not X X");
  }
}

bool cert_ok(const GroupSubset& s, const SetCertificates& c, const Family& f) {
  const auto& d = c.doubling;
  if (!(d.carrier == s) || d.doubling_witness.size() != d.doubling_k) return false;
  if (!set_product(s, s).subset_of(set_product(d.doubling_witness, s))) return false;
  if (c.against_members.size() != f.size()) return false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& m = c.against_members[i];
    const auto& x = f.members[i].carrier;
    if (!s.subset_of(set_product(m.z0, x)) || !x.subset_of(set_product(m.z1, s))) return false;
    if (m.n != std::max(m.z0.size(), m.z1.size())) return false;
  }
  return true;
}

void check_main(LemmaReport& rep, const PipelineResult& res) {
  for (const auto* s : {&res.h, &res.h_prime}) {
    const std::string name = s == &res.h ? "H" : "H'";
    rep.record("main-theorem", s->contains_identity(), name + " misses the identity");
    rep.record("main-theorem", is_symmetric(*s), name + " is not symmetric");
    rep.record("main-theorem", cert_ok(*s, s == &res.h ? res.h_cert : res.h_prime_cert, res.family),
               name + " certificates do not re-validate");
  }
  rep.record("main-theorem", res.h_prime.subset_of(res.h), "H' is not inside H");
  GroupSubset u(res.base.group());
  for (std::size_t i : res.dual.i_mprime) u |= res.core.strong[i].n_set;
  rep.record("main-theorem", u == res.h, "H differs from the union of the dual layer");
}

}  // namespace

void LemmaReport::record(const std::string& lemma, bool ok, const std::string& detail) {
  auto& t = tallies[lemma];
  if (ok) {
    ++t.pass;
  } else {
    ++t.fail;
    failures.push_back({lemma, detail});
  }
}

void LemmaReport::merge(const LemmaReport& other) {
  for (const auto& [k, v] : other.tallies) {
    tallies[k].pass += v.pass;
    tallies[k].fail += v.fail;
  }
  failures.insert(failures.end(), other.failures.begin(), other.failures.end());
}

const std::vector<std::string>& core_lemma_labels() {
  static const std::vector<std::string> labels{
      "product-commensurability", "cover-packing", "square-intersection", "strong-nesting", "n-set-cover",
      "n-set-intersection",       "n-z-bound",     "i-family-uniform",    "chain-bound"};
  return labels;
}

LemmaReport check_lemmas(const PipelineResult& res, const SearchConfig& cfg, const LemmaOptions& opt) {
  LemmaReport rep;
  for (const auto& l : core_lemma_labels()) rep.tallies[l];
  check_products(rep, res.base, cfg, opt);
  check_cover_packing(rep, res.base, opt, cfg);
  check_square_intersections(rep, res.base);
  check_squares(rep, res);
  check_downward_closure(rep, res);
  check_strong_sets(rep, res, cfg, opt);
  check_n_z(rep, res, cfg);
  check_i_family(rep, res, cfg);
  check_dual_closure(rep, res, opt);
  check_chain(rep, res, opt);
  check_main(rep, res);
  return rep;
}

void record_invariance(LemmaReport& report, const InvarianceReport& inv) {
  for (const auto& v : inv.verdicts) {
    if (!v.stabilizing) continue;
    report.record("invariance", v.h_invariant && v.h_prime_invariant,
                  "automorphism " + std::to_string(v.automorphism) + " stabilizes the family but moves " +
                      (v.h_invariant ? "H'" : "H"));
  }
}

void require_clean(const LemmaReport& report) {
  if (report.failures.empty()) return;
  const auto& f = report.failures.front();
  throw LemmaViolation(f.lemma, f.detail);
}

std::size_t longest_chain(const std::vector<GroupSubset>& sets) {
  if (sets.empty()) return 0;
  std::vector<std::size_t> order(sets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sets[a].size() < sets[b].size();
  });
  std::vector<std::size_t> best(sets.size(), 1);
  std::size_t top = 1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto& lo = sets[order[j]];
      const auto& hi = sets[order[i]];
      if (lo.size() < hi.size() && lo.subset_of(hi)) best[i] = std::max(best[i], best[j] + 1);
    }
    top = std::max(top, best[i]);
  }
  return top;
}

}  // namespace asg
