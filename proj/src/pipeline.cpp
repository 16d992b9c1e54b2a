#include "asg/pipeline.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "asg/error.hpp"

namespace asg {

std::size_t PackingCache::index(const GroupSubset& x, const GroupSubset& y, const SearchConfig& cfg) {
  auto key = std::make_pair(x.words(), y.words());
  if (auto it = memo_.find(key); it != memo_.end()) {
    ++hits_;
    return it->second;
  }
  const std::size_t v = packing_index(x, y, cfg).size;
  memo_.emplace(std::move(key), v);
  return v;
}

std::vector<UnionCandidate> enumerate_candidates(const Family& f2, std::size_t max_union, std::size_t family_cap) {
  const std::size_t n = f2.size();
  if (n == 0) throw Error(ErrorKind::EmptyInput, "squared family is empty");
  if (n > family_cap || n > 62) {
    throw Error(ErrorKind::FamilyTooLargeForExhaustive,
                "family has " + std::to_string(n) + " distinct members; exhaustive enumeration is capped at " +
                    std::to_string(family_cap));
  }
  const std::size_t limit = max_union == 0 ? n : std::min(max_union, n);

  std::vector<UnionCandidate> out;
  std::vector<std::size_t> pick;
  // Sizes ascending, and within a size lexicographic on the index list.
  for (std::size_t size = 1; size <= limit; ++size) {
    pick.clear();
    auto rec = [&](auto&& self, std::size_t start) -> void {
      if (pick.size() == size) {
        UnionCandidate c;
        c.index_set = pick;
        c.z = GroupSubset(f2.group());
        for (std::size_t i : pick) {
          c.mask |= std::uint64_t{1} << i;
          c.z |= f2.members[i].carrier;
        }
        out.push_back(std::move(c));
        return;
      }
      for (std::size_t i = start; i + (size - pick.size()) <= n; ++i) {
        pick.push_back(i);
        self(self, i + 1);
        pick.pop_back();
      }
    };
    rec(rec, 0);
  }
  return out;
}

std::size_t index_profile(const GroupSubset& z, std::size_t k, const Family& f2, PackingCache& cache,
                          const SearchConfig& cfg) {
  std::size_t best = 0;
  for (const auto& member : f2.members) {
    const GroupSubset& x = member.carrier;
    best = std::max(best, cache.index(x, set_power_of_two(x & z, k), cfg));
  }
  return best;
}

KProfile k_of(const UnionCandidate& cand, const Family& f2, PackingCache& cache, const SearchConfig& cfg) {
  std::vector<GroupSubset> powers;
  powers.reserve(f2.size());
  for (const auto& member : f2.members) powers.push_back(member.carrier & cand.z);

  KProfile prof;
  for (;;) {
    std::size_t value = 0;
    for (std::size_t i = 0; i < f2.size(); ++i)
      value = std::max(value, cache.index(f2.members[i].carrier, powers[i], cfg));
    prof.values.push_back(value);

    bool stable = true;
    for (auto& p : powers) {
      GroupSubset sq = set_product(p, p);
      if (!(sq == p)) {
        stable = false;
        p = std::move(sq);
      }
    }
    if (stable) break;
  }
  prof.value = *std::min_element(prof.values.begin(), prof.values.end());
  prof.k_z = static_cast<std::size_t>(
      std::find(prof.values.begin(), prof.values.end(), prof.value) - prof.values.begin());
  return prof;
}

CoreResult compute_core(const Family& f2, const std::vector<UnionCandidate>& cands, PackingCache& cache,
                        const SearchConfig& cfg) {
  if (cands.empty()) throw Error(ErrorKind::EmptyInput, "no union candidates");
  CoreResult core;
  core.profiles.reserve(cands.size());
  for (const auto& c : cands) core.profiles.push_back(k_of(c, f2, cache, cfg));

  core.m = std::numeric_limits<std::size_t>::max();
  for (const auto& p : core.profiles) core.m = std::min(core.m, p.value);
  core.k0 = std::numeric_limits<std::size_t>::max();
  for (const auto& p : core.profiles)
    if (p.value == core.m) core.k0 = std::min(core.k0, p.k_z);

  const std::size_t level = core.k0 + 1;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const auto& p = core.profiles[c];
    if (p.value != core.m || p.k_z != core.k0) continue;
    StrongRecord rec;
    rec.candidate = cands[c];
    rec.k_z = p.k_z;
    rec.profile_value = p.value;
    rec.n_set = GroupSubset(f2.group());
    for (std::size_t i = 0; i < f2.size(); ++i) {
      const GroupSubset& x = f2.members[i].carrier;
      const GroupSubset block = set_power_of_two(x & cands[c].z, level);
      if (cache.index(x, block, cfg) == core.m) {
        rec.eta.push_back(i);
        rec.n_set |= x & block;
      }
    }
    core.strong.push_back(std::move(rec));
  }
  return core;
}

FamilyLayers build_families(const std::vector<StrongRecord>& strong) {
  if (strong.empty()) throw Error(ErrorKind::EmptyInput, "no strong candidates");
  FamilyLayers layers;
  layers.n0 = std::numeric_limits<std::size_t>::max();
  for (const auto& r : strong) layers.n0 = std::min(layers.n0, r.candidate.n_of_z());
  for (std::size_t i = 0; i < strong.size(); ++i)
    if (strong[i].candidate.n_of_z() == layers.n0) layers.i_prime.push_back(i);
  for (std::size_t i = 0; i < strong.size(); ++i) {
    const bool above = std::any_of(layers.i_prime.begin(), layers.i_prime.end(), [&](std::size_t j) {
      return strong[j].candidate.within(strong[i].candidate);
    });
    if (above) layers.i_family.push_back(i);
  }
  return layers;
}

DualResult compute_dual(const std::vector<StrongRecord>& strong, const FamilyLayers& layers, PackingCache& cache,
                        const SearchConfig& cfg) {
  if (layers.i_family.empty() || layers.i_prime.empty()) throw Error(ErrorKind::EmptyInput, "empty family layer");
  DualResult dual;
  dual.m_prime = std::numeric_limits<std::size_t>::max();
  for (std::size_t i : layers.i_family) {
    std::size_t worst = 0;
    for (std::size_t j : layers.i_prime) worst = std::max(worst, cache.index(strong[i].n_set, strong[j].n_set, cfg));
    dual.dual_values.push_back(worst);
    dual.m_prime = std::min(dual.m_prime, worst);
  }
  for (std::size_t t = 0; t < layers.i_family.size(); ++t)
    if (dual.dual_values[t] == dual.m_prime) dual.i_mprime.push_back(layers.i_family[t]);
  return dual;
}

BigNat n_z_bound(std::size_t n0, std::size_t k0, std::size_t k, std::size_t n) {
  const std::size_t e = std::size_t{1} << (k0 + 1);
  BigNat r = boost::multiprecision::pow(BigNat(n0), static_cast<unsigned>(e));
  r *= boost::multiprecision::pow(BigNat(k), static_cast<unsigned>(e + 4));
  r *= boost::multiprecision::pow(BigNat(n), static_cast<unsigned>(e));
  return r;
}

BigNat n_y_bound(std::size_t m_prime, const BigNat& n_z, std::size_t k, std::size_t n) {
  return BigNat(m_prime) * n_z * n_z * n_z * boost::multiprecision::pow(BigNat(k) * n, 4);
}

namespace {

SetCertificates certify(const GroupSubset& s, const Family& members, const SearchConfig& cfg) {
  SetCertificates c;
  c.doubling = minimal_doubling(s, cfg);
  for (const auto& m : members.members) {
    c.against_members.push_back(commensurability(c.doubling, m, cfg));
    c.max_n = std::max(c.max_n, c.against_members.back().n);
  }
  return c;
}

}  // namespace

void assemble(PipelineResult& res, const SearchConfig& cfg) {
  const auto& strong = res.core.strong;
  const GroupPtr& g = res.base.group();

  std::vector<GroupSubset> dual_sets;
  res.h = GroupSubset(g);
  for (std::size_t i : res.dual.i_mprime) {
    res.h |= strong[i].n_set;
    if (std::find(dual_sets.begin(), dual_sets.end(), strong[i].n_set) == dual_sets.end())
      dual_sets.push_back(strong[i].n_set);
  }

  // n2 ranges over every strong representation Z whose N(Z) is a member of
  // the dual layer, not only over the records inside it.
  auto in_dual = [&](const StrongRecord& r) {
    return std::find(dual_sets.begin(), dual_sets.end(), r.n_set) != dual_sets.end();
  };
  res.n2 = std::numeric_limits<std::size_t>::max();
  for (const auto& r : strong)
    if (in_dual(r)) res.n2 = std::min(res.n2, r.candidate.n_of_z());
  res.y_prime.clear();
  res.h_prime = GroupSubset(g);
  for (std::size_t i = 0; i < strong.size(); ++i) {
    if (strong[i].candidate.n_of_z() == res.n2 && in_dual(strong[i])) {
      res.y_prime.push_back(i);
      res.h_prime |= strong[i].n_set;
    }
  }

  for (const auto* s : {&res.h, &res.h_prime}) {
    const char* name = s == &res.h ? "H" : "H'";
    if (!s->contains_identity()) throw LemmaViolation("main-theorem", std::string(name) + " misses the identity");
    if (!is_symmetric(*s)) throw LemmaViolation("main-theorem", std::string(name) + " is not symmetric");
  }
  if (!res.h_prime.subset_of(res.h)) throw LemmaViolation("main-theorem", "H' is not contained in H");

  res.h_cert = certify(res.h, res.family, cfg);
  res.h_prime_cert = certify(res.h_prime, res.family, cfg);

  const std::size_t k = res.base.k_uniform, n = res.base.n_uniform;
  res.n_z = n_z_bound(res.layers.n0, res.core.k0, k, n);
  res.n_y = n_y_bound(res.dual.m_prime, res.n_z, k, n);
}

PipelineResult run_pipeline(const Family& f, const PipelineConfig& cfg) {
  PipelineResult res;
  res.family = f;
  for (std::size_t i = 0; i < f.size(); ++i) {
    bool repeat = false;
    for (std::size_t j : res.distinct) repeat = repeat || f.members[j].carrier == f.members[i].carrier;
    if (!repeat) res.distinct.push_back(i);
  }
  res.base.members.reserve(res.distinct.size());
  for (std::size_t i : res.distinct) res.base.members.push_back(f.members[i]);
  res.base.pairwise.assign(res.distinct.size(), {});
  for (std::size_t a = 0; a < res.distinct.size(); ++a) {
    res.base.k_uniform = std::max(res.base.k_uniform, res.base.members[a].doubling_k);
    for (std::size_t b = 0; b < res.distinct.size(); ++b) {
      res.base.pairwise[a].push_back(f.pairwise[res.distinct[a]][res.distinct[b]]);
      res.base.n_uniform = std::max(res.base.n_uniform, res.base.pairwise[a].back().n);
    }
  }

  if (res.distinct.size() > cfg.family_cap) {
    throw Error(ErrorKind::FamilyTooLargeForExhaustive,
                "family has " + std::to_string(res.distinct.size()) +
                    " distinct members; exhaustive enumeration is capped at " + std::to_string(cfg.family_cap));
  }
  res.squared = family_square(res.base, cfg.search);
  res.candidates = enumerate_candidates(res.squared, cfg.max_union, cfg.family_cap);

  PackingCache cache;
  res.core = compute_core(res.squared, res.candidates, cache, cfg.search);
  res.layers = build_families(res.core.strong);
  res.dual = compute_dual(res.core.strong, res.layers, cache, cfg.search);
  assemble(res, cfg.search);
  return res;
}

bool InvarianceReport::ok() const {
  return std::all_of(verdicts.begin(), verdicts.end(),
                     [](const auto& v) { return !v.stabilizing || (v.h_invariant && v.h_prime_invariant); });
}

InvarianceReport invariance_check(const PipelineResult& res, const std::vector<Automorphism>& autos) {
  InvarianceReport report;
  for (std::size_t a = 0; a < autos.size(); ++a) {
    const auto& phi = autos[a];
    InvarianceVerdict v;
    v.automorphism = a;
    v.stabilizing = std::all_of(res.base.members.begin(), res.base.members.end(), [&](const auto& m) {
      const GroupSubset image = apply_automorphism(phi, m.carrier);
      return std::any_of(res.base.members.begin(), res.base.members.end(),
                         [&](const auto& other) { return other.carrier == image; });
    });
    if (v.stabilizing) {
      v.h_invariant = apply_automorphism(phi, res.h) == res.h;
      v.h_prime_invariant = apply_automorphism(phi, res.h_prime) == res.h_prime;
    }
    report.verdicts.push_back(v);
  }
  return report;
}

void require_invariance(const InvarianceReport& report) {
  for (const auto& v : report.verdicts) {
    if (v.stabilizing && !(v.h_invariant && v.h_prime_invariant)) {
      throw LemmaViolation("invariance", "automorphism " + std::to_string(v.automorphism) +
                                             " stabilizes the family but moves " +
                                             (v.h_invariant ? "H'" : "H"));
    }
  }
}

}  // namespace asg
