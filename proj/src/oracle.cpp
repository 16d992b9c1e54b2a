#include "asg/oracle.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <limits>
#include <map>

#include "asg/error.hpp"

namespace asg {

// ---------------------------------------------------------------------------
// Exhaustive recomputation. Everything below uses group-core only.

namespace {

bool choose_disjoint(const std::vector<GroupSubset>& translates, std::size_t start, std::size_t need,
                     const GroupSubset& used) {
  if (need == 0) return true;
  for (std::size_t i = start; i + need <= translates.size(); ++i) {
    if (translates[i].intersects(used)) continue;
    if (choose_disjoint(translates, i + 1, need - 1, used | translates[i])) return true;
  }
  return false;
}

bool choose_cover(const GroupSubset& x, const std::vector<GroupSubset>& translates, std::size_t start,
                  std::size_t need, const GroupSubset& covered) {
  if (need == 0) return x.subset_of(covered);
  for (std::size_t i = start; i + need <= translates.size(); ++i)
    if (choose_cover(x, translates, i + 1, need - 1, covered | translates[i])) return true;
  return false;
}

class NaiveIndex {
 public:
  std::size_t operator()(const GroupSubset& x, const GroupSubset& y) {
    auto key = std::make_pair(x.words(), y.words());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::size_t v = naive_packing(x, y);
    memo_.emplace(std::move(key), v);
    return v;
  }

 private:
  std::map<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>, std::size_t> memo_;
};

}  // namespace

std::size_t naive_packing(const GroupSubset& x, const GroupSubset& y) {
  if (x.empty() || y.empty()) throw Error(ErrorKind::EmptyInput, "packing of an empty set");
  std::vector<GroupSubset> translates;
  x.for_each([&](Element c) { translates.push_back(left_translate(c, y)); });
  const std::size_t order = x.group()->order();
  // Disjoint translates of y fit at most |G| / |y| times.
  std::size_t s = std::min(translates.size(), order / y.size());
  for (; s > 1; --s)
    if (choose_disjoint(translates, 0, s, GroupSubset(x.group()))) return s;
  return 1;
}

std::size_t naive_cover(const GroupSubset& x, const GroupSubset& y) {
  if (x.empty() || y.empty()) throw Error(ErrorKind::EmptyInput, "cover of an empty set");
  const auto& g = x.group();
  std::vector<GroupSubset> translates;
  for (Element z = 0; z < g->order(); ++z) translates.push_back(left_translate(z, y));
  for (std::size_t s = (x.size() + y.size() - 1) / y.size(); s <= g->order(); ++s)
    if (choose_cover(x, translates, 0, s, GroupSubset(g))) return s;
  throw Error(ErrorKind::PreconditionFailed, "no cover exists");
}

CoreValues oracle_recompute(const std::vector<GroupSubset>& input, const OracleCaps& caps) {
  if (input.empty()) throw Error(ErrorKind::EmptyInput, "family is empty");
  const auto& g = input.front().group();
  if (input.size() > caps.max_members || g->order() > caps.max_order) {
    throw Error(ErrorKind::CapExceeded, "oracle is limited to " + std::to_string(caps.max_members) +
                                            " members in groups of order at most " +
                                            std::to_string(caps.max_order));
  }
  std::vector<GroupSubset> members;
  for (const auto& s : input)
    if (std::find(members.begin(), members.end(), s) == members.end()) members.push_back(s);

  const std::size_t n = members.size();
  std::vector<GroupSubset> sq;
  for (const auto& x : members) sq.push_back(set_product(x, x));

  // Exponents 2^0 .. 2^top; powers of a subset of G are stable from 2^L on,
  // L = ceil(log2 |G|), and the last level is needed for eta.
  std::size_t L = 0;
  while ((std::size_t{1} << L) < g->order()) ++L;
  const std::size_t top = L + 1;
  auto powers = [&](const GroupSubset& a) {
    std::vector<GroupSubset> out{a};
    GroupSubset p = a;
    for (std::size_t j = 2; j <= (std::size_t{1} << top); ++j) {
      p = set_product(p, a);
      if ((j & (j - 1)) == 0) out.push_back(p);
    }
    return out;
  };

  NaiveIndex index;
  struct Cand {
    std::uint64_t mask;
    std::size_t value, k;
    std::vector<std::vector<GroupSubset>> pw;  // per member, per level
  };
  std::vector<Cand> cands;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    GroupSubset z(g);
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) z |= sq[i];
    Cand c{mask, std::numeric_limits<std::size_t>::max(), 0, {}};
    for (std::size_t i = 0; i < n; ++i) c.pw.push_back(powers(sq[i] & z));
    for (std::size_t k = 0; k <= L; ++k) {
      std::size_t v = 0;
      for (std::size_t i = 0; i < n; ++i) v = std::max(v, index(sq[i], c.pw[i][k]));
      if (v < c.value) {
        c.value = v;
        c.k = k;
      }
    }
    cands.push_back(std::move(c));
  }

  CoreValues out;
  out.m = std::numeric_limits<std::size_t>::max();
  for (const auto& c : cands) out.m = std::min(out.m, c.value);
  out.k0 = std::numeric_limits<std::size_t>::max();
  for (const auto& c : cands)
    if (c.value == out.m) out.k0 = std::min(out.k0, c.k);

  struct Strong {
    std::uint64_t mask;
    GroupSubset nz;
  };
  std::vector<Strong> strong;
  for (const auto& c : cands) {
    if (c.value != out.m || c.k != out.k0) continue;
    GroupSubset nz(g);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = c.pw[i][out.k0 + 1];
      if (index(sq[i], p) == out.m) nz |= sq[i] & p;
    }
    strong.push_back({c.mask, nz});
  }

  out.n0 = std::numeric_limits<std::size_t>::max();
  for (const auto& s : strong) out.n0 = std::min<std::size_t>(out.n0, std::popcount(s.mask));
  std::vector<const Strong*> i_prime, i_family;
  for (const auto& s : strong)
    if (static_cast<std::size_t>(std::popcount(s.mask)) == out.n0) i_prime.push_back(&s);
  for (const auto& s : strong) {
    for (const auto* p : i_prime) {
      if ((p->mask & s.mask) == p->mask) {
        i_family.push_back(&s);
        break;
      }
    }
  }

  std::vector<std::size_t> dual;
  out.m_prime = std::numeric_limits<std::size_t>::max();
  for (const auto* i : i_family) {
    std::size_t worst = 0;
    for (const auto* j : i_prime) worst = std::max(worst, index(i->nz, j->nz));
    dual.push_back(worst);
    out.m_prime = std::min(out.m_prime, worst);
  }
  std::vector<GroupSubset> layer;
  out.h = GroupSubset(g);
  for (std::size_t t = 0; t < i_family.size(); ++t) {
    if (dual[t] != out.m_prime) continue;
    out.h |= i_family[t]->nz;
    layer.push_back(i_family[t]->nz);
  }
  auto in_layer = [&](const GroupSubset& s) { return std::find(layer.begin(), layer.end(), s) != layer.end(); };
  out.n2 = std::numeric_limits<std::size_t>::max();
  for (const auto& s : strong)
    if (in_layer(s.nz)) out.n2 = std::min<std::size_t>(out.n2, std::popcount(s.mask));
  out.h_prime = GroupSubset(g);
  for (const auto& s : strong)
    if (in_layer(s.nz) && static_cast<std::size_t>(std::popcount(s.mask)) == out.n2) out.h_prime |= s.nz;
  return out;
}

// ---------------------------------------------------------------------------

bool OracleComparison::all_match() const {
  return std::all_of(matches.begin(), matches.end(), [](const auto& kv) { return kv.second; });
}

CoreValues pipeline_values(const PipelineResult& res) {
  return CoreValues{res.core.m, res.core.k0, res.layers.n0, res.dual.m_prime, res.n2, res.h, res.h_prime};
}

OracleComparison compare_with_oracle(const PipelineResult& res, const OracleCaps& caps) {
  std::vector<GroupSubset> carriers;
  for (const auto& m : res.family.members) carriers.push_back(m.carrier);
  OracleComparison c;
  c.oracle = oracle_recompute(carriers, caps);
  c.pipeline = pipeline_values(res);
  c.matches["m"] = c.oracle.m == c.pipeline.m;
  c.matches["k0"] = c.oracle.k0 == c.pipeline.k0;
  c.matches["n0"] = c.oracle.n0 == c.pipeline.n0;
  c.matches["m_prime"] = c.oracle.m_prime == c.pipeline.m_prime;
  c.matches["n2"] = c.oracle.n2 == c.pipeline.n2;
  c.matches["h"] = c.oracle.h == c.pipeline.h;
  c.matches["h_prime"] = c.oracle.h_prime == c.pipeline.h_prime;
  return c;
}

namespace {

std::string mismatched_fields(const OracleComparison& c) {
  std::string s;
  for (const auto& [k, v] : c.matches)
    if (!v) s += (s.empty() ? "" : ", ") + k;
  return s;
}

Instance cayley_instance(const Family& f) {
  Instance inst;
  const auto& g = f.group();
  inst.group.kind = "cayley";
  for (Element a = 0; a < g->order(); ++a) inst.group.table.emplace_back(g->row(a).begin(), g->row(a).end());
  for (const auto& m : f.members) inst.family.push_back(m.carrier.elements());
  return inst;
}

}  // namespace

OracleReport oracle_core(const Family& f, const PipelineConfig& cfg, const OracleCaps& caps) {
  if (f.size() > caps.max_members || f.group()->order() > caps.max_order) {
    throw Error(ErrorKind::CapExceeded, "oracle is limited to " + std::to_string(caps.max_members) +
                                            " members in groups of order at most " +
                                            std::to_string(caps.max_order));
  }
  OracleReport rep;
  rep.digest = instance_digest(cayley_instance(f));
  const auto res = run_pipeline(f, cfg);
  rep.comparison = compare_with_oracle(res, caps);
  rep.lemmas = check_lemmas(res, cfg.search);
  rep.lemmas.record("oracle-equivalence", rep.comparison.all_match(),
                    "pipeline and oracle differ on " + mismatched_fields(rep.comparison));
  if (!rep.comparison.all_match()) {
    throw LemmaViolation("oracle-equivalence", "pipeline and oracle differ on " + mismatched_fields(rep.comparison),
                         serialize_instance(cayley_instance(f)));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Randomized battery.

namespace {

GroupSpec cyclic_spec(std::size_t n) { return GroupSpec{"cyclic", n, {}, {}}; }
GroupSpec dihedral_spec(std::size_t n) { return GroupSpec{"dihedral", n, {}, {}}; }
GroupSpec product_spec(std::vector<GroupSpec> f) { return GroupSpec{"product", 0, std::move(f), {}}; }

std::size_t spec_order(const GroupSpec& s) {
  if (s.kind == "cyclic") return s.n;
  if (s.kind == "dihedral") return 2 * s.n;
  if (s.kind == "product") {
    std::size_t o = 1;
    for (const auto& f : s.factors) o *= spec_order(f);
    return o;
  }
  return s.table.size();
}

std::size_t draw(std::mt19937_64& rng, std::size_t bound) { return static_cast<std::size_t>(rng() % bound); }

// Each element joins with probability num/den before symmetrizing.
GroupSubset random_symmetric(const GroupPtr& g, std::mt19937_64& rng, std::size_t num, std::size_t den) {
  GroupSubset s(g);
  for (Element x = 0; x < g->order(); ++x)
    if (draw(rng, den) < num) s.insert(x);
  s |= set_inverse(s);
  s.insert(g->identity());
  return s;
}

GroupSubset conjugate(const GroupSubset& s, Element c) {
  const auto& g = s.group();
  GroupSubset out(g);
  s.for_each([&](Element x) { out.insert(g->mul(g->mul(c, x), g->inv(c))); });
  return out;
}

}  // namespace

std::vector<GroupSpec> battery_groups(std::size_t cap) {
  std::vector<GroupSpec> out;
  for (std::size_t n = 1; n <= cap; ++n) out.push_back(cyclic_spec(n));
  for (std::size_t n = 2; 2 * n <= cap; ++n) out.push_back(dihedral_spec(n));
  for (std::size_t a = 2; a * a <= cap; ++a)
    for (std::size_t b = a; a * b <= cap; ++b) out.push_back(product_spec({cyclic_spec(a), cyclic_spec(b)}));
  for (std::size_t a = 2; a <= 3; ++a)
    for (std::size_t n = 3; 2 * n * a <= cap; ++n) out.push_back(product_spec({cyclic_spec(a), dihedral_spec(n)}));
  if (cap >= 8) out.push_back(product_spec({cyclic_spec(2), cyclic_spec(2), cyclic_spec(2)}));
  if (cap >= 16) out.push_back(product_spec({cyclic_spec(2), cyclic_spec(2), cyclic_spec(2), cyclic_spec(2)}));
  return out;
}

RandomInstance random_instance(std::mt19937_64& rng, const std::vector<GroupSpec>& groups) {
  RandomInstance ri;
  ri.instance.group = groups[draw(rng, groups.size())];
  const auto g = build_group(ri.instance.group);
  const std::size_t extra = draw(rng, 4);
  const std::size_t den = std::size_t{1} << (1 + draw(rng, 3));  // density 1/2, 1/4 or 1/8
  GroupSubset s = random_symmetric(g, rng, 1, den);

  auto perturb = [&](const GroupSubset& a) {
    const Element x = static_cast<Element>(draw(rng, g->order()));
    auto p = a;
    p.insert(x);
    p.insert(g->inv(x));
    return p;
  };
  std::vector<Automorphism> autos;
  std::function<GroupSubset(const std::vector<GroupSubset>&)> next;
  switch (draw(rng, 5)) {
    case 0:
      ri.generator = "subgroup-conjugates";
      s = generated_subgroup(s).subgroup;
      [[fallthrough]];
    case 1:
      if (ri.generator.empty()) ri.generator = "conjugates";
      next = [&](const auto&) { return conjugate(s, static_cast<Element>(draw(rng, g->order()))); };
      break;
    case 2:
      ri.generator = "powers";
      next = [&](const auto& fam) { return set_product(fam.back(), s); };
      break;
    case 3:
      ri.generator = "automorphic-images";
      autos = automorphisms(g);
      next = [&](const auto&) { return apply_automorphism(autos[draw(rng, autos.size())], s); };
      break;
    default:
      ri.generator = "perturbations";
      next = [&](const auto&) { return perturb(s); };
      break;
  }

  // Draws that repeat a member are retried a few times, then replaced by a
  // perturbation of the last member, so small abelian groups still give
  // families with several distinct members.
  std::vector<GroupSubset> family{s};
  for (std::size_t i = 0; i < extra; ++i) {
    GroupSubset m = next(family);
    for (int tries = 0; tries < 8 && std::find(family.begin(), family.end(), m) != family.end(); ++tries)
      m = next(family);
    if (std::find(family.begin(), family.end(), m) != family.end()) m = perturb(family.back());
    family.push_back(m);
  }
  for (const auto& m : family) ri.instance.family.push_back(m.elements());
  return ri;
}

BatteryReport lemma_battery(const BatteryOptions& opt) {
  if (opt.trials == 0) throw Error(ErrorKind::PreconditionFailed, "trials must be at least 1");
  if (opt.group_cap == 0) throw Error(ErrorKind::PreconditionFailed, "group cap must be at least 1");
  BatteryReport rep;
  rep.options = opt;
  for (const auto& l : core_lemma_labels()) rep.lemmas.tallies[l];

  std::mt19937_64 rng(opt.seed);
  const auto groups = battery_groups(opt.group_cap);
  PipelineConfig cfg;
  cfg.search = opt.search;
  const OracleCaps caps;

  for (std::size_t t = 0; t < opt.trials; ++t) {
    auto ri = random_instance(rng, groups);
    const std::string reproducer = serialize_instance(ri.instance);
    BatteryTrial trial;
    trial.index = t;
    trial.generator = ri.generator;
    trial.digest = sha256_hex(reproducer);
    trial.group_order = spec_order(ri.instance.group);
    trial.members = ri.instance.family.size();

    LemmaReport lem;
    try {
      const auto g = build_group(ri.instance.group);
      const auto res = run_pipeline(family_validate(build_family(ri.instance, g), cfg.search), cfg);
      LemmaOptions lo;
      lo.corrupt_certificate = opt.inject_fault && t == 0;
      lem = check_lemmas(res, cfg.search, lo);
      record_invariance(lem, invariance_check(res, automorphisms(g)));
      if (res.family.size() <= caps.max_members && g->order() <= caps.max_order) {
        const auto cmp = compare_with_oracle(res, caps);
        lem.record("oracle-equivalence", cmp.all_match(), "pipeline and oracle differ on " + mismatched_fields(cmp));
        ++rep.oracle_checked;
      }
    } catch (LemmaViolation& v) {
      v.set_reproducer(reproducer);
      throw;
    }
    trial.failures = lem.failure_count();
    rep.lemmas.merge(lem);
    rep.trials.push_back(trial);
    if (!lem.clean()) {
      const auto& f = lem.failures.front();
      throw LemmaViolation(f.lemma, "trial " + std::to_string(t) + " (" + ri.generator + "): " + f.detail, reproducer);
    }
  }
  return rep;
}

Json battery_json(const BatteryReport& rep) {
  Json j;
  j["format"] = "asg-battery/1";
  j["seed"] = rep.options.seed;
  j["trials"] = rep.options.trials;
  j["group_cap"] = rep.options.group_cap;
  j["oracle_checked"] = rep.oracle_checked;
  Json t = Json::object();
  std::size_t failures = 0;
  for (const auto& [k, v] : rep.lemmas.tallies) {
    t[k] = Json{{"pass", v.pass}, {"fail", v.fail}};
    failures += v.fail;
  }
  j["violations"] = failures;
  j["tallies"] = t;
  j["instances"] = Json::array();
  for (const auto& tr : rep.trials) {
    Json e;
    e["index"] = tr.index;
    e["generator"] = tr.generator;
    e["group_order"] = tr.group_order;
    e["members"] = tr.members;
    e["digest"] = tr.digest;
    e["failures"] = tr.failures;
    j["instances"].push_back(e);
  }
  return j;
}

SubgroupCrosscheck subgroup_crosscheck(const Family& f, const std::vector<Automorphism>& autos,
                                       const PipelineConfig& cfg) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (!is_subgroup(f.members[i].carrier))
      throw Error(ErrorKind::PreconditionFailed, "member " + std::to_string(i) + " is not a subgroup", i);
  SubgroupCrosscheck out;
  out.result = run_pipeline(f, cfg);
  const auto& res = out.result;
  for (const auto* c : {&res.h_cert, &res.h_prime_cert}) {
    const auto& s = c->doubling.carrier;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const auto& x = f.members[i].carrier;
      const auto& m = c->against_members[i];
      if (!s.subset_of(set_product(m.z0, x)) || !x.subset_of(set_product(m.z1, s)))
        throw LemmaViolation("main-theorem", "commensurability certificate against member " + std::to_string(i) +
                                                 " does not re-validate");
    }
  }
  out.invariance = invariance_check(res, autos);
  require_invariance(out.invariance);
  out.h_is_subgroup = is_subgroup(res.h);
  out.h_prime_is_subgroup = is_subgroup(res.h_prime);
  return out;
}

}  // namespace asg
