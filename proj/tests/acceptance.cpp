// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "asg/error.hpp"
#include "asg/oracle.hpp"

using namespace asg;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Case {
  std::string name;
  std::vector<GroupSubset> members;
  std::vector<Automorphism> autos;
  std::string autos_source;  // enumerated | supplied
  OracleCaps caps;
};

GroupSubset interval(const GroupPtr& g, long r) {
  const long n = static_cast<long>(g->order());
  GroupSubset s(g);
  for (long i = -r; i <= r; ++i) s.insert(static_cast<Element>(((i % n) + n) % n));
  return s;
}

std::vector<Automorphism> unit_multiplications(const GroupPtr& zn) {
  std::vector<Automorphism> out;
  const std::size_t n = zn->order();
  for (std::size_t u = 1; u < n; ++u) {
    if (std::gcd(u, n) != 1) continue;
    std::vector<Element> map(n);
    for (std::size_t x = 0; x < n; ++x) map[x] = static_cast<Element>(u * x % n);
    out.push_back(make_automorphism(zn, map));
  }
  return out;
}

Case enumerated(std::string name, std::vector<GroupSubset> members, OracleCaps caps = {}) {
  auto autos = automorphisms(members.front().group());
  return Case{std::move(name), std::move(members), std::move(autos), "enumerated", caps};
}

// The instances shared by criteria 2, 4 and 5.
std::vector<Case> corpus() {
  std::vector<Case> out;

  auto d4 = make_dihedral(4);
  const std::vector<GroupSubset> five{GroupSubset::of(d4, {0, 4}), GroupSubset::of(d4, {0, 5}),
                                      GroupSubset::of(d4, {0, 6}), GroupSubset::of(d4, {0, 7}),
                                      GroupSubset::of(d4, {0, 2})};
  for (unsigned mask = 1; mask < 32; ++mask) {
    std::vector<GroupSubset> sub;
    std::string label;
    for (unsigned i = 0; i < 5; ++i) {
      if (mask >> i & 1) {
        sub.push_back(five[i]);
        label += std::to_string(i);
      }
    }
    if (sub.size() <= 4) out.push_back(enumerated("D4 subfamily " + label, sub));
  }
  out.push_back(enumerated("D4 five subgroups", five, OracleCaps{5, 24}));

  auto z12 = make_cyclic(12);
  out.push_back(enumerated("Z12 [-1,1] [-2,2]", {interval(z12, 1), interval(z12, 2)}));
  out.push_back(enumerated("Z12 [-1,1] [-3,3]", {interval(z12, 1), interval(z12, 3)}));
  out.push_back(enumerated("Z12 [-1,1] [-2,2] [-3,3]", {interval(z12, 1), interval(z12, 2), interval(z12, 3)}));
  out.push_back(enumerated("Z12 [-2,2] {0,6}", {interval(z12, 2), GroupSubset::of(z12, {0, 6})}));

  auto z16 = make_cyclic(16);
  out.push_back(enumerated("Z16 [-1,1] [-2,2]", {interval(z16, 1), interval(z16, 2)}));
  out.push_back(enumerated("Z16 [-2,2] [-4,4]", {interval(z16, 2), interval(z16, 4)}));
  out.push_back(enumerated("Z16 [-1,1] [-3,3] [-5,5]", {interval(z16, 1), interval(z16, 3), interval(z16, 5)}));
  out.push_back(enumerated("Z16 [-3,3] {0,8} {0,4,8,12}",
                           {interval(z16, 3), GroupSubset::of(z16, {0, 8}), GroupSubset::of(z16, {0, 4, 8, 12})}));

  auto v4 = make_direct_product(make_cyclic(2), make_cyclic(2));
  const auto a = GroupSubset::of(v4, {0, 1}), b = GroupSubset::of(v4, {0, 2}), c = GroupSubset::of(v4, {0, 3});
  out.push_back(enumerated("Klein <a> <b>", {a, b}));
  out.push_back(enumerated("Klein <a> <b> <ab>", {a, b, c}));
  out.push_back(enumerated("Klein whole group", {GroupSubset::full(v4)}));
  out.push_back(enumerated("Klein <a> V", {a, GroupSubset::full(v4)}));
  out.push_back(enumerated("Klein {e,a,b} <ab>", {GroupSubset::of(v4, {0, 1, 2}), c}));

  // Order above 16: invariance is checked against a supplied list.
  auto z24 = make_cyclic(24);
  out.push_back(Case{"Z24 [-1,1] [-2,2]", {interval(z24, 1), interval(z24, 2)}, unit_multiplications(z24), "supplied",
                     {}});
  out.push_back(Case{"Z24 {0,12} {0,8,16}",
                     {GroupSubset::of(z24, {0, 12}), GroupSubset::of(z24, {0, 8, 16})},
                     unit_multiplications(z24),
                     "supplied",
                     {}});
  return out;
}

std::vector<GroupSubset> all_subgroups(const GroupPtr& g) {
  std::vector<GroupSubset> subs;
  auto add = [&](const GroupSubset& s) {
    if (std::find(subs.begin(), subs.end(), s) == subs.end()) subs.push_back(s);
  };
  for (Element x = 0; x < g->order(); ++x) add(generated_subgroup(GroupSubset::of(g, {g->identity(), x, g->inv(x)})).subgroup);
  // Every subgroup is a join of cyclic ones.
  for (std::size_t i = 0; i < subs.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) add(generated_subgroup(subs[i] | subs[j]).subgroup);
  return subs;
}

struct Verdict {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

void print(int number, const std::string& name, const Verdict& v, const std::string& summary) {
  std::cout << "criterion " << number << " " << name << ": " << (v.pass ? "PASS" : "FAIL") << " (" << summary << ")";
  if (!v.pass) std::cout << " first failure: " << v.detail;
  std::cout << std::endl;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ASG_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

template <typename F>
void guarded(Verdict& v, const std::string& where, F&& f) {
  try {
    f();
  } catch (const std::exception& e) {
    v.fail(where + ": " + e.what());
  }
}

bool identity_cases() {
  Verdict v;
  std::size_t count = 0;
  double worst = 0;
  for (const auto& spec : battery_groups(24)) {
    const auto g = build_group(spec);
    for (const auto& h : all_subgroups(g)) {
      const std::string where = "group of order " + std::to_string(g->order()) + ", |H| = " + std::to_string(h.size());
      guarded(v, where, [&] {
        const auto t = Clock::now();
        const auto r = run_pipeline(family_validate({h}));
        worst = std::max(worst, seconds_since(t));
        ++count;
        if (r.core.m != 1 || r.core.k0 != 0) v.fail(where + ": m or k0 differs from 1, 0");
        if (!(r.h == h) || !(r.h_prime == h)) v.fail(where + ": h or h_prime differs from H");
        for (const auto* c : {&r.h_cert, &r.h_prime_cert}) {
          if (c->doubling.doubling_k != 1 || c->max_n != 1) v.fail(where + ": certificate larger than 1");
          for (const auto& m : c->against_members)
            if (m.z0.size() != 1 || m.z1.size() != 1) v.fail(where + ": translate set larger than 1");
        }
      });
    }
  }
  if (worst >= 1.0) v.fail("slowest instance took " + std::to_string(worst) + " s");
  std::ostringstream s;
  s << count << " subgroup families, slowest " << worst * 1000 << " ms";
  print(1, "identity-cases", v, s.str());
  return v.pass;
}

bool oracle_equivalence(const std::vector<Case>& cases) {
  Verdict v;
  const auto t = Clock::now();
  std::size_t count = 0;
  for (const auto& c : cases) {
    guarded(v, c.name, [&] {
      const auto rep = oracle_core(family_validate(c.members), {}, c.caps);
      ++count;
      if (!rep.comparison.all_match()) v.fail(c.name + ": mismatch");
    });
  }
  const double secs = seconds_since(t);
  if (count < 25) v.fail("only " + std::to_string(count) + " instances compared");
  if (secs > 600) v.fail("took " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << count << " instances, all of m, k0, n0, m', n2, h, h' compared, " << secs << " s";
  print(2, "oracle-equivalence", v, s.str());
  return v.pass;
}

bool lemma_battery_baseline() {
  Verdict v;
  const auto t = Clock::now();
  std::size_t checks = 0, trials = 0, oracle = 0;
  guarded(v, "battery", [&] {
    BatteryOptions opt;
    opt.seed = 1;
    opt.trials = 100;
    opt.group_cap = 24;
    const auto rep = lemma_battery(opt);
    trials = rep.trials.size();
    oracle = rep.oracle_checked;
    for (const auto& label : core_lemma_labels()) {
      const auto it = rep.lemmas.tallies.find(label);
      if (it == rep.lemmas.tallies.end() || it->second.pass == 0) v.fail(label + " was never exercised");
      if (it != rep.lemmas.tallies.end()) checks += it->second.pass;
    }
    if (!rep.lemmas.clean()) v.fail(rep.lemmas.failures.front().lemma + ": " + rep.lemmas.failures.front().detail);
  });
  const double secs = seconds_since(t);
  if (secs > 600) v.fail("took " + std::to_string(secs) + " s");
  std::ostringstream s;
  s << trials << " trials, " << checks << " passing checks over the nine lemma labels, " << oracle
    << " oracle comparisons, 0 violations required, " << secs << " s";
  print(3, "lemma-battery", v, s.str());
  return v.pass;
}

bool main_theorem(const std::vector<Case>& cases) {
  Verdict v;
  std::size_t count = 0, supplied = 0;
  for (const auto& c : cases) {
    guarded(v, c.name, [&] {
      const auto r = run_pipeline(family_validate(c.members));
      for (const auto& [label, s] : {std::pair<std::string, const GroupSubset*>{"h", &r.h}, {"h_prime", &r.h_prime}}) {
        const std::string where = c.name + " " + label;
        if (!s->contains_identity()) v.fail(where + " misses the identity");
        if (!is_symmetric(*s)) v.fail(where + " is not symmetric");
        const auto approx = minimal_doubling(*s);
        if (approx.doubling_k == 0 || !set_product(*s, *s).subset_of(set_product(approx.doubling_witness, *s)))
          v.fail(where + " has no valid doubling witness");
        for (const auto& m : c.members) {
          const auto cert = commensurability(approx, minimal_doubling(m));
          if (!s->subset_of(set_product(cert.z0, m)) || !m.subset_of(set_product(cert.z1, *s)))
            v.fail(where + " is not commensurable with a member");
        }
      }
      const auto inv = invariance_check(r, c.autos);
      for (const auto& verdict : inv.verdicts)
        if (verdict.stabilizing && (!verdict.h_invariant || !verdict.h_prime_invariant))
          v.fail(c.name + ": automorphism " + std::to_string(verdict.automorphism) + " moves h or h_prime");
      if (c.autos_source == "supplied") ++supplied;
      ++count;
    });
  }
  std::ostringstream s;
  s << count << " instances, " << supplied << " with supplied automorphism lists";
  print(4, "main-theorem", v, s.str());
  return v.pass;
}

bool squaring_bounds(const std::vector<Case>& cases) {
  Verdict v;
  std::size_t count = 0;
  for (const auto& c : cases) {
    guarded(v, c.name, [&] {
      const auto f = family_validate(c.members);
      std::vector<GroupSubset> squares;
      for (const auto& m : c.members) squares.push_back(set_product(m, m));
      const auto sq = family_validate(squares);
      const std::size_t k = f.k_uniform, n = f.n_uniform;
      if (sq.k_uniform > k * k * k) v.fail(c.name + ": K of the squares exceeds K^3");
      if (sq.n_uniform > n * k) v.fail(c.name + ": N of the squares exceeds N K");
      ++count;
    });
  }
  print(5, "squaring-bounds", v, std::to_string(count) + " instances, constants of the squares recomputed");
  return v.pass;
}

bool determinism() {
  Verdict v;
  const fs::path work = fs::temp_directory_path() / "asg_acceptance";
  fs::create_directories(work);
  std::size_t compared = 0;
  for (const auto& e : fs::directory_iterator(ASG_INSTANCE_DIR)) {
    if (e.path().extension() != ".json") continue;
    const std::string in = e.path().string();
    const auto a = work / "a.json", b = work / "b.json";
    fs::remove(a);
    fs::remove(b);
    const int ra = run_cli("run " + in + " --check-lemmas --oracle --quiet --out " + a.string());
    const int rb = run_cli("run " + in + " --check-lemmas --oracle --quiet --out " + b.string());
    if (ra != rb) v.fail(e.path().filename().string() + ": exit codes differ");
    if (fs::exists(a) != fs::exists(b) || slurp(a) != slurp(b))
      v.fail(e.path().filename().string() + ": reports differ");
    ++compared;
  }
  const auto a = work / "bat_a.json", b = work / "bat_b.json";
  const int ra = run_cli("battery --trials 100 --seed 1 --group-cap 24 --quiet --out " + a.string());
  const int rb = run_cli("battery --trials 100 --seed 1 --group-cap 24 --quiet --out " + b.string());
  if (ra != 0 || rb != 0) v.fail("battery exited with " + std::to_string(ra) + " and " + std::to_string(rb));
  if (slurp(a).empty() || slurp(a) != slurp(b)) v.fail("battery outputs differ");
  ++compared;
  fs::remove_all(work);
  print(6, "determinism", v, std::to_string(compared) + " pairs of runs compared byte for byte");
  return v.pass;
}

bool finite_family_nontrivial() {
  Verdict v;
  std::string summary;
  guarded(v, "z12_intervals.json", [&] {
    const auto inst = parse_instance(slurp(fs::path(ASG_INSTANCE_DIR) / "z12_intervals.json"));
    const auto g = build_group(inst.group);
    const auto f = family_validate(build_family(inst, g));
    const auto r = run_pipeline(f);
    const std::size_t kn = f.k_uniform * f.n_uniform;
    if (r.h_prime.size() <= 1) v.fail("h_prime is trivial");
    for (const auto& m : f.members)
      if (r.h_prime.size() * kn < m.carrier.size()) v.fail("h_prime is smaller than |member| / (K N)");
    summary = "|h_prime| = " + std::to_string(r.h_prime.size()) + ", K N = " + std::to_string(kn);
  });
  print(7, "finite-family-nontrivial", v, summary);
  return v.pass;
}

}  // namespace

int main() {
  const auto cases = corpus();
  bool ok = true;
  ok &= identity_cases();
  ok &= oracle_equivalence(cases);
  ok &= lemma_battery_baseline();
  ok &= main_theorem(cases);
  ok &= squaring_bounds(cases);
  ok &= determinism();
  ok &= finite_family_nontrivial();
  return ok ? 0 : 1;
}
