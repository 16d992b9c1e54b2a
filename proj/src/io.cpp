#include "asg/io.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "asg/error.hpp"
#include "asg/oracle.hpp"

namespace asg {

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

void require_keys(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; }) == allowed.end())
      parse_fail(where, "unknown field \"" + k + "\"");
  }
}

std::uint64_t get_uint(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    parse_fail(where, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::vector<Element> get_index_array(const Json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array of element indices");
  std::vector<Element> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto v = get_uint(j[i], where + "[" + std::to_string(i) + "]");
    if (v > std::numeric_limits<Element>::max()) parse_fail(where + "[" + std::to_string(i) + "]", "index too large");
    out.push_back(static_cast<Element>(v));
  }
  return out;
}

GroupSpec group_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) parse_fail(where, "expected {\"kind\": ...}");
  GroupSpec g;
  g.kind = j["kind"].get<std::string>();
  if (g.kind == "cyclic" || g.kind == "dihedral") {
    require_keys(j, where, {"kind", "n"});
    if (!j.contains("n")) parse_fail(where, "missing field \"n\"");
    g.n = get_uint(j["n"], where + ".n");
    if (g.n == 0) parse_fail(where + ".n", "must be at least 1");
  } else if (g.kind == "product") {
    require_keys(j, where, {"kind", "factors"});
    if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
      parse_fail(where, "\"factors\" must be a nonempty array");
    for (std::size_t i = 0; i < j["factors"].size(); ++i)
      g.factors.push_back(group_from_json(j["factors"][i], where + ".factors[" + std::to_string(i) + "]"));
  } else if (g.kind == "cayley") {
    require_keys(j, where, {"kind", "table"});
    if (!j.contains("table") || !j["table"].is_array() || j["table"].empty())
      parse_fail(where, "\"table\" must be a nonempty array of rows");
    const std::size_t n = j["table"].size();
    for (std::size_t r = 0; r < n; ++r) {
      const std::string rw = where + ".table[" + std::to_string(r) + "]";
      g.table.push_back(get_index_array(j["table"][r], rw));
      if (g.table.back().size() != n)
        parse_fail(rw, "row has " + std::to_string(g.table.back().size()) + " entries, expected " + std::to_string(n));
      for (std::size_t c = 0; c < n; ++c)
        if (g.table.back()[c] >= n) parse_fail(rw + "[" + std::to_string(c) + "]", "entry out of range");
    }
  } else {
    parse_fail(where + ".kind", "unknown group kind \"" + g.kind + "\"");
  }
  return g;
}

Json group_to_json(const GroupSpec& g) {
  Json j;
  j["kind"] = g.kind;
  if (g.kind == "cyclic" || g.kind == "dihedral") {
    j["n"] = g.n;
  } else if (g.kind == "product") {
    j["factors"] = Json::array();
    for (const auto& f : g.factors) j["factors"].push_back(group_to_json(f));
  } else {
    j["table"] = g.table;
  }
  return j;
}

bool is_scalar_array(const Json& j) {
  return std::none_of(j.begin(), j.end(), [](const Json& e) { return e.is_structured(); });
}

void dump_into(const Json& j, std::string& out, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (const auto& [k, v] : j.items()) {
      if (!first) out += ",\n";
      first = false;
      out += pad + Json(k).dump() + ": ";
      dump_into(v, out, depth + 1);
    }
    out += "\n" + close + "}";
  } else if (j.is_array()) {
    if (j.empty() || is_scalar_array(j)) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) out += (i ? ", " : "") + j[i].dump();
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += (i ? ",\n" : "") + pad;
      dump_into(j[i], out, depth + 1);
    }
    out += "\n" + close + "]";
  } else {
    out += j.dump();
  }
}

Json cover_json(const CommensurabilityCertificate& c) {
  Json j;
  j["n"] = c.n;
  j["z0"] = subset_json(c.z0);
  j["z1"] = subset_json(c.z1);
  return j;
}

Json set_certificates_json(const SetCertificates& c) {
  Json j;
  j["K"] = c.doubling.doubling_k;
  j["doubling_witness"] = subset_json(c.doubling.doubling_witness);
  j["N"] = c.max_n;
  j["members"] = Json::array();
  for (const auto& m : c.against_members) j["members"].push_back(cover_json(m));
  return j;
}

Json lemmas_json(const LemmaReport& rep) {
  Json j;
  Json t = Json::object();
  for (const auto& [k, v] : rep.tallies) t[k] = Json{{"pass", v.pass}, {"fail", v.fail}};
  j["tallies"] = t;
  j["failures"] = Json::array();
  for (const auto& f : rep.failures) j["failures"].push_back(Json{{"lemma", f.lemma}, {"detail", f.detail}});
  return j;
}

Json core_values_json(const CoreValues& v) {
  Json j;
  j["m"] = v.m;
  j["k0"] = v.k0;
  j["n0"] = v.n0;
  j["m_prime"] = v.m_prime;
  j["n2"] = v.n2;
  j["h"] = subset_json(v.h);
  j["h_prime"] = subset_json(v.h_prime);
  return j;
}

GroupSubset subset_from(const GroupPtr& g, const Json& j, const std::string& where) {
  GroupSubset s(g);
  for (const auto& v : j) {
    if (!v.is_number_unsigned() || v.get<std::uint64_t>() >= g->order())
      throw Error(ErrorKind::Parse, where + ": bad element index");
    s.insert(v.get<Element>());
  }
  return s;
}

}  // namespace

Instance instance_from_json(const Json& j) {
  require_keys(j, "instance", {"group", "family", "automorphisms", "config", "declared"});
  if (!j.contains("group")) parse_fail("instance", "missing field \"group\"");
  if (!j.contains("family")) parse_fail("instance", "missing field \"family\"");
  Instance inst;
  inst.group = group_from_json(j["group"], "group");
  if (!j["family"].is_array() || j["family"].empty()) parse_fail("family", "expected a nonempty array of members");
  for (std::size_t i = 0; i < j["family"].size(); ++i) {
    auto m = get_index_array(j["family"][i], "family[" + std::to_string(i) + "]");
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
    inst.family.push_back(std::move(m));
  }
  if (j.contains("automorphisms")) {
    if (!j["automorphisms"].is_array()) parse_fail("automorphisms", "expected an array of permutations");
    inst.automorphisms.emplace();
    for (std::size_t i = 0; i < j["automorphisms"].size(); ++i)
      inst.automorphisms->push_back(get_index_array(j["automorphisms"][i], "automorphisms[" + std::to_string(i) + "]"));
  }
  if (j.contains("config")) {
    const auto& c = j["config"];
    require_keys(c, "config", {"max_union", "family_cap", "budget", "seed", "order_cap", "automorphism_order_cap",
                               "oracle_max_members", "oracle_max_order"});
    auto opt = [&](const char* key, auto& field) {
      if (c.contains(key)) field = get_uint(c[key], std::string("config.") + key);
    };
    opt("max_union", inst.config.max_union);
    opt("family_cap", inst.config.family_cap);
    opt("budget", inst.config.budget);
    opt("seed", inst.config.seed);
    opt("order_cap", inst.config.order_cap);
    opt("automorphism_order_cap", inst.config.automorphism_order_cap);
    opt("oracle_max_members", inst.config.oracle_max_members);
    opt("oracle_max_order", inst.config.oracle_max_order);
  }
  if (j.contains("declared")) {
    const auto& d = j["declared"];
    require_keys(d, "declared", {"K", "N"});
    if (d.contains("K")) inst.declared_k = get_uint(d["K"], "declared.K");
    if (d.contains("N")) inst.declared_n = get_uint(d["N"], "declared.N");
  }
  return inst;
}

Instance parse_instance(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                                      "malformed JSON");
  }
  return instance_from_json(j);
}

Json instance_to_json(const Instance& inst) {
  Json j;
  j["group"] = group_to_json(inst.group);
  j["family"] = inst.family;
  if (inst.automorphisms) j["automorphisms"] = *inst.automorphisms;
  Json c = Json::object();
  auto put = [&](const char* key, const auto& field) {
    if (field) c[key] = *field;
  };
  put("max_union", inst.config.max_union);
  put("family_cap", inst.config.family_cap);
  put("budget", inst.config.budget);
  put("seed", inst.config.seed);
  put("order_cap", inst.config.order_cap);
  put("automorphism_order_cap", inst.config.automorphism_order_cap);
  put("oracle_max_members", inst.config.oracle_max_members);
  put("oracle_max_order", inst.config.oracle_max_order);
  if (!c.empty()) j["config"] = c;
  if (inst.declared_k || inst.declared_n) {
    Json d = Json::object();
    if (inst.declared_k) d["K"] = *inst.declared_k;
    if (inst.declared_n) d["N"] = *inst.declared_n;
    j["declared"] = d;
  }
  return j;
}

std::string canonical_dump(const Json& j) {
  std::string out;
  dump_into(j, out, 0);
  return out + "\n";
}

std::string serialize_instance(const Instance& inst) { return canonical_dump(instance_to_json(inst)); }

std::string sha256_hex(const std::string& data) {
  unsigned char md[SHA256_DIGEST_LENGTH];
  SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), md);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char b : md) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

std::string instance_digest(const Instance& inst) { return sha256_hex(serialize_instance(inst)); }

GroupPtr build_group(const GroupSpec& spec, std::size_t order_cap) {
  if (spec.kind == "cyclic" || spec.kind == "dihedral") {
    const std::size_t order = spec.kind == "cyclic" ? spec.n : 2 * spec.n;
    if (order > order_cap)
      throw Error(ErrorKind::OrderCapExceeded,
                  "group order " + std::to_string(order) + " exceeds the cap " + std::to_string(order_cap));
    return spec.kind == "cyclic" ? make_cyclic(spec.n) : make_dihedral(spec.n);
  }
  if (spec.kind == "product") {
    GroupPtr g = build_group(spec.factors.front(), order_cap);
    for (std::size_t i = 1; i < spec.factors.size(); ++i)
      g = make_direct_product(g, build_group(spec.factors[i], order_cap), order_cap);
    return g;
  }
  if (spec.kind == "cayley") return make_from_cayley(spec.table, order_cap);
  throw Error(ErrorKind::Parse, "unknown group kind \"" + spec.kind + "\"");
}

std::vector<GroupSubset> build_family(const Instance& inst, const GroupPtr& g) {
  std::vector<GroupSubset> out;
  for (std::size_t i = 0; i < inst.family.size(); ++i) {
    GroupSubset s(g);
    for (Element x : inst.family[i]) {
      if (x >= g->order())
        throw Error(ErrorKind::InvalidElement,
                    "member " + std::to_string(i) + ": element " + std::to_string(x) + " is not in the group", i);
      s.insert(x);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Automorphism> build_automorphisms(const Instance& inst, const GroupPtr& g) {
  std::vector<Automorphism> out;
  if (!inst.automorphisms) return out;
  for (std::size_t i = 0; i < inst.automorphisms->size(); ++i) {
    const auto& m = (*inst.automorphisms)[i];
    try {
      if (m.size() != g->order()) throw Error(ErrorKind::InvalidTable, "wrong length");
      out.push_back(make_automorphism(g, m));
    } catch (const Error& e) {
      throw Error(ErrorKind::InvalidTable, "automorphisms[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

PipelineConfig pipeline_config(const InstanceConfig& c) {
  PipelineConfig cfg;
  if (c.max_union) cfg.max_union = *c.max_union;
  if (c.family_cap) cfg.family_cap = *c.family_cap;
  if (c.budget) cfg.search.budget = *c.budget;
  return cfg;
}

void check_declared(const Instance& inst, const Family& f) {
  if (inst.declared_k && *inst.declared_k != f.k_uniform)
    throw Error(ErrorKind::DeclaredConstantMismatch, "declared K = " + std::to_string(*inst.declared_k) +
                                                         " but the family has K = " + std::to_string(f.k_uniform));
  if (inst.declared_n && *inst.declared_n != f.n_uniform)
    throw Error(ErrorKind::DeclaredConstantMismatch, "declared N = " + std::to_string(*inst.declared_n) +
                                                         " but the family has N = " + std::to_string(f.n_uniform));
}

Json subset_json(const GroupSubset& s) {
  Json a = Json::array();
  s.for_each([&](Element x) { a.push_back(x); });
  return a;
}

Json report_json(const ReportInputs& in) {
  const auto& res = *in.result;
  Json j;
  j["format"] = "asg-report/1";
  j["instance_digest"] = instance_digest(*in.instance);
  j["instance"] = instance_to_json(*in.instance);
  j["status"] = in.status;
  j["constants"] = Json{{"K", res.family.k_uniform}, {"N", res.family.n_uniform}};
  j["squared_constants"] = Json{{"K", res.squared.k_uniform}, {"N", res.squared.n_uniform}};
  j["distinct_members"] = res.distinct;

  Json p;
  p["m"] = res.core.m;
  p["k0"] = res.core.k0;
  p["n0"] = res.layers.n0;
  p["m_prime"] = res.dual.m_prime;
  p["n2"] = res.n2;
  p["N_Z"] = res.n_z.str();
  p["N_Y"] = res.n_y.str();
  p["candidates"] = res.candidates.size();
  p["strong"] = Json::array();
  for (const auto& r : res.core.strong) {
    Json s;
    s["index_set"] = r.candidate.index_set;
    s["k_z"] = r.k_z;
    s["eta"] = r.eta;
    s["n_set"] = subset_json(r.n_set);
    p["strong"].push_back(s);
  }
  p["i_prime"] = res.layers.i_prime;
  p["i_family"] = res.layers.i_family;
  p["dual_values"] = res.dual.dual_values;
  p["i_mprime"] = res.dual.i_mprime;
  p["y_prime"] = res.y_prime;
  j["pipeline"] = p;

  j["h"] = subset_json(res.h);
  j["h_prime"] = subset_json(res.h_prime);
  j["certificates"] = Json{{"h", set_certificates_json(res.h_cert)}, {"h_prime", set_certificates_json(res.h_prime_cert)}};

  Json inv;
  inv["source"] = in.invariance_source;
  inv["verdicts"] = Json::array();
  if (in.invariance) {
    for (const auto& v : in.invariance->verdicts) {
      Json e;
      e["automorphism"] = v.automorphism;
      e["stabilizing"] = v.stabilizing;
      if (v.stabilizing) {
        e["h_invariant"] = v.h_invariant;
        e["h_prime_invariant"] = v.h_prime_invariant;
      }
      inv["verdicts"].push_back(e);
    }
  }
  j["invariance"] = inv;

  if (in.lemmas) j["lemmas"] = lemmas_json(*in.lemmas);
  if (in.oracle) {
    Json o;
    o["status"] = in.oracle->all_match() ? "match" : "mismatch";
    o["oracle"] = core_values_json(in.oracle->oracle);
    Json m = Json::object();
    for (const auto& [k, v] : in.oracle->matches) m[k] = v;
    o["matches"] = m;
    j["oracle"] = o;
  } else if (!in.oracle_note.empty()) {
    j["oracle"] = Json{{"status", "skipped"}, {"reason", in.oracle_note}};
  }
  return j;
}

Json violation_report_json(const Instance& inst, const LemmaViolation& v) {
  Json j;
  j["format"] = "asg-report/1";
  j["instance_digest"] = instance_digest(inst);
  j["instance"] = instance_to_json(inst);
  j["status"] = "lemma-violation";
  j["violation"] = Json{{"lemma", v.lemma()}, {"detail", v.what()}};
  return j;
}

std::vector<std::string> verify_report(const Json& report) {
  std::vector<std::string> problems;
  auto fail = [&](const std::string& s) { problems.push_back(s); };
  try {
    const Instance inst = instance_from_json(report.at("instance"));
    if (report.at("instance_digest").get<std::string>() != instance_digest(inst)) fail("instance digest mismatch");
    if (report.at("status") != "ok") {
      fail("report status is " + report.at("status").get<std::string>());
      return problems;
    }
    const auto g = build_group(inst.group, inst.config.order_cap.value_or(kDefaultOrderCap));
    const auto members = build_family(inst, g);
    const GroupSubset h = subset_from(g, report.at("h"), "h");
    const GroupSubset hp = subset_from(g, report.at("h_prime"), "h_prime");

    for (const auto& [name, s] : {std::pair<std::string, const GroupSubset*>{"h", &h}, {"h_prime", &hp}}) {
      const auto& c = report.at("certificates").at(name);
      if (!s->contains_identity()) fail(name + " misses the identity");
      if (!is_symmetric(*s)) fail(name + " is not symmetric");
      const GroupSubset w = subset_from(g, c.at("doubling_witness"), name + ".doubling_witness");
      if (w.size() != c.at("K").get<std::size_t>()) fail(name + ": doubling witness size differs from K");
      if (!set_product(*s, *s).subset_of(set_product(w, *s))) fail(name + ": doubling witness does not cover");
      const auto& ms = c.at("members");
      if (ms.size() != members.size()) {
        fail(name + ": wrong number of member certificates");
        continue;
      }
      std::size_t max_n = 0;
      for (std::size_t i = 0; i < members.size(); ++i) {
        const std::string at = name + ".members[" + std::to_string(i) + "]";
        const GroupSubset z0 = subset_from(g, ms[i].at("z0"), at + ".z0");
        const GroupSubset z1 = subset_from(g, ms[i].at("z1"), at + ".z1");
        if (!s->subset_of(set_product(z0, members[i]))) fail(at + ": z0 does not cover " + name);
        if (!members[i].subset_of(set_product(z1, *s))) fail(at + ": z1 does not cover the member");
        const std::size_t n = std::max(z0.size(), z1.size());
        if (n != ms[i].at("n").get<std::size_t>()) fail(at + ": n differs from the translate sets");
        max_n = std::max(max_n, n);
      }
      if (max_n != c.at("N").get<std::size_t>()) fail(name + ": N differs from the member certificates");
    }
    if (!hp.subset_of(h)) fail("h_prime is not inside h");

    GroupSubset u(g);
    const auto& strong = report.at("pipeline").at("strong");
    for (std::size_t i = 0; i < strong.size(); ++i) {
      const GroupSubset ns = subset_from(g, strong[i].at("n_set"), "strong n_set");
      if (!ns.contains_identity() || !is_symmetric(ns)) fail("strong record " + std::to_string(i) + ": bad N(Z)");
    }
    for (const auto& i : report.at("pipeline").at("i_mprime"))
      u |= subset_from(g, strong.at(i.get<std::size_t>()).at("n_set"), "n_set");
    if (!(u == h)) fail("h is not the union of the dual layer");

    const auto& inv = report.at("invariance");
    std::vector<Automorphism> autos;
    if (inv.at("source") == "supplied") {
      autos = build_automorphisms(inst, g);
    } else if (inv.at("source") == "enumerated") {
      AutomorphismOptions ao;
      if (inst.config.automorphism_order_cap) ao.order_cap = *inst.config.automorphism_order_cap;
      autos = automorphisms(g, ao);
    }
    if (inv.at("verdicts").size() != autos.size()) {
      fail("invariance verdict count does not match the automorphism list");
    } else {
      for (std::size_t a = 0; a < autos.size(); ++a) {
        const auto& v = inv.at("verdicts")[a];
        bool stab = true;
        for (const auto& m : members) {
          const auto img = apply_automorphism(autos[a], m);
          stab = stab && std::any_of(members.begin(), members.end(), [&](const auto& o) { return o == img; });
        }
        if (stab != v.at("stabilizing").get<bool>()) fail("automorphism " + std::to_string(a) + ": stabilizing flag");
        if (stab && (!(apply_automorphism(autos[a], h) == h) || !(apply_automorphism(autos[a], hp) == hp)))
          fail("automorphism " + std::to_string(a) + " moves h or h_prime");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    fail(std::string("malformed report: ") + e.what());
  } catch (const Error& e) {
    fail(e.what());
  }
  return problems;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorKind::Io, "cannot move report into place: " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace asg
