#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "asg/error.hpp"
#include "asg/oracle.hpp"

using namespace asg;

namespace {

enum Exit : int { kOk = 0, kParse = 1, kInvalid = 2, kViolation = 3, kCap = 4 };

const char* kExitCodes =
    "Exit codes:\n"
    "  0  success, every asserted property holds\n"
    "  1  unreadable or malformed input\n"
    "  2  input parsed but is not a valid group or uniform family\n"
    "  3  a checked lemma, invariance or oracle comparison failed (the report is still written)\n"
    "  4  a size cap or search budget was exceeded\n"
    "Environment: ASG_BUDGET sets the search node budget; --budget takes precedence.";

int exit_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::Io:
      return kParse;
    case ErrorKind::LemmaViolation:
      return kViolation;
    case ErrorKind::OrderCapExceeded:
    case ErrorKind::CapExceeded:
    case ErrorKind::SearchBudgetExceeded:
    case ErrorKind::FamilyTooLargeForExhaustive:
      return kCap;
    default:
      return kInvalid;
  }
}

void report_error(const Error& e) {
  std::cerr << "error [" << to_string(e.kind()) << "]";
  if (e.member() && std::string(e.what()).find("member") == std::string::npos) std::cerr << " member " << *e.member();
  std::cerr << ": " << e.what() << "\n";
}

struct Common {
  std::string path;
  std::optional<std::uint64_t> budget;
  std::optional<std::size_t> max_union;
  bool quiet = false;
};

struct Loaded {
  Instance inst;
  GroupPtr group;
  PipelineConfig cfg;
  Family family;
};

Loaded load(const Common& c) {
  Loaded l;
  l.inst = parse_instance(read_file(c.path));
  l.cfg = pipeline_config(l.inst.config);
  if (std::getenv("ASG_BUDGET")) l.cfg.search.budget = SearchConfig::default_search_budget();
  if (c.budget) l.cfg.search.budget = *c.budget;
  if (c.max_union) l.cfg.max_union = *c.max_union;
  l.group = build_group(l.inst.group, l.inst.config.order_cap.value_or(kDefaultOrderCap));
  l.family = family_validate(build_family(l.inst, l.group), l.cfg.search);
  check_declared(l.inst, l.family);
  return l;
}

OracleCaps oracle_caps(const InstanceConfig& c) {
  OracleCaps caps;
  if (c.oracle_max_members) caps.max_members = *c.oracle_max_members;
  if (c.oracle_max_order) caps.max_order = *c.oracle_max_order;
  return caps;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_atomic(out, text);
}

int cmd_validate(const Common& c) {
  const auto l = load(c);
  std::cout << "K=" << l.family.k_uniform << " N=" << l.family.n_uniform << "\n";
  return kOk;
}

struct RunOptions {
  std::string out;
  bool check_lemmas = false;
  bool oracle = false;
};

int cmd_run(const Common& c, const RunOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  auto l = load(c);

  PipelineResult res;
  try {
    res = run_pipeline(l.family, l.cfg);
  } catch (const LemmaViolation& v) {
    emit(o.out, canonical_dump(violation_report_json(l.inst, v)));
    report_error(v);
    return kViolation;
  }

  std::vector<Automorphism> autos;
  std::string source;
  if (l.inst.automorphisms) {
    autos = build_automorphisms(l.inst, l.group);
    source = "supplied";
  } else {
    AutomorphismOptions ao;
    if (l.inst.config.automorphism_order_cap) ao.order_cap = *l.inst.config.automorphism_order_cap;
    autos = automorphisms(l.group, ao);
    source = "enumerated";
  }
  const auto inv = invariance_check(res, autos);

  std::string status = inv.ok() ? "ok" : "invariance-failure";
  std::optional<LemmaReport> lemmas;
  if (o.check_lemmas) {
    lemmas = check_lemmas(res, l.cfg.search);
    record_invariance(*lemmas, inv);
    if (!lemmas->clean() && status == "ok") status = "lemma-violation";
  }

  std::optional<OracleComparison> cmp;
  std::string note;
  if (o.oracle) {
    const auto caps = oracle_caps(l.inst.config);
    if (res.family.size() > caps.max_members || l.group->order() > caps.max_order) {
      note = "skipped: oracle caps are " + std::to_string(caps.max_members) + " members and order " +
             std::to_string(caps.max_order);
    } else {
      cmp = compare_with_oracle(res, caps);
      if (!cmp->all_match() && status == "ok") status = "oracle-mismatch";
    }
  }

  ReportInputs in;
  in.instance = &l.inst;
  in.result = &res;
  in.invariance_source = source;
  in.invariance = &inv;
  in.lemmas = lemmas ? &*lemmas : nullptr;
  in.oracle = cmp ? &*cmp : nullptr;
  in.oracle_note = note;
  in.status = status;
  emit(o.out, canonical_dump(report_json(in)));

  if (!c.quiet && !o.out.empty() && o.out != "-") {
    const auto ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "K=" << res.family.k_uniform << " N=" << res.family.n_uniform << " m=" << res.core.m
              << " k0=" << res.core.k0 << " |H|=" << res.h.size() << " |H'|=" << res.h_prime.size()
              << " status=" << status << " (" << ms << " ms)\n";
    if (!note.empty()) std::cerr << "oracle " << note << "\n";
  }
  return status == "ok" ? kOk : kViolation;
}

int cmd_oracle(const Common& c, const std::string& out) {
  const auto l = load(c);
  const auto caps = oracle_caps(l.inst.config);
  const auto res = run_pipeline(l.family, l.cfg);
  const auto cmp = compare_with_oracle(res, caps);
  Json j;
  j["instance_digest"] = instance_digest(l.inst);
  j["status"] = cmp.all_match() ? "match" : "mismatch";
  Json m = Json::object();
  for (const auto& [k, v] : cmp.matches) m[k] = v;
  j["matches"] = m;
  auto values = [](const CoreValues& v) {
    return Json{{"m", v.m},           {"k0", v.k0}, {"n0", v.n0},
                {"m_prime", v.m_prime}, {"n2", v.n2}, {"h", subset_json(v.h)},
                {"h_prime", subset_json(v.h_prime)}};
  };
  j["oracle"] = values(cmp.oracle);
  j["pipeline"] = values(cmp.pipeline);
  emit(out, canonical_dump(j));
  if (!c.quiet && !out.empty() && out != "-") std::cerr << "oracle " << j["status"].get<std::string>() << "\n";
  return cmp.all_match() ? kOk : kViolation;
}

struct BatteryCli {
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  std::size_t group_cap = 24;
  std::string out;
  std::string reproducer;
  bool inject_fault = false;
  std::optional<std::uint64_t> budget;
  bool quiet = false;
};

int cmd_battery(const BatteryCli& b) {
  BatteryOptions opt;
  opt.seed = b.seed;
  opt.trials = b.trials;
  opt.group_cap = b.group_cap;
  opt.inject_fault = b.inject_fault;
  if (b.budget) opt.search.budget = *b.budget;
  try {
    const auto rep = lemma_battery(opt);
    emit(b.out, canonical_dump(battery_json(rep)));
    if (!b.quiet && !b.out.empty() && b.out != "-")
      std::cerr << rep.trials.size() << " trials, " << rep.oracle_checked << " oracle checks, 0 violations\n";
    return kOk;
  } catch (const LemmaViolation& v) {
    std::string path = b.reproducer;
    if (path.empty()) path = (b.out.empty() || b.out == "-") ? "asg-reproducer.json" : b.out + ".reproducer.json";
    write_atomic(path, v.reproducer());
    report_error(v);
    std::cerr << "reproducer: " << path << "\n";
    return kViolation;
  }
}

int cmd_verify(const std::string& path, bool quiet) {
  Json report;
  try {
    report = Json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "error [Parse]: " << path << ": " << e.what() << "\n";
    return kParse;
  }
  const auto problems = verify_report(report);
  for (const auto& p : problems) std::cerr << p << "\n";
  if (!quiet && problems.empty()) std::cout << "ok\n";
  return problems.empty() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant approximate subgroups from uniform commensurable families over finite groups"};
  app.footer(kExitCodes);
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("instance", common.path, "Instance JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--budget", common.budget, "Search node budget");
    sub->add_option("--max-union", common.max_union, "Largest index set considered (0 = all)");
    sub->add_flag("--quiet", common.quiet, "Suppress the summary on stderr");
  };

  auto* validate = app.add_subcommand("validate", "Parse an instance and print its constants K and N");
  add_common(validate);

  RunOptions run;
  auto* runc = app.add_subcommand("run", "Run the construction and write a report");
  add_common(runc);
  runc->add_option("--out", run.out, "Report path (default: stdout)");
  runc->add_flag("--check-lemmas", run.check_lemmas, "Check every intermediate inequality on this instance");
  runc->add_flag("--oracle", run.oracle, "Cross-check against exhaustive recomputation when within caps");

  std::string oracle_out;
  auto* oraclec = app.add_subcommand("oracle", "Compare the construction with exhaustive recomputation");
  add_common(oraclec);
  oraclec->add_option("--out", oracle_out, "Comparison path (default: stdout)");

  BatteryCli bat;
  auto* battery = app.add_subcommand("battery", "Run every lemma check on seeded random instances");
  battery->add_option("--seed", bat.seed, "Random seed")->capture_default_str();
  battery->add_option("--trials", bat.trials, "Number of instances")->capture_default_str();
  battery->add_option("--group-cap", bat.group_cap, "Largest group order drawn")->capture_default_str();
  battery->add_option("--out", bat.out, "Tally path (default: stdout)");
  battery->add_option("--reproducer", bat.reproducer, "Where to write a failing instance");
  battery->add_flag("--inject-fault", bat.inject_fault, "Corrupt one certificate to exercise the failure path");
  battery->add_option("--budget", bat.budget, "Search node budget");
  battery->add_flag("--quiet", bat.quiet, "Suppress the summary on stderr");

  std::string verify_path;
  bool verify_quiet = false;
  auto* verify = app.add_subcommand("verify", "Re-check the certificates in a report against its instance");
  verify->add_option("report", verify_path, "Report JSON file")->required()->check(CLI::ExistingFile);
  verify->add_flag("--quiet", verify_quiet, "Print nothing on success");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*validate) return cmd_validate(common);
    if (*runc) return cmd_run(common, run);
    if (*oraclec) return cmd_oracle(common, oracle_out);
    if (*battery) return cmd_battery(bat);
    if (*verify) return cmd_verify(verify_path, verify_quiet);
  } catch (const Error& e) {
    report_error(e);
    return exit_for(e);
  }
  return kOk;
}
