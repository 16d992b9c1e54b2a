#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "asg/error.hpp"
#include "asg/oracle.hpp"

namespace py = pybind11;
using namespace asg;

namespace {

struct Loaded {
  Instance inst;
  GroupPtr group;
  PipelineConfig cfg;
  Family family;
};

Loaded load(const std::string& text) {
  Loaded l;
  l.inst = parse_instance(text);
  l.cfg = pipeline_config(l.inst.config);
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

py::tuple validate(const std::string& text) {
  const auto l = load(text);
  return py::make_tuple(l.family.k_uniform, l.family.n_uniform);
}

std::string run(const std::string& text, bool check, bool oracle) {
  auto l = load(text);
  PipelineResult res;
  try {
    res = run_pipeline(l.family, l.cfg);
  } catch (const LemmaViolation& v) {
    return canonical_dump(violation_report_json(l.inst, v));
  }
  std::vector<Automorphism> autos;
  std::string source = "supplied";
  if (l.inst.automorphisms) {
    autos = build_automorphisms(l.inst, l.group);
  } else {
    AutomorphismOptions ao;
    if (l.inst.config.automorphism_order_cap) ao.order_cap = *l.inst.config.automorphism_order_cap;
    autos = automorphisms(l.group, ao);
    source = "enumerated";
  }
  const auto inv = invariance_check(res, autos);
  std::string status = inv.ok() ? "ok" : "invariance-failure";
  std::optional<LemmaReport> lemmas;
  if (check) {
    lemmas = check_lemmas(res, l.cfg.search);
    record_invariance(*lemmas, inv);
    if (!lemmas->clean() && status == "ok") status = "lemma-violation";
  }
  std::optional<OracleComparison> cmp;
  std::string note;
  if (oracle) {
    const auto caps = oracle_caps(l.inst.config);
    if (res.family.size() > caps.max_members || l.group->order() > caps.max_order) {
      note = "skipped: outside the oracle caps";
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
  return canonical_dump(report_json(in));
}

py::dict oracle(const std::string& text) {
  const auto l = load(text);
  const auto cmp = compare_with_oracle(run_pipeline(l.family, l.cfg), oracle_caps(l.inst.config));
  py::dict d;
  for (const auto& [k, v] : cmp.matches) d[py::str(k)] = v;
  return d;
}

std::string battery(std::uint64_t seed, std::size_t trials, std::size_t group_cap) {
  BatteryOptions opt;
  opt.seed = seed;
  opt.trials = trials;
  opt.group_cap = group_cap;
  return canonical_dump(battery_json(lemma_battery(opt)));
}

std::vector<std::string> verify(const std::string& report) { return verify_report(Json::parse(report)); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Invariant approximate subgroups from uniform commensurable families over finite groups";

  static py::exception<Error> error(m, "AsgError");
  static py::exception<LemmaViolation> violation(m, "LemmaViolation", error.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const LemmaViolation& e) {
      PyErr_SetObject(violation.ptr(), py::make_tuple(e.lemma(), e.what(), e.reproducer()).ptr());
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(to_string(e.kind()), e.what()).ptr());
    }
  });

  m.def("validate", &validate, py::arg("instance"), "Constants (K, N) of an instance given as JSON text.");
  m.def("run", &run, py::arg("instance"), py::arg("check_lemmas") = false, py::arg("oracle") = false,
        "Report JSON text for an instance given as JSON text.");
  m.def("oracle", &oracle, py::arg("instance"), "Per-field agreement with exhaustive recomputation.");
  m.def("battery", &battery, py::arg("seed") = 0, py::arg("trials") = 1, py::arg("group_cap") = 24,
        "Tally JSON text of a seeded lemma battery.");
  m.def("verify", &verify, py::arg("report"), "Problems found re-checking a report; empty when it verifies.");
  m.def("digest", [](const std::string& text) { return instance_digest(parse_instance(text)); }, py::arg("instance"));
}
