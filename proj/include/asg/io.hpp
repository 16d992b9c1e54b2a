#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "asg/error.hpp"
#include "asg/lemmas.hpp"

namespace asg {

using Json = nlohmann::ordered_json;

struct GroupSpec {
  std::string kind;  // cyclic, dihedral, product, cayley
  std::size_t n = 0;
  std::vector<GroupSpec> factors;
  std::vector<std::vector<Element>> table;

  bool operator==(const GroupSpec&) const = default;
};

struct InstanceConfig {
  std::optional<std::size_t> max_union;
  std::optional<std::size_t> family_cap;
  std::optional<std::uint64_t> budget;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> order_cap;
  std::optional<std::size_t> automorphism_order_cap;
  std::optional<std::size_t> oracle_max_members;
  std::optional<std::size_t> oracle_max_order;

  bool operator==(const InstanceConfig&) const = default;
};

struct Instance {
  GroupSpec group;
  std::vector<std::vector<Element>> family;
  std::optional<std::vector<std::vector<Element>>> automorphisms;
  InstanceConfig config;
  // Declared constants are cross-checked against the computed ones.
  std::optional<std::size_t> declared_k;
  std::optional<std::size_t> declared_n;

  bool operator==(const Instance&) const = default;
};

// Parses instance text. Syntax and shape problems throw Error(Parse) naming
// the line/column or the JSON path of the offending field.
Instance parse_instance(const std::string& text);
Instance instance_from_json(const Json& j);
Json instance_to_json(const Instance& inst);

// Canonical text: fixed field order, two-space indent, arrays of scalars on
// one line, trailing newline.
std::string canonical_dump(const Json& j);
std::string serialize_instance(const Instance& inst);

// Hex SHA-256 of the canonical serialization.
std::string instance_digest(const Instance& inst);
std::string sha256_hex(const std::string& data);

GroupPtr build_group(const GroupSpec& spec, std::size_t order_cap = kDefaultOrderCap);
// Members as subsets; an out-of-range element throws InvalidElement naming the member.
std::vector<GroupSubset> build_family(const Instance& inst, const GroupPtr& g);
std::vector<Automorphism> build_automorphisms(const Instance& inst, const GroupPtr& g);

PipelineConfig pipeline_config(const InstanceConfig& c);

// Throws DeclaredConstantMismatch when a declared K or N differs from f.
void check_declared(const Instance& inst, const Family& f);

Json subset_json(const GroupSubset& s);

struct OracleComparison;

struct ReportInputs {
  const Instance* instance = nullptr;
  const PipelineResult* result = nullptr;
  std::string invariance_source;  // enumerated | supplied
  const InvarianceReport* invariance = nullptr;
  const LemmaReport* lemmas = nullptr;  // null when lemma checks were not requested
  const OracleComparison* oracle = nullptr;
  std::string oracle_note;  // why the oracle did not run, if requested and skipped
  std::string status = "ok";
};

Json report_json(const ReportInputs& in);

// A report written after the pipeline itself failed a checked lemma.
Json violation_report_json(const Instance& inst, const LemmaViolation& v);

// Re-checks every certificate in a report against its echoed instance,
// using only group-core set algebra. Returns the list of problems found.
std::vector<std::string> verify_report(const Json& report);

// Writes to a temporary file in the same directory and renames it over path.
void write_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace asg
