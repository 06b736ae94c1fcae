#pragma once

// JSON documents exchanged by the command-line tool.
//
//   InstanceDocument  {"domains": [[1,2],[3]], "allowEmpty": false}
//   OutcomeDocument   {"status": "filtered", "domains": [...]} | {"status": "inconsistent"}
//   BranchOp          {"op": "push"} | {"op": "pop"}
//                     | {"op": "restrict", "index": 0, "relation": "=", "constant": 9}
//   ReportDocument    {"passed", "testsRun", "seed" (decimal string), "mode",
//                      "counterexample" | null, "campaign", "redraws", "depthCapHits"}
//
// Keys are emitted in the order above; seeds are strings so that 64-bit
// values survive JSON readers limited to doubles.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "propcheck/branch_op.hpp"
#include "propcheck/cli/specs.hpp"
#include "propcheck/domain.hpp"
#include "propcheck/generator.hpp"
#include "propcheck/report.hpp"
#include "propcheck/stateful.hpp"

namespace propcheck::cli {

using Json = nlohmann::ordered_json;

/// Everything needed to re-run a campaign from its report.
struct CampaignSpec {
  std::string trusted;
  std::string tested;
  GenConfig gen;
  DiveConfig dive;
  std::uint64_t cap = EnumerationCap{}.max_tuples;

  friend bool operator==(const CampaignSpec& a, const CampaignSpec& b) {
    return a.trusted == b.trusted && a.tested == b.tested && a.gen.n_vars == b.gen.n_vars &&
           a.gen.value_min == b.gen.value_min && a.gen.value_max == b.gen.value_max && a.gen.density == b.gen.density &&
           a.gen.n_tests == b.gen.n_tests && a.gen.seed == b.gen.seed && a.dive.nb_dives == b.dive.nb_dives &&
           a.dive.max_depth == b.dive.max_depth && a.cap == b.cap;
  }
};

struct ReportDocument {
  TestReport report;
  CampaignSpec campaign;
  friend bool operator==(const ReportDocument&, const ReportDocument&) = default;
};

namespace detail {

inline const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw UsageError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::int64_t require_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw UsageError(std::string(what) + " must be an integer");
  if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw UsageError(std::string(what) + " is out of range");
  }
  return j.get<std::int64_t>();
}

inline std::size_t require_count(const Json& j, const char* what) {
  const std::int64_t v = require_int(j, what);
  if (v < 0) throw UsageError(std::string(what) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

inline bool require_bool(const Json& j, const char* what) {
  if (!j.is_boolean()) throw UsageError(std::string(what) + " must be a boolean");
  return j.get<bool>();
}

inline std::uint64_t parse_seed(const Json& j) {
  if (!j.is_string()) throw UsageError("seed must be a decimal string");
  const auto s = parse_int<std::uint64_t>(j.get<std::string>());
  if (!s) throw UsageError("seed must be a decimal 64-bit unsigned integer");
  return *s;
}

inline Json domains_to_json(const Instance& inst) {
  Json doms = Json::array();
  for (const Domain& d : inst) {
    Json values = Json::array();
    for (Value v : d) values.push_back(v);
    doms.push_back(std::move(values));
  }
  return doms;
}

inline Instance domains_from_json(const Json& j, bool allow_empty) {
  if (!j.is_array()) throw UsageError("'domains' must be a list of lists of integers");
  if (j.empty()) throw UsageError("'domains' must hold at least one domain");
  std::vector<Domain> domains;
  domains.reserve(j.size());
  for (const Json& d : j) {
    if (!d.is_array()) throw UsageError("each domain must be a list of integers");
    if (d.empty() && !allow_empty) throw UsageError("empty domain (set \"allowEmpty\": true to permit it)");
    std::vector<std::int64_t> wide;
    wide.reserve(d.size());
    for (const Json& v : d) wide.push_back(require_int(v, "domain value"));
    try {
      domains.push_back(Domain::from_wide(wide));
    } catch (const ContractError& e) {
      throw UsageError(e.what());
    }
  }
  return Instance(std::move(domains));
}

}  // namespace detail

[[nodiscard]] inline Json to_json(const Instance& inst) {
  Json j;
  j["domains"] = detail::domains_to_json(inst);
  return j;
}

struct InstanceDocument {
  Instance instance;
  bool allow_empty = false;
};

[[nodiscard]] inline InstanceDocument instance_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("instance document must be a JSON object");
  bool allow_empty = false;
  if (j.contains("allowEmpty")) allow_empty = detail::require_bool(j.at("allowEmpty"), "allowEmpty");
  return {detail::domains_from_json(detail::require(j, "domains"), allow_empty), allow_empty};
}

[[nodiscard]] inline Json to_json(const FilterOutcome& o) {
  Json j;
  if (o.is_inconsistent()) {
    j["status"] = "inconsistent";
  } else {
    j["status"] = "filtered";
    j["domains"] = detail::domains_to_json(o.instance());
  }
  return j;
}

[[nodiscard]] inline FilterOutcome outcome_from_json(const Json& j) {
  const Json& status = detail::require(j, "status");
  if (status == "inconsistent") return FilterOutcome::inconsistent();
  if (status == "filtered") {
    Instance inst = detail::domains_from_json(detail::require(j, "domains"), false);
    return FilterOutcome::filtered(std::move(inst));
  }
  throw UsageError("outcome status must be \"filtered\" or \"inconsistent\"");
}

[[nodiscard]] inline Json to_json(const BranchOp& op) {
  Json j;
  if (std::holds_alternative<Push>(op)) {
    j["op"] = "push";
  } else if (std::holds_alternative<Pop>(op)) {
    j["op"] = "pop";
  } else {
    const auto& r = std::get<RestrictDomain>(op);
    j["op"] = "restrict";
    j["index"] = r.index;
    j["relation"] = std::string(to_string(r.relation));
    j["constant"] = r.constant;
  }
  return j;
}

[[nodiscard]] inline BranchOp branch_op_from_json(const Json& j) {
  const Json& op = detail::require(j, "op");
  if (op == "push") return Push{};
  if (op == "pop") return Pop{};
  if (op != "restrict") throw UsageError("branch op must be push, pop or restrict");
  RestrictDomain r;
  r.index = detail::require_count(detail::require(j, "index"), "index");
  const Json& rel = detail::require(j, "relation");
  bool found = false;
  for (Relation candidate : {Relation::Eq, Relation::Neq, Relation::Lt, Relation::Gt}) {
    if (rel == std::string(to_string(candidate))) {
      r.relation = candidate;
      found = true;
    }
  }
  if (!found) throw UsageError("relation must be one of =, !=, <, >");
  const std::int64_t c = detail::require_int(detail::require(j, "constant"), "constant");
  if (c < std::numeric_limits<Value>::min() || c > std::numeric_limits<Value>::max()) {
    throw UsageError("constant outside signed 32-bit range");
  }
  r.constant = static_cast<Value>(c);
  return r;
}

[[nodiscard]] inline std::string mode_name(const TestReport& r) {
  return r.kind == CampaignKind::Dives ? "dives" : std::string(to_string(r.mode));
}

[[nodiscard]] inline Json to_json(const CampaignSpec& c) {
  Json j;
  j["trusted"] = c.trusted;
  j["tested"] = c.tested;
  j["vars"] = c.gen.n_vars;
  j["min"] = c.gen.value_min;
  j["max"] = c.gen.value_max;
  j["density"] = c.gen.density;
  j["tests"] = c.gen.n_tests;
  j["dives"] = c.dive.nb_dives;
  j["maxDepth"] = c.dive.max_depth;
  j["cap"] = c.cap;
  return j;
}

[[nodiscard]] inline CampaignSpec campaign_from_json(const Json& j, std::uint64_t seed) {
  CampaignSpec c;
  const Json& trusted = detail::require(j, "trusted");
  const Json& tested = detail::require(j, "tested");
  if (!trusted.is_string() || !tested.is_string()) throw UsageError("campaign trusted/tested must be strings");
  c.trusted = trusted.get<std::string>();
  c.tested = tested.get<std::string>();
  c.gen.n_vars = detail::require_count(detail::require(j, "vars"), "vars");
  const std::int64_t lo = detail::require_int(detail::require(j, "min"), "min");
  const std::int64_t hi = detail::require_int(detail::require(j, "max"), "max");
  if (lo < std::numeric_limits<Value>::min() || hi > std::numeric_limits<Value>::max()) {
    throw UsageError("value range outside signed 32-bit range");
  }
  c.gen.value_min = static_cast<Value>(lo);
  c.gen.value_max = static_cast<Value>(hi);
  const Json& density = detail::require(j, "density");
  if (!density.is_number()) throw UsageError("density must be a number");
  c.gen.density = density.get<double>();
  c.gen.n_tests = detail::require_count(detail::require(j, "tests"), "tests");
  c.gen.seed = seed;
  c.dive.nb_dives = detail::require_count(detail::require(j, "dives"), "dives");
  c.dive.max_depth = detail::require_count(detail::require(j, "maxDepth"), "maxDepth");
  c.dive.seed = seed;
  const Json& cap = detail::require(j, "cap");
  if (!cap.is_number_unsigned()) throw UsageError("cap must be a positive integer");
  c.cap = cap.get<std::uint64_t>();
  return c;
}

[[nodiscard]] inline Json to_json(const ReportDocument& doc) {
  const TestReport& r = doc.report;
  Json j;
  j["passed"] = r.passed;
  j["testsRun"] = r.tests_run;
  j["seed"] = std::to_string(r.seed);
  j["mode"] = mode_name(r);
  if (r.failure) {
    const Failure& f = *r.failure;
    Json cx;
    cx["original"] = to_json(f.original);
    cx["shrunk"] = to_json(f.shrunk);
    cx["trusted"] = to_json(f.trusted);
    cx["tested"] = to_json(f.tested);
    if (r.kind == CampaignKind::Dives) {
      Json ops = Json::array();
      for (const BranchOp& op : f.transcript) ops.push_back(to_json(op));
      cx["transcript"] = std::move(ops);
    }
    cx["kind"] = std::string(to_string(f.kind));
    cx["message"] = f.message;
    cx["minimal"] = f.minimal;
    j["counterexample"] = std::move(cx);
  } else {
    j["counterexample"] = nullptr;
  }
  j["campaign"] = to_json(doc.campaign);
  j["redraws"] = r.redraws;
  j["depthCapHits"] = r.depth_cap_hits;
  return j;
}

[[nodiscard]] inline ReportDocument report_from_json(const Json& j) {
  if (!j.is_object()) throw UsageError("report must be a JSON object");
  ReportDocument doc;
  TestReport& r = doc.report;
  r.passed = detail::require_bool(detail::require(j, "passed"), "passed");
  r.tests_run = detail::require_count(detail::require(j, "testsRun"), "testsRun");
  r.seed = detail::parse_seed(detail::require(j, "seed"));
  const Json& mode = detail::require(j, "mode");
  if (mode == "check") {
    r.kind = CampaignKind::Static;
    r.mode = ComparisonMode::Equality;
  } else if (mode == "stronger") {
    r.kind = CampaignKind::Static;
    r.mode = ComparisonMode::TestedSubsetOfTrusted;
  } else if (mode == "dives") {
    r.kind = CampaignKind::Dives;
    r.mode = ComparisonMode::Equality;
  } else {
    throw UsageError("mode must be check, stronger or dives");
  }
  if (j.contains("redraws")) r.redraws = detail::require_count(j.at("redraws"), "redraws");
  if (j.contains("depthCapHits")) r.depth_cap_hits = detail::require_count(j.at("depthCapHits"), "depthCapHits");

  const Json& cx = detail::require(j, "counterexample");
  if (cx.is_null() != r.passed) throw UsageError("counterexample must be null exactly when passed is true");
  if (!cx.is_null()) {
    std::vector<BranchOp> transcript;
    if (cx.contains("transcript")) {
      const Json& ops = cx.at("transcript");
      if (!ops.is_array()) throw UsageError("transcript must be a list");
      for (const Json& op : ops) transcript.push_back(branch_op_from_json(op));
    }
    FailureKind kind = FailureKind::DomainMismatch;
    if (cx.contains("kind")) {
      bool found = false;
      for (FailureKind k : {FailureKind::DomainMismatch, FailureKind::OnlyTrustedInconsistent,
                            FailureKind::OnlyTestedInconsistent, FailureKind::NotIncluded,
                            FailureKind::NonContracting, FailureKind::ArityViolation}) {
        if (cx.at("kind") == std::string(to_string(k))) {
          kind = k;
          found = true;
        }
      }
      if (!found) throw UsageError("unknown counterexample kind");
    }
    std::string message;
    if (cx.contains("message") && cx.at("message").is_string()) message = cx.at("message").get<std::string>();
    bool minimal = true;
    if (cx.contains("minimal")) minimal = detail::require_bool(cx.at("minimal"), "minimal");
    r.failure = Failure{instance_from_json(detail::require(cx, "original")).instance,
                        instance_from_json(detail::require(cx, "shrunk")).instance,
                        outcome_from_json(detail::require(cx, "trusted")),
                        outcome_from_json(detail::require(cx, "tested")),
                        r.mode,
                        kind,
                        std::move(message),
                        minimal,
                        std::move(transcript)};
  }
  doc.campaign = campaign_from_json(detail::require(j, "campaign"), r.seed);
  return doc;
}

}  // namespace propcheck::cli
