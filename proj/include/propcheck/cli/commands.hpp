#pragma once

// Subcommands of the propcheck tool. Kept in a header so the test suite can
// drive them in-process with string streams.
//
// Exit codes: 0 pass, 1 counterexample (or reproduced failure), 2 usage
// error, 3 enumeration cap exceeded, 4 replay did not reproduce.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "propcheck/cli/documents.hpp"
#include "propcheck/cli/specs.hpp"
#include "propcheck/comparator.hpp"
#include "propcheck/stateful.hpp"

namespace propcheck::cli {

enum ExitCode : int {
  kPass = 0,
  kCounterexample = 1,
  kUsage = 2,
  kResourceLimit = 3,
  kNotReproduced = 4,
};

namespace detail {

struct CommonFlags {
  std::string trusted;
  std::string tested;
  std::optional<std::string> seed;
  std::size_t vars = GenConfig{}.n_vars;
  std::int32_t min = GenConfig{}.value_min;
  std::int32_t max = GenConfig{}.value_max;
  std::string density = "0.5";
  std::uint64_t cap = EnumerationCap{}.max_tuples;

  void attach(CLI::App& cmd) {
    cmd.add_option("--trusted", trusted, "Trusted reference, <level>:<checker>")->required();
    cmd.add_option("--tested", tested, "Filter under test: recipe or <level>:<checker>")->required();
    cmd.add_option("--seed", seed, "Seed (decimal 64-bit); falls back to $PROPCHECK_SEED, then 0");
    cmd.add_option("--vars", vars, "Number of variables")->capture_default_str();
    cmd.add_option("--min", min, "Smallest generated value")->capture_default_str();
    cmd.add_option("--max", max, "Largest generated value")->capture_default_str();
    cmd.add_option("--density", density, "Probability a value enters a domain, in (0,1]")->capture_default_str();
    cmd.add_option("--cap", cap, "Largest enumeration a reference filter may perform")->capture_default_str();
  }

  [[nodiscard]] std::uint64_t resolve_seed() const {
    std::optional<std::string> text = seed;
    if (!text) {
      if (const char* env = std::getenv("PROPCHECK_SEED"); env && *env) text = env;
    }
    if (!text) return 0;
    const auto value = parse_int<std::uint64_t>(*text);
    if (!value) throw UsageError("seed must be a decimal 64-bit unsigned integer, got '" + *text + "'");
    return *value;
  }

  [[nodiscard]] CampaignSpec campaign(std::size_t tests, std::size_t dives, std::size_t max_depth) const {
    CampaignSpec c;
    c.trusted = trusted;
    c.tested = tested;
    c.gen.n_vars = vars;
    c.gen.value_min = min;
    c.gen.value_max = max;
    const auto d = parse_decimal(density);
    if (!d) throw UsageError("density must be a decimal fraction such as 0.5, got '" + density + "'");
    c.gen.density = *d;
    c.gen.n_tests = tests;
    c.gen.seed = resolve_seed();
    c.dive.nb_dives = dives;
    c.dive.max_depth = max_depth;
    c.dive.seed = c.gen.seed;
    c.cap = cap;
    if (cap == 0) throw UsageError("--cap must be at least 1");
    try {
      c.gen.validate();
      c.dive.validate();
    } catch (const ContractError& e) {
      throw UsageError(e.what());
    }
    return c;
  }
};

struct Subjects {
  ReferenceSpec trusted;
  Subject tested;
};

inline Subjects resolve(const CampaignSpec& c) {
  ReferenceSpec trusted = parse_reference(c.trusted);
  Subject tested = parse_tested(c.tested, trusted.checker);
  return {trusted, tested};
}

inline TestReport execute(const CampaignSpec& c, CampaignKind kind, ComparisonMode mode) {
  const Subjects s = resolve(c);
  const EnumerationCap cap{c.cap};
  CampaignOptions opts;
  opts.cap = cap;
  const Filter trusted = make_reference(s.trusted.level, s.trusted.checker.make(c.gen.n_vars), cap);
  if (kind == CampaignKind::Dives) {
    return dive_campaign(incremental_factory(trusted), s.tested.stateful(c.gen.n_vars, cap), c.gen, c.dive, mode,
                         opts);
  }
  return run_campaign(trusted, s.tested.filter(c.gen.n_vars, cap), c.gen, mode, opts);
}

inline int emit_report(const ReportDocument& doc, std::ostream& out, std::ostream& err) {
  out << to_json(doc).dump(2) << '\n';
  err << doc.report.summary() << '\n';
  if (doc.report.redraws) err << "note: " << doc.report.redraws << " oversized instances were redrawn\n";
  if (doc.report.depth_cap_hits) {
    err << "warning: " << doc.report.depth_cap_hits << " dives hit the depth cap and were treated as leaves\n";
  }
  return doc.report.passed ? kPass : kCounterexample;
}

/// Re-executes the recorded failure on the original and shrunk instances.
inline int replay(const ReportDocument& doc, std::ostream& out, std::ostream& err) {
  const TestReport& r = doc.report;
  if (r.passed || !r.failure) {
    err << "report has no counterexample; nothing to replay\n";
    return kUsage;
  }
  const CampaignSpec& c = doc.campaign;
  const Subjects s = resolve(c);
  const EnumerationCap cap{c.cap};
  const Filter trusted = make_reference(s.trusted.level, s.trusted.checker.make(c.gen.n_vars), cap);
  const Failure& f = *r.failure;
  if (f.original.arity() != c.gen.n_vars || f.shrunk.arity() != c.gen.n_vars) {
    throw UsageError("counterexample arity does not match the campaign's vars");
  }

  std::optional<Verdict> shrunk_verdict;
  bool original_fails = false;
  if (r.kind == CampaignKind::Dives) {
    const StatefulFactory t = incremental_factory(trusted);
    const StatefulFactory tested = s.tested.stateful(c.gen.n_vars, cap);
    original_fails = replay_transcript(f.original, f.transcript, t, tested, r.mode).mismatch.has_value();
    shrunk_verdict = replay_transcript(f.shrunk, f.transcript, t, tested, r.mode).mismatch;
  } else {
    const Filter tested = s.tested.filter(c.gen.n_vars, cap);
    original_fails = evaluate(trusted, tested, f.original, r.mode).failed();
    Verdict v = evaluate(trusted, tested, f.shrunk, r.mode);
    if (v.failed()) shrunk_verdict = std::move(v);
  }

  const bool reproduced = original_fails && shrunk_verdict.has_value();
  Json j;
  j["reproduced"] = reproduced;
  j["mode"] = mode_name(r);
  if (shrunk_verdict) {
    j["trusted"] = to_json(shrunk_verdict->trusted);
    j["tested"] = to_json(shrunk_verdict->tested);
    j["message"] = shrunk_verdict->message;
  }
  out << j.dump(2) << '\n';
  if (!reproduced) {
    err << "failure did not reproduce"
        << (original_fails ? " on the shrunk instance" : shrunk_verdict ? " on the original instance" : "")
        << "; the subject is not deterministic or has changed\n";
    return kNotReproduced;
  }
  err << "failure reproduced: " << shrunk_verdict->message << '\n';
  return kCounterexample;
}

inline int oracle(const std::string& level_text, const std::string& checker_text, std::uint64_t cap, std::istream& in,
                  std::ostream& out) {
  const ConsistencyLevel level = parse_level(level_text);
  const CheckerSpec checker = parse_checker(checker_text);
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("invalid JSON on stdin: ") + e.what());
  }
  const InstanceDocument inst = instance_from_json(doc);
  const FilterOutcome o = reference_filter(level, checker.make(inst.instance.arity()), inst.instance, EnumerationCap{cap});
  out << to_json(o).dump() << '\n';
  return kPass;
}

}  // namespace detail

/// Entry point shared by the executable and the tests.
inline int run_cli(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential testing of constraint filtering algorithms", "propcheck"};
  app.require_subcommand(1);

  detail::CommonFlags run_flags;
  std::string mode;
  std::size_t tests = GenConfig{}.n_tests;
  CLI::App* run = app.add_subcommand("run", "Static campaign: compare a tested filter against a reference");
  run->add_option("--mode", mode, "check (equality) or stronger (tested included in trusted)")
      ->required()
      ->check(CLI::IsMember({"check", "stronger"}));
  run->add_option("--tests", tests, "Number of generated instances")->capture_default_str();
  run_flags.attach(*run);

  detail::CommonFlags dive_flags;
  std::size_t dives = DiveConfig{}.nb_dives;
  std::size_t max_depth = DiveConfig{}.max_depth;
  CLI::App* dive = app.add_subcommand("dive", "Stateful campaign: random dives with push/pop");
  dive->add_option("--dives", dives, "Number of dives")->capture_default_str();
  dive->add_option("--max-depth", max_depth, "Restrictions per dive before it counts as a leaf")
      ->capture_default_str();
  dive_flags.attach(*dive);

  std::string level;
  std::string checker;
  std::uint64_t oracle_cap = EnumerationCap{}.max_tuples;
  CLI::App* orc = app.add_subcommand("oracle", "Filter an instance document from stdin with a reference filter");
  orc->add_option("--level", level, "arc, boundz, boundd or range")->required();
  orc->add_option("--checker", checker, "alldiff or sum=<c>")->required();
  orc->add_option("--cap", oracle_cap, "Largest enumeration allowed")->capture_default_str();

  std::string report_path;
  CLI::App* rep = app.add_subcommand("replay", "Re-execute the counterexample stored in a report");
  rep->add_option("--report", report_path, "Report file written by run or dive")->required();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (run->parsed()) {
      const CampaignSpec c = run_flags.campaign(tests, DiveConfig{}.nb_dives, DiveConfig{}.max_depth);
      const ComparisonMode m = mode == "check" ? ComparisonMode::Equality : ComparisonMode::TestedSubsetOfTrusted;
      return detail::emit_report({detail::execute(c, CampaignKind::Static, m), c}, out, err);
    }
    if (dive->parsed()) {
      const CampaignSpec c = dive_flags.campaign(GenConfig{}.n_tests, dives, max_depth);
      return detail::emit_report({detail::execute(c, CampaignKind::Dives, ComparisonMode::Equality), c}, out, err);
    }
    if (orc->parsed()) {
      if (oracle_cap == 0) throw UsageError("--cap must be at least 1");
      return detail::oracle(level, checker, oracle_cap, in, out);
    }
    std::ifstream file(report_path);
    if (!file) throw UsageError("cannot read report '" + report_path + "'");
    Json doc;
    try {
      doc = Json::parse(file);
    } catch (const Json::parse_error& e) {
      throw UsageError(std::string("invalid report JSON: ") + e.what());
    }
    return detail::replay(report_from_json(doc), out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ContractError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return kResourceLimit;
  }
}

}  // namespace propcheck::cli
