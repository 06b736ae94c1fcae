// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "propcheck/cli/documents.hpp"
#include "propcheck/comparator.hpp"
#include "propcheck/minisolver/recipe.hpp"
#include "propcheck/propcheck.hpp"
#include "propcheck/stateful.hpp"
#include "support.hpp"

using namespace propcheck;
using namespace testing_support;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void fail(std::string what) {
    pass = false;
    if (problems.size() < 5) problems.push_back(std::move(what));
  }
};

int failures = 0;

void report(int number, const std::string& title, const Outcome& o) {
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << number << ": " << title << " -- " << o.detail << '\n';
  for (const auto& p : o.problems) std::cout << "      " << p << '\n';
  std::cout.flush();
  if (!o.pass) ++failures;
}

// 1. arc filtering equals the union of solutions on every instance of arity
// <= 3 over 1..3, for alldiff and sum=6.
Outcome oracle_equivalence() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t instances = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const Checker alldiff = all_different_checker(n);
    const Checker sum6 = sum_checker(n, 6);
    for_each_instance(n, 1, 3, [&](const Instance& inst) {
      ++instances;
      if (arc_filter(alldiff, inst) != brute_arc(inst, distinct)) o.fail("alldiff " + inst.to_string());
      if (arc_filter(sum6, inst) != brute_arc(inst, sums_to(6))) o.fail("sum=6 " + inst.to_string());
    });
  }
  const double t = seconds_since(start);
  if (instances != 7 + 49 + 343) o.fail("expected 399 instances, saw " + std::to_string(instances));
  if (t >= 5.0) o.fail("took " + std::to_string(t) + " s, limit 5 s");
  std::ostringstream d;
  d << instances << " instances x 2 checkers, exact, " << t << " s";
  o.detail = d.str();
  return o;
}

struct RandomCase {
  Instance instance;
  std::int64_t target;
};

// The 1,000 instances shared by criteria 2 and 3: arity 1..4, values -5..5.
std::vector<RandomCase> hierarchy_instances() {
  std::vector<RandomCase> out;
  Rng rng(20240601);
  GenConfig cfg;
  cfg.value_min = -5;
  cfg.value_max = 5;
  for (int k = 0; k < 1000; ++k) {
    cfg.n_vars = 1 + rng.below(4);
    const auto span = static_cast<std::int64_t>(cfg.n_vars) * 4;
    const std::int64_t target = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(2 * span + 1))) - span;
    out.push_back({generate_instance(rng, cfg), target});
  }
  return out;
}

struct LevelResults {
  FilterOutcome arc = FilterOutcome::inconsistent();
  FilterOutcome bz = FilterOutcome::inconsistent();
  FilterOutcome bd = FilterOutcome::inconsistent();
  FilterOutcome rg = FilterOutcome::inconsistent();
};

LevelResults all_levels(const Checker& c, const Instance& inst) {
  return {arc_filter(c, inst), bound_z_filter(c, inst), bound_d_filter(c, inst), range_filter(c, inst)};
}

// 2 and 3 share one pass over the instances.
void hierarchy_and_soundness() {
  Outcome hierarchy;
  Outcome soundness;
  const auto start = Clock::now();
  const auto cases = hierarchy_instances();
  std::size_t solutions_checked = 0;
  std::size_t inconsistent = 0;
  for (const RandomCase& rc : cases) {
    const Instance& inst = rc.instance;
    const std::size_t n = inst.arity();
    for (const Checker& c : {all_different_checker(n), sum_checker(n, rc.target)}) {
      const LevelResults r = all_levels(c, inst);
      const std::string where = c.name() + " " + inst.to_string();
      if (r.arc.is_inconsistent()) ++inconsistent;
      if (!pointwise_subset(r.arc, r.rg)) hierarchy.fail("arc not within range: " + where);
      if (!pointwise_subset(r.rg, r.bz)) hierarchy.fail("range not within boundz: " + where);
      if (!pointwise_subset(r.arc, r.bd)) hierarchy.fail("arc not within boundd: " + where);
      if (!pointwise_subset(r.bd, r.bz)) hierarchy.fail("boundd not within boundz: " + where);

      const Pred p = c.name() == "alldiff" ? Pred(distinct) : sums_to(rc.target);
      for (const Tuple& t : brute_solutions(inst, p)) {
        ++solutions_checked;
        for (const FilterOutcome* out : {&r.arc, &r.bz, &r.bd, &r.rg}) {
          if (out->is_inconsistent() || !member_of(t, out->instance())) {
            soundness.fail("solution removed: " + where);
          }
        }
      }
    }
  }
  const double t = seconds_since(start);
  if (t >= 60.0) hierarchy.fail("took " + std::to_string(t) + " s, limit 60 s");
  std::ostringstream d;
  d << cases.size() << " instances x 2 checkers, arc <= range <= boundz and arc <= boundd <= boundz, " << inconsistent
    << " arc-inconsistent cases, " << t << " s";
  hierarchy.detail = d.str();
  std::ostringstream s;
  s << solutions_checked << " enumerated solutions kept by all four levels";
  soundness.detail = s.str();
  report(2, "consistency hierarchy", hierarchy);
  report(3, "soundness", soundness);
}

// 4. mini-solver propagators equal their references on exhaustive sweeps.
Outcome dogfood() {
  Outcome o;
  const auto start = Clock::now();
  std::size_t ac_instances = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const Filter ac = mini::as_filter(mini::all_different_ac(), n);
    const Checker c = all_different_checker(n);
    for_each_instance(n, 1, 4, [&](const Instance& inst) {
      ++ac_instances;
      if (ac(inst) != arc_filter(c, inst)) o.fail("alldiff-ac " + inst.to_string());
    });
  }
  std::size_t sum_instances = 0;
  for (std::int64_t target : {0, 6, 15}) {
    for (std::size_t n = 1; n <= 3; ++n) {
      const Filter bc = mini::as_filter(mini::sum_equals_bc(target), n);
      const Checker c = sum_checker(n, target);
      for_each_instance(n, -3, 3, [&](const Instance& inst) {
        ++sum_instances;
        if (bc(inst) != bound_z_filter(c, inst)) o.fail("sum-bc=" + std::to_string(target) + " " + inst.to_string());
      });
    }
  }
  const double t = seconds_since(start);
  if (t >= 120.0) o.fail("took " + std::to_string(t) + " s, limit 120 s");
  std::ostringstream d;
  d << ac_instances << " alldiff instances, " << sum_instances << " sum instances (c in {0,6,15}), exact, " << t << " s";
  o.detail = d.str();
  return o;
}

struct ShrinkAudit {
  std::size_t counterexamples = 0;
  std::size_t not_minimal = 0;
  std::size_t not_reproduced = 0;
};

/// Re-verifies a static counterexample: it still fails, and no single-value
/// removal keeps it failing.
void audit_static(ShrinkAudit& audit, const Filter& trusted, const Filter& tested, const TestReport& r) {
  if (r.passed) return;
  ++audit.counterexamples;
  const Failure& f = *r.failure;
  auto fails = [&](const Instance& i) { return evaluate(trusted, tested, i, f.mode).failed(); };
  const Verdict v = evaluate(trusted, tested, f.shrunk, f.mode);
  if (!v.failed() || v.trusted != f.trusted || v.tested != f.tested || !fails(f.original)) ++audit.not_reproduced;
  if (!f.minimal || !is_one_minimal(f.shrunk, fails)) ++audit.not_minimal;
}

void audit_dives(ShrinkAudit& audit, const StatefulFactory& trusted, const StatefulFactory& tested,
                 const TestReport& r) {
  if (r.passed) return;
  ++audit.counterexamples;
  const Failure& f = *r.failure;
  auto fails = [&](const Instance& i) {
    return replay_transcript(i, f.transcript, trusted, tested, f.mode).mismatch.has_value();
  };
  const ReplayResult again = replay_transcript(f.shrunk, f.transcript, trusted, tested, f.mode);
  if (!again.mismatch || again.mismatch->trusted != f.trusted || again.mismatch->tested != f.tested ||
      !fails(f.original)) {
    ++audit.not_reproduced;
  }
  if (!f.minimal || !is_one_minimal(f.shrunk, fails)) ++audit.not_minimal;
}

// 5. Each seeded bug is found for at least 95 of the seeds 0..99 with the
// default generation parameters; the bug-free recipes pass on all of them.
Outcome bug_detection(ShrinkAudit& audit) {
  Outcome o;
  const auto start = Clock::now();
  const std::size_t n = GenConfig{}.n_vars;
  const Filter boundz_sum = make_reference(ConsistencyLevel::BoundZ, sum_checker(n, 15));
  const Filter sum_bc = mini::as_filter(mini::sum_equals_bc(15), n);
  const Filter sum_reversed = mini::as_filter(mini::with_bug(mini::BugId::SumReversedBound, mini::sum_equals_bc(15)), n);
  const Filter fc = mini::as_filter(mini::all_different_fc(), n);
  const Filter fc_skip = mini::as_filter(mini::with_bug(mini::BugId::AllDiffFcSkipLast, mini::all_different_fc()), n);
  const StatefulFactory inc_boundz = incremental_factory(boundz_sum);
  const StatefulFactory sum_stateful = mini::stateful_factory(mini::sum_equals_bc(15));
  const StatefulFactory sum_untrailed =
      mini::stateful_factory(mini::with_bug(mini::BugId::TrailNoRestore, mini::sum_equals_bc(15)));

  int reversed = 0;
  int skip_last = 0;
  int trail = 0;
  int false_alarms = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenConfig cfg;
    cfg.seed = seed;
    DiveConfig dives;
    dives.seed = seed;

    const TestReport a = check(boundz_sum, sum_reversed, cfg);
    const TestReport b = check(fc, fc_skip, cfg);
    const TestReport c = dive_campaign(inc_boundz, sum_untrailed, cfg, dives);
    reversed += !a.passed;
    skip_last += !b.passed;
    trail += !c.passed;
    audit_static(audit, boundz_sum, sum_reversed, a);
    audit_static(audit, fc, fc_skip, b);
    audit_dives(audit, inc_boundz, sum_untrailed, c);

    false_alarms += !check(boundz_sum, sum_bc, cfg).passed;
    false_alarms += !dive_campaign(inc_boundz, sum_stateful, cfg, dives).passed;
  }
  for (auto [name, rate] : {std::pair<const char*, int>{"REVERSED_BOUND", reversed}, {"FC_SKIP_LAST", skip_last},
                            {"TRAIL_NO_RESTORE", trail}}) {
    if (rate < 95) o.fail(std::string(name) + " detected for only " + std::to_string(rate) + "/100 seeds");
  }
  if (false_alarms) o.fail(std::to_string(false_alarms) + " campaigns flagged a bug-free recipe");
  std::ostringstream d;
  d << "REVERSED_BOUND " << reversed << "/100, FC_SKIP_LAST " << skip_last << "/100, TRAIL_NO_RESTORE " << trail
    << "/100; bug-free recipes flagged " << false_alarms << "/200; " << seconds_since(start) << " s";
  o.detail = d.str();
  return o;
}

struct Proc {
  int code = -1;
  std::string out;
};

Proc run_process(const std::string& command) {
  Proc p;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return p;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) p.out.append(buf.data(), n);
  const int status = pclose(pipe);
  p.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return p;
}

const std::string kCli = std::string("'") + PROPCHECK_CLI_PATH + "'";

// 6. Every counterexample is 1-minimal and replays.
Outcome shrinking_quality(ShrinkAudit& audit) {
  Outcome o;
  // campaigns beyond the bug corpus, across modes and arities
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    for (std::size_t n : {3u, 4u, 5u}) {
      GenConfig cfg;
      cfg.n_vars = n;
      cfg.seed = seed;
      const Filter arc = make_reference(ConsistencyLevel::Arc, all_different_checker(n));
      const Filter range = make_reference(ConsistencyLevel::Range, sum_checker(n, 12));
      const Filter arc_sum = make_reference(ConsistencyLevel::Arc, sum_checker(n, 12));
      const Filter fc = mini::as_filter(mini::all_different_fc(), n);
      const Filter id = identity_filter(n);
      audit_static(audit, arc, id, check(arc, id, cfg));
      audit_static(audit, arc, fc, stronger(arc, fc, cfg));
      audit_static(audit, arc_sum, range, check(arc_sum, range, cfg));
    }
  }

  // reports written by the tool replay through the tool
  std::size_t replays = 0;
  const std::string report = (std::filesystem::temp_directory_path() / "propcheck_acceptance_report.json").string();
  const std::vector<std::string> campaigns{
      "run --mode check --trusted boundz:sum=15 --tested 'sum-bc+bug:REVERSED_BOUND'",
      "run --mode check --trusted arc:alldiff --tested alldiff-fc",
      "run --mode stronger --trusted arc:alldiff --tested alldiff-fc",
      "dive --trusted boundz:sum=15 --tested 'sum-bc+bug:TRAIL_NO_RESTORE'"};
  for (const std::string& campaign : campaigns) {
    for (int seed = 0; seed < 5; ++seed) {
      const Proc r = run_process(kCli + " " + campaign + " --seed " + std::to_string(seed) + " > '" + report +
                                 "' 2>/dev/null; echo $?");
      if (r.out != "1\n") continue;
      ++replays;
      const Proc again = run_process(kCli + " replay --report '" + report + "' > /dev/null 2>&1");
      if (again.code != 1) o.fail("replay exited " + std::to_string(again.code) + " for: " + campaign);
    }
  }
  std::filesystem::remove(report);

  if (audit.not_minimal) o.fail(std::to_string(audit.not_minimal) + " counterexamples not 1-minimal");
  if (audit.not_reproduced) o.fail(std::to_string(audit.not_reproduced) + " counterexamples did not reproduce");
  if (replays == 0) o.fail("no report to replay");
  std::ostringstream d;
  d << audit.counterexamples << " counterexamples re-verified (1-minimal, reproducing), " << replays
    << " reports replayed through the executable";
  o.detail = d.str();
  return o;
}

// 7. Byte-identical stdout across two runs of the same command line.
Outcome determinism() {
  Outcome o;
  const std::vector<std::string> commands{
      "run --mode check --trusted boundz:sum=15 --tested sum-bc --seed 42 --tests 100",
      "run --mode check --trusted boundz:sum=15 --tested 'sum-bc+bug:REVERSED_BOUND' --seed 42",
      "run --mode stronger --trusted arc:alldiff --tested alldiff-fc --seed 5",
      "run --mode check --trusted range:alldiff --tested alldiff-ac --vars 4 --min -3 --max 3 --density 0.4",
      "dive --trusted boundz:sum=15 --tested sum-bc --dives 20 --seed 7",
      "dive --trusted boundz:sum=15 --tested 'sum-bc+bug:TRAIL_NO_RESTORE' --seed 7",
      "dive --trusted arc:alldiff --tested alldiff-ac --seed 3 --dives 50",
      "run --mode check --trusted arc:alldiff --tested alldiff-ac --seed 18446744073709551615"};
  for (const std::string& c : commands) {
    const Proc a = run_process(kCli + " " + c + " 2>/dev/null");
    const Proc b = run_process(kCli + " " + c + " 2>/dev/null");
    if (a.out.empty()) o.fail("no output: " + c);
    if (a.out != b.out || a.code != b.code) o.fail("outputs differ: " + c);
  }
  const std::string oracle =
      "echo '{\"domains\":[[1,2,3,4,5,6,7,8,9,10],[2,3],[2,3]]}' | " + kCli + " oracle --level boundz --checker sum=15";
  if (run_process(oracle).out != run_process(oracle).out) o.fail("oracle outputs differ");
  o.detail = std::to_string(commands.size() + 1) + " command lines run twice, stdout compared byte for byte";
  return o;
}

/// Wraps a stateful filter and checks that every Pop brings back the outcome
/// recorded at the matching Push.
class SnapshotAuditor final : public FilterWithState {
public:
  SnapshotAuditor(std::unique_ptr<FilterWithState> inner, std::size_t& pops, std::size_t& mismatches)
      : inner_(std::move(inner)), pops_(pops), mismatches_(mismatches) {}

  FilterOutcome setup(const Instance& root) override { return current_ = inner_->setup(root); }

  FilterOutcome branch_and_filter(const BranchOp& op) override {
    if (std::holds_alternative<Push>(op)) saved_.push_back(current_);
    current_ = inner_->branch_and_filter(op);
    if (std::holds_alternative<Pop>(op)) {
      ++pops_;
      if (saved_.empty() || current_ != saved_.back()) ++mismatches_;
      if (!saved_.empty()) saved_.pop_back();
    }
    return current_;
  }

private:
  std::unique_ptr<FilterWithState> inner_;
  std::size_t& pops_;
  std::size_t& mismatches_;
  FilterOutcome current_ = FilterOutcome::inconsistent();
  std::vector<FilterOutcome> saved_;
};

// 8. The incremental wrapper restores the Push-time outcome at every Pop.
Outcome dive_restoration() {
  Outcome o;
  std::size_t pops = 0;
  std::size_t mismatches = 0;
  std::size_t dives_run = 0;
  const std::size_t n = GenConfig{}.n_vars;
  const std::vector<Filter> bases{make_reference(ConsistencyLevel::BoundZ, sum_checker(n, 15)),
                                  make_reference(ConsistencyLevel::Arc, all_different_checker(n))};
  for (const Filter& base : bases) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      GenConfig gen;
      gen.seed = seed;
      Rng rng(seed);
      const Instance root = generate_instance(rng, gen);
      SnapshotAuditor trusted(incremental_wrap(base), pops, mismatches);
      auto other = incremental_wrap(base);
      DiveConfig cfg;
      cfg.seed = seed;
      const DiveResult r = dives(root, trusted, *other, cfg, rng);
      dives_run += r.dives;
      if (!r.passed) o.fail("self-comparison mismatch, seed " + std::to_string(seed));
    }
  }
  if (mismatches) o.fail(std::to_string(mismatches) + " pops did not restore the pushed outcome");
  if (dives_run != 2 * 50 * 20) o.fail("expected 2000 dives, ran " + std::to_string(dives_run));
  if (pops == 0) o.fail("no pop was issued");
  std::ostringstream d;
  d << dives_run << " dives (20 x 50 seeds, for boundz:sum=15 and arc:alldiff), " << pops << " pops checked, "
    << mismatches << " mismatches";
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  report(1, "arc filtering equals the union of solutions", oracle_equivalence());
  hierarchy_and_soundness();
  report(4, "mini-solver propagators equal their references", dogfood());
  ShrinkAudit audit;
  report(5, "seeded bugs are detected", bug_detection(audit));
  report(6, "counterexamples are 1-minimal and replay", shrinking_quality(audit));
  report(7, "CLI output is deterministic", determinism());
  report(8, "dive pops restore pushed state", dive_restoration());
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? 0 : 1;
}
