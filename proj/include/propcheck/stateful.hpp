#pragma once

// Testing of stateful (incremental) filters along random search dives.
//
// A dive interleaves Push and a random RestrictDomain until a leaf is
// reached, then pops a random number of states:
//
//   while dives < nbDives:
//     while !leaf(current): push; restrict(random); compare
//     dives += 1
//     pop Random(1, pushes - 1) times (once when only one push is open)
//
// Both sides see the same operations; outcomes are compared after every
// operation so that a divergence is reported at the earliest point.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "propcheck/branch_op.hpp"
#include "propcheck/comparator.hpp"
#include "propcheck/domain.hpp"
#include "propcheck/filter.hpp"
#include "propcheck/generator.hpp"
#include "propcheck/report.hpp"
#include "propcheck/rng.hpp"

namespace propcheck {

/// A filter that owns a search state. setup() is called exactly once, before
/// any branch_and_filter(); every call returns the current outcome.
class FilterWithState {
public:
  virtual ~FilterWithState() = default;
  virtual FilterOutcome setup(const Instance& root) = 0;
  virtual FilterOutcome branch_and_filter(const BranchOp& op) = 0;
};

using StatefulFactory = std::function<std::unique_ptr<FilterWithState>()>;

/// Keeps the values of domain `r.index` satisfying the relation; nullopt when
/// that domain empties.
[[nodiscard]] inline std::optional<Instance> apply_restriction(const Instance& inst, const RestrictDomain& r) {
  if (r.index >= inst.arity()) {
    throw ContractError("restriction index " + std::to_string(r.index) + " out of range for arity " +
                        std::to_string(inst.arity()));
  }
  Domain d = inst[r.index].filter([&](Value v) { return holds(r.relation, v, r.constant); });
  if (d.empty()) return std::nullopt;
  return inst.with_domain(r.index, std::move(d));
}

/// Variable uniform among the unfixed ones, then relation uniform over
/// {=, !=, <, >}, then constant uniform in the chosen domain.
[[nodiscard]] inline RestrictDomain random_restriction(Rng& rng, const Instance& inst) {
  std::vector<std::size_t> unfixed;
  for (std::size_t i = 0; i < inst.arity(); ++i) {
    if (inst[i].size() > 1) unfixed.push_back(i);
  }
  if (unfixed.empty()) throw ContractError("random_restriction needs at least one unfixed variable");
  RestrictDomain r;
  r.index = unfixed[rng.below(unfixed.size())];
  r.relation = static_cast<Relation>(rng.below(4));
  const auto values = inst[r.index].values();
  r.constant = values[rng.below(values.size())];
  return r;
}

/// Makes any static filter stateful by snapshotting the current outcome on
/// Push and re-running the filter after every restriction.
class IncrementalFiltering final : public FilterWithState {
public:
  explicit IncrementalFiltering(Filter base) : base_(std::move(base)) {}

  FilterOutcome setup(const Instance& root) override {
    if (current_) throw ContractError("setup called twice");
    current_ = root.has_empty_domain() ? FilterOutcome::inconsistent() : base_.apply(root);
    return *current_;
  }

  FilterOutcome branch_and_filter(const BranchOp& op) override {
    if (!current_) throw ContractError("branch_and_filter called before setup");
    if (std::holds_alternative<Push>(op)) {
      saved_.push_back(*current_);
    } else if (std::holds_alternative<Pop>(op)) {
      if (saved_.empty()) throw ContractError("pop without a matching push");
      current_ = std::move(saved_.back());
      saved_.pop_back();
    } else if (current_->is_filtered()) {
      auto restricted = apply_restriction(current_->instance(), std::get<RestrictDomain>(op));
      current_ = restricted ? base_.apply(*restricted) : FilterOutcome::inconsistent();
    }
    return *current_;
  }

  [[nodiscard]] std::size_t depth() const noexcept { return saved_.size(); }

private:
  Filter base_;
  std::optional<FilterOutcome> current_;
  std::vector<FilterOutcome> saved_;
};

[[nodiscard]] inline std::unique_ptr<FilterWithState> incremental_wrap(Filter base) {
  return std::make_unique<IncrementalFiltering>(std::move(base));
}

[[nodiscard]] inline StatefulFactory incremental_factory(Filter base) {
  return [base = std::move(base)]() -> std::unique_ptr<FilterWithState> { return incremental_wrap(base); };
}

struct DiveConfig {
  std::size_t nb_dives = 20;
  /// Restrictions per dive before the dive is cut and treated as a leaf.
  std::size_t max_depth = 64;
  std::uint64_t seed = 0;

  void validate() const {
    if (nb_dives < 1) throw ContractError("DiveConfig: nbDives must be at least 1");
    if (max_depth < 1) throw ContractError("DiveConfig: maxDepth must be at least 1");
  }
};

struct DiveResult {
  bool passed = true;
  std::size_t dives = 0;
  std::size_t depth_cap_hits = 0;
  /// Operations issued after setup, up to and including the mismatching one.
  std::vector<BranchOp> transcript;
  std::optional<Verdict> mismatch;
};

namespace detail {

template <class Call>
FilterOutcome run_tested_stateful(Call&& call) {
  try {
    return call();
  } catch (const ContractError&) {
    throw;
  } catch (const ResourceLimitError&) {
    throw;
  } catch (const std::exception&) {
    return FilterOutcome::inconsistent();
  }
}

inline void require_arity(const FilterOutcome& o, std::size_t arity, const char* side) {
  if (o.is_filtered() && o.instance().arity() != arity) {
    throw ContractError(std::string(side) + " stateful filter returned arity " + std::to_string(o.instance().arity()) +
                        ", expected " + std::to_string(arity));
  }
}

/// Drives both sides in lockstep and compares after each call.
class Lockstep {
public:
  Lockstep(FilterWithState& trusted, FilterWithState& tested, std::size_t arity, ComparisonMode mode)
      : trusted_(trusted), tested_(tested), arity_(arity), mode_(mode) {}

  /// Returns the failing verdict, if any.
  std::optional<Verdict> setup(const Instance& root) {
    FilterOutcome t = trusted_.setup(root);
    FilterOutcome s = run_tested_stateful([&] { return tested_.setup(root); });
    return compare(std::move(t), std::move(s));
  }

  std::optional<Verdict> apply(const BranchOp& op) {
    FilterOutcome t = trusted_.branch_and_filter(op);
    FilterOutcome s = run_tested_stateful([&] { return tested_.branch_and_filter(op); });
    return compare(std::move(t), std::move(s));
  }

  [[nodiscard]] const FilterOutcome& trusted_current() const { return *current_; }

private:
  std::optional<Verdict> compare(FilterOutcome t, FilterOutcome s) {
    require_arity(t, arity_, "trusted");
    require_arity(s, arity_, "tested");
    current_ = t;
    Verdict v = compare_outcomes(std::move(t), std::move(s), mode_);
    if (v.failed()) return v;
    return std::nullopt;
  }

  FilterWithState& trusted_;
  FilterWithState& tested_;
  std::size_t arity_;
  ComparisonMode mode_;
  std::optional<FilterOutcome> current_;
};

}  // namespace detail

/// Runs cfg.nb_dives dives from `root`, drawing restrictions from `rng` on
/// the trusted side's current domains. Stops at the first mismatch.
[[nodiscard]] inline DiveResult dives(const Instance& root, FilterWithState& trusted, FilterWithState& tested,
                                      const DiveConfig& cfg, Rng& rng,
                                      ComparisonMode mode = ComparisonMode::Equality) {
  cfg.validate();
  DiveResult result;
  detail::Lockstep lockstep(trusted, tested, root.arity(), mode);

  auto issue = [&](const BranchOp& op) {
    result.transcript.push_back(op);
    result.mismatch = lockstep.apply(op);
    return result.mismatch.has_value();
  };

  if ((result.mismatch = lockstep.setup(root))) {
    result.passed = false;
    return result;
  }

  std::size_t pushes = 0;
  while (result.dives < cfg.nb_dives) {
    std::size_t depth = 0;
    while (!is_leaf(lockstep.trusted_current())) {
      if (depth == cfg.max_depth) {
        ++result.depth_cap_hits;
        break;
      }
      if (issue(Push{})) break;
      ++pushes;
      if (issue(random_restriction(rng, lockstep.trusted_current().instance()))) break;
      ++depth;
    }
    if (result.mismatch) break;
    ++result.dives;
    if (pushes == 0) continue;
    const std::size_t pops = pushes >= 2 ? 1 + static_cast<std::size_t>(rng.below(pushes - 1)) : 1;
    for (std::size_t k = 0; k < pops; ++k) {
      --pushes;
      if (issue(Pop{})) break;
    }
    if (result.mismatch) break;
  }
  if (result.mismatch) {
    result.passed = false;
    // the dive that failed counts as run
    ++result.dives;
  }
  return result;
}

[[nodiscard]] inline DiveResult dives(const Instance& root, FilterWithState& trusted, FilterWithState& tested,
                                      const DiveConfig& cfg, ComparisonMode mode = ComparisonMode::Equality) {
  Rng rng(cfg.seed);
  return dives(root, trusted, tested, cfg, rng, mode);
}

struct ReplayResult {
  std::optional<Verdict> mismatch;
  /// Operations applied after setup before the mismatch (or all of them).
  std::size_t steps = 0;
};

/// Replays a recorded transcript on fresh stateful filters.
[[nodiscard]] inline ReplayResult replay_transcript(const Instance& root, std::span<const BranchOp> transcript,
                                                    FilterWithState& trusted, FilterWithState& tested,
                                                    ComparisonMode mode = ComparisonMode::Equality) {
  ReplayResult result;
  detail::Lockstep lockstep(trusted, tested, root.arity(), mode);
  if ((result.mismatch = lockstep.setup(root))) return result;
  for (const BranchOp& op : transcript) {
    if (const auto* r = std::get_if<RestrictDomain>(&op); r && r->index >= root.arity()) {
      throw ContractError("transcript restriction index out of range");
    }
    ++result.steps;
    if ((result.mismatch = lockstep.apply(op))) return result;
  }
  return result;
}

[[nodiscard]] inline ReplayResult replay_transcript(const Instance& root, std::span<const BranchOp> transcript,
                                                    const StatefulFactory& trusted, const StatefulFactory& tested,
                                                    ComparisonMode mode = ComparisonMode::Equality) {
  auto t = trusted();
  auto s = tested();
  return replay_transcript(root, transcript, *t, *s, mode);
}

/// Dive campaign: draws one root from `gen` (seeded by gen.seed; the same
/// generator then drives the restrictions), runs the dives, and on mismatch
/// shrinks the root while keeping the recorded transcript fixed.
[[nodiscard]] inline TestReport dive_campaign(const StatefulFactory& trusted, const StatefulFactory& tested,
                                              const GenConfig& gen, const DiveConfig& cfg,
                                              ComparisonMode mode = ComparisonMode::Equality,
                                              const CampaignOptions& opts = {}) {
  gen.validate();
  cfg.validate();
  TestReport report;
  report.kind = CampaignKind::Dives;
  report.mode = mode;
  report.seed = gen.seed;

  Rng rng(gen.seed);
  const Instance root = draw_within_cap(rng, gen, opts, report.redraws);
  auto t = trusted();
  auto s = tested();
  DiveResult run = dives(root, *t, *s, cfg, rng, mode);
  report.tests_run = run.dives;
  report.depth_cap_hits = run.depth_cap_hits;
  if (run.passed) return report;

  const std::vector<BranchOp>& transcript = run.transcript;
  auto fails = [&](const Instance& candidate) {
    return replay_transcript(candidate, transcript, trusted, tested, mode).mismatch.has_value();
  };
  ShrinkResult shrunk = shrink(root, fails, opts.shrink_budget);
  ReplayResult final_run = replay_transcript(shrunk.instance, transcript, trusted, tested, mode);
  if (!final_run.mismatch) {
    // the subject is not deterministic; report the unshrunk failure
    shrunk.instance = root;
    shrunk.minimal = false;
    final_run.mismatch = run.mismatch;
  }
  Verdict& v = *final_run.mismatch;
  report.passed = false;
  report.failure = Failure{root,
                           shrunk.instance,
                           std::move(v.trusted),
                           std::move(v.tested),
                           mode,
                           *v.failure,
                           v.message,
                           shrunk.minimal,
                           transcript};
  return report;
}

/// Fluent assertions over a stateful filter, run as dive campaigns.
class FilterWithStateAssert {
public:
  FilterWithStateAssert(StatefulFactory tested, GenConfig gen, DiveConfig cfg)
      : tested_(std::move(tested)), gen_(gen), cfg_(cfg) {}

  FilterWithStateAssert& filter_as(const StatefulFactory& trusted) {
    return run(trusted, ComparisonMode::Equality);
  }
  FilterWithStateAssert& weaker_than(const StatefulFactory& trusted) {
    return run(trusted, ComparisonMode::TestedSubsetOfTrusted);
  }

private:
  FilterWithStateAssert& run(const StatefulFactory& trusted, ComparisonMode mode) {
    TestReport r = dive_campaign(trusted, tested_, gen_, cfg_, mode);
    if (!r.passed) throw AssertionFailure(std::move(r));
    return *this;
  }

  StatefulFactory tested_;
  GenConfig gen_;
  DiveConfig cfg_;
};

[[nodiscard]] inline FilterWithStateAssert assert_that(StatefulFactory tested, GenConfig gen, DiveConfig cfg = {}) {
  return FilterWithStateAssert(std::move(tested), gen, cfg);
}

}  // namespace propcheck
