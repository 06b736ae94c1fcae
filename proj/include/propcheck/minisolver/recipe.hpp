#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "propcheck/branch_op.hpp"
#include "propcheck/domain.hpp"
#include "propcheck/filter.hpp"
#include "propcheck/minisolver/propagators.hpp"
#include "propcheck/minisolver/solver.hpp"
#include "propcheck/stateful.hpp"

namespace propcheck::mini {

/// Deliberately injected defects, reachable only through with_bug().
enum class BugId {
  None,
  SumReversedBound,  ///< sum-bc swaps the two bounds of its formula (over-filters)
  AllDiffFcSkipLast, ///< alldiff-fc never prunes the highest-index variable (under-filters)
  TrailNoRestore     ///< the fixed-variable count is not trailed (stale after pop)
};

[[nodiscard]] constexpr std::string_view to_string(BugId id) noexcept {
  switch (id) {
    case BugId::None: return "NONE";
    case BugId::SumReversedBound: return "REVERSED_BOUND";
    case BugId::AllDiffFcSkipLast: return "FC_SKIP_LAST";
    case BugId::TrailNoRestore: return "TRAIL_NO_RESTORE";
  }
  return "?";
}

/// Accepts the short names and the BUG_-prefixed forms.
[[nodiscard]] inline std::optional<BugId> parse_bug_id(std::string_view s) {
  if (s.starts_with("BUG_")) s.remove_prefix(4);
  for (BugId id : {BugId::None, BugId::SumReversedBound, BugId::AllDiffFcSkipLast, BugId::TrailNoRestore}) {
    if (s == to_string(id)) return id;
  }
  return std::nullopt;
}

enum class PropagatorKind { SumBC, AllDiffFC, AllDiffAC };

/// How to build one propagator over a fresh set of variables.
struct Recipe {
  PropagatorKind kind = PropagatorKind::SumBC;
  std::int64_t target = 0;  ///< sum-bc only
  BugId bug = BugId::None;

  [[nodiscard]] std::string name() const {
    std::string n;
    switch (kind) {
      case PropagatorKind::SumBC: n = "sum-bc=" + std::to_string(target); break;
      case PropagatorKind::AllDiffFC: n = "alldiff-fc"; break;
      case PropagatorKind::AllDiffAC: n = "alldiff-ac"; break;
    }
    if (bug != BugId::None) n += "+bug:" + std::string(to_string(bug));
    return n;
  }

  void post(Solver& solver, std::vector<TrailedVar*> vars) const {
    const bool untrailed = bug == BugId::TrailNoRestore;
    switch (kind) {
      case PropagatorKind::SumBC:
        solver.post(std::make_unique<SumEqualsBC>(solver.trail(), std::move(vars), target,
                                                  SumEqualsBC::Defects{bug == BugId::SumReversedBound, untrailed}));
        return;
      case PropagatorKind::AllDiffFC:
        solver.post(std::make_unique<AllDifferentFC>(solver.trail(), std::move(vars),
                                                     AllDifferentFC::Defects{bug == BugId::AllDiffFcSkipLast, untrailed}));
        return;
      case PropagatorKind::AllDiffAC:
        solver.post(std::make_unique<AllDifferentAC>(solver.trail(), std::move(vars), AllDifferentAC::Defects{untrailed}));
        return;
    }
  }

  friend bool operator==(const Recipe&, const Recipe&) = default;
};

[[nodiscard]] inline Recipe sum_equals_bc(std::int64_t target) { return Recipe{PropagatorKind::SumBC, target, BugId::None}; }
[[nodiscard]] inline Recipe all_different_fc() { return Recipe{PropagatorKind::AllDiffFC, 0, BugId::None}; }
[[nodiscard]] inline Recipe all_different_ac() { return Recipe{PropagatorKind::AllDiffAC, 0, BugId::None}; }

/// Injects a defect. REVERSED_BOUND needs sum-bc, FC_SKIP_LAST needs
/// alldiff-fc, TRAIL_NO_RESTORE fits any recipe.
[[nodiscard]] inline Recipe with_bug(BugId id, Recipe recipe) {
  const bool compatible = id == BugId::None || id == BugId::TrailNoRestore ||
                          (id == BugId::SumReversedBound && recipe.kind == PropagatorKind::SumBC) ||
                          (id == BugId::AllDiffFcSkipLast && recipe.kind == PropagatorKind::AllDiffFC);
  if (!compatible) {
    throw ContractError("bug " + std::string(to_string(id)) + " does not apply to recipe " + recipe.name());
  }
  recipe.bug = id;
  return recipe;
}

namespace detail {

inline std::vector<TrailedVar*> make_vars(Solver& solver, const Instance& inst) {
  std::vector<TrailedVar*> vars;
  vars.reserve(inst.arity());
  for (const Domain& d : inst) vars.push_back(&solver.make_var(d));
  return vars;
}

}  // namespace detail

/// Static filter: a fresh solver per call, the recipe posted, domains read back.
[[nodiscard]] inline Filter as_filter(Recipe recipe, std::size_t arity) {
  std::string name = recipe.name();
  return Filter(
      arity,
      [recipe](const Instance& inst) {
        if (inst.has_empty_domain()) return FilterOutcome::inconsistent();
        Solver solver;
        try {
          recipe.post(solver, detail::make_vars(solver, inst));
        } catch (const Inconsistency&) {
          return FilterOutcome::inconsistent();
        }
        return FilterOutcome::filtered(solver.domains());
      },
      std::move(name));
}

/// Stateful adapter: branching operations map onto push_state/pop_state and
/// domain restrictions, each followed by a fixpoint.
class SolverFilterWithState final : public FilterWithState {
public:
  explicit SolverFilterWithState(Recipe recipe) : recipe_(recipe) {}

  FilterOutcome setup(const Instance& root) override {
    if (solver_) throw ContractError("setup called twice");
    solver_ = std::make_unique<Solver>();
    arity_ = root.arity();
    if (root.has_empty_domain()) {
      failed_ = true;
      return current();
    }
    try {
      recipe_.post(*solver_, detail::make_vars(*solver_, root));
    } catch (const Inconsistency&) {
      failed_ = true;
    }
    return current();
  }

  FilterOutcome branch_and_filter(const BranchOp& op) override {
    if (!solver_) throw ContractError("branch_and_filter called before setup");
    if (std::holds_alternative<Push>(op)) {
      solver_->push_state();
      saved_failed_.push_back(failed_);
    } else if (std::holds_alternative<Pop>(op)) {
      if (saved_failed_.empty()) throw ContractError("pop without a matching push");
      solver_->pop_state();
      failed_ = saved_failed_.back();
      saved_failed_.pop_back();
      if (!failed_) run([&] { solver_->schedule_all(); });
    } else {
      const auto& r = std::get<RestrictDomain>(op);
      if (r.index >= arity_) throw ContractError("restriction index out of range");
      if (!failed_) run([&] { restrict(solver_->var(r.index), r); });
    }
    return current();
  }

private:
  template <class Action>
  void run(Action&& action) {
    try {
      action();
      solver_->fixpoint();
    } catch (const Inconsistency&) {
      failed_ = true;
    }
  }

  static void restrict(TrailedVar& x, const RestrictDomain& r) {
    const std::int64_t c = r.constant;
    switch (r.relation) {
      case Relation::Eq: x.assign(c); break;
      case Relation::Neq: x.remove_value(c); break;
      case Relation::Lt: x.remove_above(c - 1); break;
      case Relation::Gt: x.remove_below(c + 1); break;
    }
  }

  [[nodiscard]] FilterOutcome current() const {
    if (failed_) return FilterOutcome::inconsistent();
    return FilterOutcome::filtered(solver_->domains());
  }

  Recipe recipe_;
  std::unique_ptr<Solver> solver_;
  std::size_t arity_ = 0;
  bool failed_ = false;
  std::vector<bool> saved_failed_;
};

[[nodiscard]] inline std::unique_ptr<FilterWithState> as_filter_with_state(Recipe recipe) {
  return std::make_unique<SolverFilterWithState>(recipe);
}

[[nodiscard]] inline StatefulFactory stateful_factory(Recipe recipe) {
  return [recipe]() -> std::unique_ptr<FilterWithState> { return as_filter_with_state(recipe); };
}

}  // namespace propcheck::mini
